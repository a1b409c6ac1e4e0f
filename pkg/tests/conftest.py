import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qghnn import kernels  # noqa: E402

_CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request, monkeypatch):
    """Run a test once per kernel backend by swapping the dispatch functions."""
    impl = kernels.available_backends()[request.param]
    for name in ("apply_program", "expectation", "program_expectation"):
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


@pytest.fixture
def record_criterion():
    def record(key: str, passed: bool, detail: str = "") -> None:
        _CRITERIA[key] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: int(k.split(".")[0])):
        passed, detail = _CRITERIA[key]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {key}  {detail}")


@pytest.fixture(scope="session")
def exp01_result():
    """The bundled exp01 pipeline run once per session (about a second with the compiled kernel)."""
    from qghnn.experiment import load_config, run_experiment

    return run_experiment(load_config("exp01"))
