"""Backend selection for the statevector kernels.

The compiled Cython module is used when it was built; otherwise the numpy
implementation is loaded. Set ``QGHNN_BACKEND=python`` to force the fallback
(useful for benchmarking and for checking the two against each other).
"""

from __future__ import annotations

import logging
import os
from types import ModuleType

from . import _kernels_py

log = logging.getLogger(__name__)


def _load_compiled() -> ModuleType | None:
    try:
        from . import _kernels_c
    except ImportError:
        return None
    return _kernels_c


def available_backends() -> dict[str, ModuleType]:
    out = {"python": _kernels_py}
    compiled = _load_compiled()
    if compiled is not None:
        out["cython"] = compiled
    return out


def _select() -> tuple[str, ModuleType]:
    wanted = os.environ.get("QGHNN_BACKEND", "auto").lower()
    backends = available_backends()
    if wanted == "auto":
        name = "cython" if "cython" in backends else "python"
    elif wanted in backends:
        name = wanted
    else:
        log.warning("QGHNN_BACKEND=%s unavailable, using numpy kernels", wanted)
        name = "python"
    return name, backends[name]


BACKEND, _impl = _select()

apply_program = _impl.apply_program
expectation = _impl.expectation
program_expectation = _impl.program_expectation
