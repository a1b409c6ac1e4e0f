"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times three workloads on each available backend: one pass of the exp01
ansatz, one energy evaluation (circuit plus Pauli expectation) and one
finite-difference gradient. Results are checked to agree before timing.
"""

import argparse
import timeit

import numpy as np

from qghnn import kernels
from qghnn.experiment import load_config
from qghnn.trainer import EnergyLoss, prepare_hamiltonian


def _use(impl):
    for name in ("apply_program", "expectation", "program_expectation"):
        setattr(kernels, name, getattr(impl, name))


def workloads(name: str):
    cfg = load_config(name)
    spec, psi0 = cfg.circuit_spec(), cfg.initial_state()
    h, _ = prepare_hamiltonian(cfg.hamiltonian(), True)
    params = np.random.default_rng(0).uniform(0, 2 * np.pi, spec.n_params)
    f = EnergyLoss(spec, psi0, h)
    return {
        "circuit": lambda: f.circuit.run_amps(params, psi0.amps),
        "energy": lambda: f(params),
        "gradient": lambda: f.gradient(params, 1e-3),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--configs", default="exp01,exp02,exp03")
    args = parser.parse_args()

    backends = kernels.available_backends()
    original = kernels.available_backends()[kernels.BACKEND]
    print(f"backends: {', '.join(sorted(backends))} (default {kernels.BACKEND})")
    print(f"{'config':<7} {'workload':<9} " + " ".join(f"{b + ' [ms]':>14}" for b in sorted(backends)) + "  speedup")
    for name in args.configs.split(","):
        results, times = {}, {}
        for b in sorted(backends):
            _use(backends[b])
            wl = workloads(name)
            results[b] = float(wl["energy"]())
            for key, fn in wl.items():
                n = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
                best = min(timeit.repeat(fn, number=n, repeat=args.repeat)) / n
                times[b, key] = best * 1e3
        vals = list(results.values())
        assert np.allclose(vals, vals[0], atol=1e-12), results
        for key in ("circuit", "energy", "gradient"):
            row = [times[b, key] for b in sorted(backends)]
            speed = ""
            if {"cython", "python"} <= set(backends):
                speed = f"{times['python', key] / times['cython', key]:7.1f}x"
            print(f"{name:<7} {key:<9} " + " ".join(f"{t:14.3f}" for t in row) + "  " + speed)
    _use(original)


if __name__ == "__main__":
    main()
