"""Gradient-descent training of the ansatz against a Pauli Hamiltonian.

The loss is the energy ``<psi(theta)|H|psi(theta)>``. Gradients come from
central finite differences and the update is plain ``theta -= R * grad``.
Each restart draws its initial angles uniformly from ``[0, 2 pi)`` using a
generator spawned from the root seed, and the restart with the lowest final
loss is reported. Training stops early once the loss is within ``gap_delta``
of the exact ground energy.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .circuit import CircuitSpec, CompiledCircuit
from .errors import InvalidArgumentError, NumericalFailureError
from .pauli import PauliOperator, exact_spectrum, normalize_spectral
from .statevector import StateVector

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    steps: int = 500
    fd_delta: float = 1e-3
    # "batch size" in the experiment tables; the loss is deterministic, so batches become restarts
    restarts: int = 10
    seed: int = 0
    gap_delta: float = 1e-3
    normalize_hamiltonian: bool = True
    log_every: int = 10

    def __post_init__(self):
        if not (self.learning_rate > 0 and self.fd_delta > 0):
            raise InvalidArgumentError("learning_rate and fd_delta must be positive")
        if self.steps < 1 or self.restarts < 1:
            raise InvalidArgumentError("steps and restarts must be at least 1")
        if not self.gap_delta >= 0:
            raise InvalidArgumentError("gap_delta must be non-negative")

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise InvalidArgumentError(f"unknown training options: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class TrainReport:
    loss_curve: list[float]
    final_params: np.ndarray
    final_loss: float
    ground_energy: float
    converged: bool
    best_restart: int
    restart_final_losses: list[float] = field(default_factory=list)
    hamiltonian_scale: float = 1.0

    def to_dict(self) -> dict:
        return {
            "final_loss": self.final_loss,
            "ground_energy": self.ground_energy,
            "converged": self.converged,
            "best_restart": self.best_restart,
            "steps_run": len(self.loss_curve),
            "hamiltonian_scale": self.hamiltonian_scale,
            "restart_final_losses": list(self.restart_final_losses),
            "final_params": [float(x) for x in self.final_params],
            "loss_curve": list(self.loss_curve),
        }


class EnergyLoss:
    """Callable ``params -> <psi(params)|H|psi(params)>`` with reusable buffers.

    Not thread-safe (owns a scratch vector); make one per worker.
    """

    def __init__(self, spec: CircuitSpec, psi0: StateVector, h: PauliOperator):
        if not (spec.n_qubits == psi0.n == h.n):
            raise InvalidArgumentError(
                f"dimension mismatch: circuit {spec.n_qubits}, state {psi0.n}, operator {h.n} qubits"
            )
        self.spec = spec
        self.circuit = CompiledCircuit(spec)
        self.psi0 = np.ascontiguousarray(psi0.amps)
        self.flips, self.diags = h.compiled
        self._work = np.empty_like(self.psi0)

    def __call__(self, params: np.ndarray) -> float:
        c = self.circuit
        value = kernels.program_expectation(
            self.psi0, self._work, self.spec.n_qubits, c.kinds, c.q0, c.q1,
            c.angles(params), self.flips, self.diags,
        )
        return value.real

    def gradient(self, params: np.ndarray, delta: float) -> np.ndarray:
        return central_difference(self, params, delta)


def central_difference(f, params: np.ndarray, delta: float) -> np.ndarray:
    grad = np.empty(params.shape[0])
    probe = params.copy()
    for j in range(params.shape[0]):
        probe[j] = params[j] + delta
        up = f(probe)
        probe[j] = params[j] - delta
        down = f(probe)
        probe[j] = params[j]
        grad[j] = (up - down) / (2.0 * delta)
    return grad


def loss(spec: CircuitSpec, params, psi0: StateVector, h: PauliOperator) -> float:
    return EnergyLoss(spec, psi0, h)(spec.check_params(params))


def gradient_fd(spec: CircuitSpec, params, psi0: StateVector, h: PauliOperator, delta: float = 1e-3) -> np.ndarray:
    if not delta > 0:
        raise InvalidArgumentError(f"finite-difference step must be positive, got {delta}")
    return EnergyLoss(spec, psi0, h).gradient(spec.check_params(params), delta)


@dataclass
class _Restart:
    index: int
    loss_curve: list[float]
    params: np.ndarray
    converged: bool

    @property
    def final_loss(self) -> float:
        return self.loss_curve[-1]


def _descend(index, seed_seq, spec, cfg, psi0, h, ground) -> _Restart:
    rng = np.random.default_rng(seed_seq)
    f = EnergyLoss(spec, psi0, h)
    theta = rng.uniform(0.0, 2.0 * math.pi, spec.n_params)
    curve: list[float] = []
    converged = False
    for step in range(cfg.steps):
        value = f(theta)
        if not math.isfinite(value):
            raise NumericalFailureError(f"non-finite loss at step {step} (restart {index})", step=step)
        curve.append(value)
        if cfg.log_every and step % cfg.log_every == 0:
            log.info("restart %d step %d loss %.6f", index, step, value)
        if abs(value - ground) < cfg.gap_delta:
            converged = True
            break
        if step == cfg.steps - 1:
            break
        theta = theta - cfg.learning_rate * f.gradient(theta, cfg.fd_delta)
    log.info("restart %d: final loss %.6f after %d steps", index, curve[-1], len(curve))
    return _Restart(index, curve, theta, converged)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("QGHNN_THREADS", "1")))
    except ValueError:
        return 1


def prepare_hamiltonian(h: PauliOperator, normalize: bool) -> tuple[PauliOperator, float]:
    if normalize and not h.is_zero():
        return normalize_spectral(h)
    return h, 1.0


def train(spec: CircuitSpec, cfg: TrainConfig, psi0: StateVector, h: PauliOperator) -> TrainReport:
    h, scale = prepare_hamiltonian(h, cfg.normalize_hamiltonian)
    EnergyLoss(spec, psi0, h)  # dimension check before spawning work
    ground = exact_spectrum(h).min_eig
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    jobs = [(i, s, spec, cfg, psi0, h, ground) for i, s in enumerate(seeds)]
    workers = min(worker_count(), cfg.restarts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(lambda job: _descend(*job), jobs))
    else:
        runs = [_descend(*job) for job in jobs]
    best = min(runs, key=lambda r: (r.final_loss, r.index))
    return TrainReport(
        loss_curve=best.loss_curve,
        final_params=best.params,
        final_loss=best.final_loss,
        ground_energy=ground,
        converged=best.converged,
        best_restart=best.index,
        restart_final_losses=[r.final_loss for r in runs],
        hamiltonian_scale=scale,
    )
