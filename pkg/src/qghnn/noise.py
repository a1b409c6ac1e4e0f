"""Stochastic Pauli noise on the ansatz (trajectory sampling).

After every gate, each qubit the gate touched independently suffers, with
probability ``p``, one Pauli drawn uniformly from ``kinds``. Averaging the
energy over trajectories estimates the noisy loss without density matrices.
This is an extension study; nothing here feeds back into training.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import CircuitSpec, CompiledCircuit, run_circuit
from .errors import InvalidArgumentError
from .pauli import PauliOperator, expectation
from .statevector import GATE_CODES, StateVector
from .trainer import loss

_PAULI_CODES = {k: GATE_CODES[k] for k in "XYZ"}


@dataclass(frozen=True)
class NoiseModel:
    p: float
    kinds: tuple[str, ...] = ("X", "Y", "Z")
    seed: int = 0

    def __post_init__(self):
        kinds = tuple(k.upper() for k in self.kinds)
        object.__setattr__(self, "kinds", kinds)
        if not 0.0 <= self.p <= 1.0:
            raise InvalidArgumentError(f"noise probability must lie in [0, 1], got {self.p}")
        if set(kinds) - set(_PAULI_CODES):
            raise InvalidArgumentError(f"noise kinds must be drawn from X, Y, Z, got {kinds}")
        if self.p > 0 and not kinds:
            raise InvalidArgumentError("noise kinds must be non-empty when p > 0")

    def to_dict(self) -> dict:
        return {"p": self.p, "kinds": list(self.kinds), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseModel":
        return cls(float(d["p"]), tuple(d.get("kinds", ("X", "Y", "Z"))), int(d.get("seed", 0)))


def _noisy_program(circ: CompiledCircuit, params: np.ndarray, model: NoiseModel, rng: np.random.Generator):
    angles = circ.angles(params)
    kinds, q0, q1, ang = [], [], [], []
    codes = [_PAULI_CODES[k] for k in model.kinds]
    cnot = GATE_CODES["CNOT"]
    for g in range(len(circ)):
        kinds.append(circ.kinds[g])
        q0.append(circ.q0[g])
        q1.append(circ.q1[g])
        ang.append(angles[g])
        touched = (circ.q0[g], circ.q1[g]) if circ.kinds[g] == cnot else (circ.q0[g],)
        for q in touched:
            if rng.random() < model.p:
                kinds.append(codes[rng.integers(len(codes))])
                q0.append(q)
                q1.append(q)
                ang.append(0.0)
    return (
        np.array(kinds, dtype=np.int32),
        np.array(q0, dtype=np.int32),
        np.array(q1, dtype=np.int32),
        np.array(ang, dtype=float),
    )


def _trajectory(circ, params, psi0, model, rng) -> np.ndarray:
    kinds, q0, q1, ang = _noisy_program(circ, params, model, rng)
    work = np.array(psi0.amps, dtype=complex)
    kernels.apply_program(work, psi0.n, kinds, q0, q1, ang)
    return work


def apply_noisy_circuit(
    spec: CircuitSpec, params, psi0: StateVector, model: NoiseModel, rng: np.random.Generator | None = None
) -> StateVector:
    """One noise trajectory. Without ``rng`` the trajectory is fixed by ``model.seed``."""
    p = spec.check_params(params)
    if model.p == 0.0:
        return run_circuit(spec, p, psi0)
    if psi0.n != spec.n_qubits:
        raise InvalidArgumentError(f"circuit has {spec.n_qubits} qubits, state has {psi0.n}")
    rng = np.random.default_rng(model.seed) if rng is None else rng
    amps = _trajectory(CompiledCircuit(spec), p, psi0, model, rng)
    return StateVector(psi0.n, amps, check=False)


def noisy_losses(
    spec: CircuitSpec, params, psi0: StateVector, h: PauliOperator, model: NoiseModel, trials: int
) -> np.ndarray:
    """Energy of each of ``trials`` trajectories, trial ``t`` seeded by the t-th spawned child."""
    if trials < 1:
        raise InvalidArgumentError(f"trials must be at least 1, got {trials}")
    p = spec.check_params(params)
    if model.p == 0.0:
        return np.full(trials, loss(spec, p, psi0, h))
    circ = CompiledCircuit(spec)
    out = np.empty(trials)
    for t, child in enumerate(np.random.SeedSequence(model.seed).spawn(trials)):
        amps = _trajectory(circ, p, psi0, model, np.random.default_rng(child))
        out[t] = expectation(h, StateVector(psi0.n, amps, check=False))
    return out


def noisy_eval(
    spec: CircuitSpec, params, psi0: StateVector, h: PauliOperator, model: NoiseModel, trials: int
) -> float:
    if model.p == 0.0:
        # exact bypass; averaging identical values can round
        if trials < 1:
            raise InvalidArgumentError(f"trials must be at least 1, got {trials}")
        return loss(spec, params, psi0, h)
    return float(np.mean(noisy_losses(spec, params, psi0, h, model, trials)))
