"""Dense statevectors and the RX/RY/RZ/CNOT gate set.

Qubit 0 is the most significant bit of the basis index: on two qubits the
state ``|10>`` has index 2. Gate application is functional (a new state is
returned); the kernels mutate a private copy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import kernels
from ._kernels_py import CNOT, PX, PY, PZ, RX, RY, RZ
from .errors import InvalidArgumentError

NORM_TOL = 1e-10

GATE_CODES = {"RX": RX, "RY": RY, "RZ": RZ, "CNOT": CNOT, "X": PX, "Y": PY, "Z": PZ}
_ROTATIONS = ("RX", "RY", "RZ")


class StateVector:
    """Unit-norm complex amplitude vector on ``n`` qubits (read-only)."""

    __slots__ = ("n", "amps")

    def __init__(self, n: int, amps, *, check: bool = True):
        amps = np.array(amps, dtype=complex)
        if n < 1:
            raise InvalidArgumentError(f"need at least one qubit, got {n}")
        if amps.shape != (1 << n,):
            raise InvalidArgumentError(f"expected {1 << n} amplitudes for {n} qubits, got {amps.shape}")
        if check:
            norm = np.linalg.norm(amps)
            if abs(norm - 1.0) > NORM_TOL:
                raise InvalidArgumentError(f"state is not normalized (norm {norm:.12g})")
        amps.setflags(write=False)
        self.n = n
        self.amps = amps

    def __repr__(self):
        return f"StateVector(n={self.n}, amps={self.amps!r})"

    def __len__(self):
        return self.amps.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def to_json(self) -> str:
        return json.dumps([{"re": float(a.real), "im": float(a.imag)} for a in self.amps])

    @classmethod
    def from_json(cls, text: str) -> "StateVector":
        amps = np.array([d["re"] + 1j * d["im"] for d in json.loads(text)])
        return cls(int(round(np.log2(len(amps)))), amps)


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_CODES:
            raise InvalidArgumentError(f"unknown gate kind {self.kind!r}")
        targets = (self.targets,) if isinstance(self.targets, int) else tuple(self.targets)
        object.__setattr__(self, "targets", targets)
        arity = 2 if self.kind == "CNOT" else 1
        if len(targets) != arity:
            raise InvalidArgumentError(f"{self.kind} takes {arity} target(s), got {targets}")
        if len(set(targets)) != len(targets):
            raise InvalidArgumentError(f"{self.kind} control and target must differ, got {targets}")
        if self.kind in _ROTATIONS:
            if self.angle is None or not np.isfinite(self.angle):
                raise InvalidArgumentError(f"{self.kind} needs a finite angle")
        elif self.angle is not None:
            raise InvalidArgumentError(f"{self.kind} takes no angle")

    def matrix(self) -> np.ndarray:
        """Local 2x2 (or 4x4 for CNOT) matrix."""
        return gate_matrix(self.kind, self.angle)

    def check_fits(self, n: int) -> None:
        if any(not 0 <= t < n for t in self.targets):
            raise InvalidArgumentError(f"{self.kind} targets {self.targets} out of range for {n} qubits")


def rx(q: int, theta: float) -> Gate:
    return Gate("RX", (q,), float(theta))


def ry(q: int, theta: float) -> Gate:
    return Gate("RY", (q,), float(theta))


def rz(q: int, theta: float) -> Gate:
    return Gate("RZ", (q,), float(theta))


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def pauli(kind: str, q: int) -> Gate:
    return Gate(kind, (q,))


def gate_matrix(kind: str, angle: float | None = None) -> np.ndarray:
    if kind == "RX":
        c, s = np.cos(angle / 2), np.sin(angle / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == "RY":
        c, s = np.cos(angle / 2), np.sin(angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])
    if kind == "CNOT":
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    if kind == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "Y":
        return np.array([[0, -1j], [1j, 0]])
    if kind == "Z":
        return np.diag([1.0, -1.0]).astype(complex)
    raise InvalidArgumentError(f"unknown gate kind {kind!r}")


def dense_gate_matrix(g: Gate, n: int) -> np.ndarray:
    """Full 2^n x 2^n matrix of a gate, built by Kronecker products.

    Independent of the kernels; used as a test oracle.
    """
    g.check_fits(n)
    eye = np.eye(2, dtype=complex)
    if g.kind != "CNOT":
        factors = [g.matrix() if q == g.targets[0] else eye for q in range(n)]
        return reduce(np.kron, factors)
    c, t = g.targets
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    x = gate_matrix("X")
    off = reduce(np.kron, [p0 if q == c else eye for q in range(n)])
    on = reduce(np.kron, [p1 if q == c else (x if q == t else eye) for q in range(n)])
    return off + on


class GateProgram:
    """Gate list lowered to the flat arrays the kernels consume."""

    __slots__ = ("kinds", "q0", "q1", "angles")

    def __init__(self, gates):
        gates = list(gates)
        self.kinds = np.array([GATE_CODES[g.kind] for g in gates], dtype=np.int32)
        self.q0 = np.array([g.targets[0] for g in gates], dtype=np.int32)
        self.q1 = np.array([g.targets[-1] for g in gates], dtype=np.int32)
        self.angles = np.array([g.angle or 0.0 for g in gates], dtype=float)

    def __len__(self):
        return self.kinds.shape[0]


def basis_state(n: int, k: int) -> StateVector:
    if n < 1:
        raise InvalidArgumentError(f"need at least one qubit, got {n}")
    if not 0 <= k < (1 << n):
        raise InvalidArgumentError(f"basis index {k} out of range for {n} qubits")
    amps = np.zeros(1 << n, dtype=complex)
    amps[k] = 1.0
    return StateVector(n, amps)


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(n, amps / np.linalg.norm(amps))


def apply_gates(psi: StateVector, gates) -> StateVector:
    gates = list(gates)
    for g in gates:
        g.check_fits(psi.n)
    work = psi.amps.copy()
    prog = GateProgram(gates)
    kernels.apply_program(work, psi.n, prog.kinds, prog.q0, prog.q1, prog.angles)
    return StateVector(psi.n, work, check=False)


def apply_gate(psi: StateVector, g: Gate) -> StateVector:
    return apply_gates(psi, [g])


def inner_product(a: StateVector, b: StateVector) -> complex:
    if a.n != b.n:
        raise InvalidArgumentError(f"qubit counts differ: {a.n} vs {b.n}")
    return complex(np.vdot(a.amps, b.amps))
