"""Pauli-string operators: graph and circuit Hamiltonians, expectations, spectra.

Operators are weighted sums of Pauli strings with real coefficients, so they
are Hermitian by construction. Strings are written left to right from qubit 0,
e.g. ``"XIZ"`` is X on qubit 0 and Z on qubit 2.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Literal

import numpy as np

from . import kernels
from .errors import CapacityError, DegenerateInputError, InvalidArgumentError, NumericalFailureError
from .graph import Graph
from .statevector import StateVector

MAX_DENSE_QUBITS = 12
IMAG_TOL = 1e-10

_LETTER_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}


@dataclass(frozen=True, order=True)
class PauliString:
    letters: str

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters or set(letters) - set("IXYZ"):
            raise InvalidArgumentError(f"invalid Pauli string {self.letters!r}")
        object.__setattr__(self, "letters", letters)

    @property
    def n(self) -> int:
        return len(self.letters)

    @classmethod
    def from_sparse(cls, n: int, ops: dict[int, str]) -> "PauliString":
        letters = ["I"] * n
        for q, p in ops.items():
            if not 0 <= q < n:
                raise InvalidArgumentError(f"qubit {q} out of range for {n} qubits")
            letters[q] = p
        return cls("".join(letters))

    def masks(self) -> tuple[int, int, int]:
        """(flip mask, phase mask, number of Y letters) in basis-index bits."""
        flip = phase = ny = 0
        for q, p in enumerate(self.letters):
            bit = 1 << (self.n - 1 - q)
            if p in "XY":
                flip |= bit
            if p in "YZ":
                phase |= bit
            ny += p == "Y"
        return flip, phase, ny

    def dense(self) -> np.ndarray:
        return reduce(np.kron, [_LETTER_MATRICES[p] for p in self.letters])

    def __str__(self):
        return self.letters


class PauliOperator:
    """Canonical sum of ``coeff * PauliString`` terms on ``n`` qubits.

    Equal strings are merged, exact-zero coefficients dropped, and terms kept
    sorted by string so that equal operators compare equal term by term.
    """

    def __init__(self, n: int, terms: Iterable[tuple[float, PauliString | str]] = ()):
        if n < 1:
            raise InvalidArgumentError(f"need at least one qubit, got {n}")
        merged: dict[PauliString, float] = defaultdict(float)
        for coeff, s in terms:
            s = s if isinstance(s, PauliString) else PauliString(s)
            if s.n != n:
                raise InvalidArgumentError(f"term {s} has {s.n} qubits, operator has {n}")
            c = float(coeff)
            if not math.isfinite(c):
                raise InvalidArgumentError(f"non-finite coefficient on {s}")
            merged[s] += c
        self.n = n
        self.terms: tuple[tuple[float, PauliString], ...] = tuple(
            (c, s) for s, c in sorted(merged.items()) if c != 0.0
        )

    def __repr__(self):
        body = " + ".join(f"{c:g}*{s}" for c, s in self.terms) or "0"
        return f"PauliOperator(n={self.n}, {body})"

    def __eq__(self, other):
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.terms))

    def __len__(self):
        return len(self.terms)

    def __mul__(self, factor: float) -> "PauliOperator":
        return PauliOperator(self.n, [(c * factor, s) for c, s in self.terms])

    __rmul__ = __mul__

    def __add__(self, other: "PauliOperator") -> "PauliOperator":
        if other.n != self.n:
            raise InvalidArgumentError("cannot add operators on different qubit counts")
        return PauliOperator(self.n, self.terms + other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, s: str) -> float:
        s = PauliString(s)
        return next((c for c, t in self.terms if t == s), 0.0)

    def to_dense(self) -> np.ndarray:
        if self.n > MAX_DENSE_QUBITS:
            raise CapacityError(f"dense matrix limited to {MAX_DENSE_QUBITS} qubits, got {self.n}")
        dim = 1 << self.n
        out = np.zeros((dim, dim), dtype=complex)
        for c, s in self.terms:
            out += c * s.dense()
        return out

    @cached_property
    def compiled(self) -> tuple[np.ndarray, np.ndarray]:
        """Terms grouped by bit-flip pattern: ``P|k> = diag[k] |k ^ flip>``."""
        dim = 1 << self.n
        idx = np.arange(dim)
        groups: dict[int, np.ndarray] = {}
        for c, s in self.terms:
            flip, phase, ny = s.masks()
            parity = np.zeros(dim, dtype=np.int64)
            m = idx & phase
            while m.any():
                parity ^= m & 1
                m >>= 1
            diag = c * (1j**ny) * (1.0 - 2.0 * parity)
            if flip in groups:
                groups[flip] = groups[flip] + diag
            else:
                groups[flip] = diag.astype(complex)
        if not groups:
            return np.zeros(0, dtype=np.int64), np.zeros((0, dim), dtype=complex)
        flips = np.array(sorted(groups), dtype=np.int64)
        diags = np.ascontiguousarray(np.array([groups[f] for f in flips], dtype=complex))
        return flips, diags

    def to_dict(self) -> dict:
        return {"n": self.n, "terms": [{"coeff": c, "string": s.letters} for c, s in self.terms]}

    @classmethod
    def from_dict(cls, d: dict) -> "PauliOperator":
        return cls(int(d["n"]), [(t["coeff"], t["string"]) for t in d["terms"]])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "PauliOperator":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SpectralSummary:
    min_eig: float
    max_eig: float
    ground_state: StateVector


def build_mapping_hamiltonian(
    g: Graph,
    couplings: tuple[float, float, float] = (1.0, 1.0, 1.0),
    n_qubits: int | None = None,
    pair_sum: Literal["ordered", "half"] = "ordered",
) -> PauliOperator:
    """Graph Hamiltonian ``sum_ij A_ij (Jx XiXj + Jy YiYj + Jz ZiZj)``.

    With ``pair_sum="ordered"`` both (i, j) and (j, i) contribute, so every
    undirected edge carries twice its coupling; ``"half"`` sums over i < j.
    Node ``i`` sits on qubit ``i``; qubits beyond ``g.n`` carry identity.
    """
    n_qubits = g.n if n_qubits is None else n_qubits
    if n_qubits < g.n:
        raise CapacityError(f"{g.n}-node graph needs at least {g.n} qubits, got {n_qubits}")
    if len(couplings) != 3 or not all(math.isfinite(j) for j in couplings):
        raise InvalidArgumentError(f"couplings must be three finite numbers, got {couplings}")
    if pair_sum not in ("ordered", "half"):
        raise InvalidArgumentError(f"pair_sum must be 'ordered' or 'half', got {pair_sum!r}")
    terms = []
    for i in range(g.n):
        for j in range(g.n):
            if i == j or not g.adj[i, j] or (pair_sum == "half" and j < i):
                continue
            for axis, jc in zip("XYZ", couplings):
                if jc:
                    terms.append((g.adj[i, j] * jc, PauliString.from_sparse(n_qubits, {i: axis, j: axis})))
    return PauliOperator(n_qubits, terms)


def build_circuit_hamiltonian(
    n_qubits: int, boundary: Literal["open", "periodic"] = "open"
) -> PauliOperator:
    """``sum Y_q + sum (I/2 - (pi/4) Z_q Z_{q+1}) + sum X_q`` on a chain.

    The open chain has ``n - 1`` nearest-neighbour pairs (each bringing
    its own ``I/2``); ``"periodic"`` adds the wrap-around pair.
    """
    if n_qubits < 2:
        raise InvalidArgumentError(f"circuit Hamiltonian needs at least 2 qubits, got {n_qubits}")
    if boundary not in ("open", "periodic"):
        raise InvalidArgumentError(f"boundary must be 'open' or 'periodic', got {boundary!r}")
    pairs = [(q, q + 1) for q in range(n_qubits - 1)]
    if boundary == "periodic":
        pairs.append((n_qubits - 1, 0))
    ident = "I" * n_qubits
    terms = []
    for q in range(n_qubits):
        terms.append((1.0, PauliString.from_sparse(n_qubits, {q: "Y"})))
        terms.append((1.0, PauliString.from_sparse(n_qubits, {q: "X"})))
    for a, b in pairs:
        terms.append((0.5, ident))
        terms.append((-math.pi / 4, PauliString.from_sparse(n_qubits, {a: "Z", b: "Z"})))
    return PauliOperator(n_qubits, terms)


def expectation(op: PauliOperator, psi: StateVector) -> float:
    if op.n != psi.n:
        raise InvalidArgumentError(f"operator acts on {op.n} qubits, state has {psi.n}")
    flips, diags = op.compiled
    value = kernels.expectation(psi.amps, flips, diags)
    if abs(value.imag) > IMAG_TOL * max(1.0, sum(abs(c) for c, _ in op.terms)):
        raise NumericalFailureError(f"expectation has imaginary part {value.imag:.3e}")
    return value.real


def exact_spectrum(op: PauliOperator) -> SpectralSummary:
    if op.n > MAX_DENSE_QUBITS:
        raise CapacityError(f"exact diagonalization limited to {MAX_DENSE_QUBITS} qubits, got {op.n}")
    w, v = np.linalg.eigh(op.to_dense())
    return SpectralSummary(float(w[0]), float(w[-1]), StateVector(op.n, v[:, 0]))


def normalize_spectral(op: PauliOperator) -> tuple[PauliOperator, float]:
    """Rescale ``op`` so its ground energy is exactly -1; returns (op', scale)."""
    if op.is_zero():
        raise DegenerateInputError("cannot spectrally normalize the zero operator")
    lam = exact_spectrum(op).min_eig
    if lam >= 0.0:
        raise DegenerateInputError(f"ground energy {lam:g} is not negative; cannot rescale to -1")
    scale = abs(lam)
    return op * (1.0 / scale), scale
