"""Graphs, benchmark adjacency matrices and amplitude encoding.

The encoding stores the normalized adjacency entry ``A'[i, j]`` at the
computational-basis index ``k = i * n + j`` of a register of
``ceil(log2(n**2))`` qubits, with unused trailing amplitudes set to zero.
The normalization constant travels with the encoding so that a readout can
restore adjacency magnitudes.

Weighted (non-negative) adjacency is accepted, but the bundled experiments
only use 0/1 graphs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import CapacityError, DegenerateInputError, InvalidArgumentError
from .statevector import StateVector

_BENCHMARKS = {
    "t1": [
        [0, 1, 0, 1],
        [1, 0, 1, 0],
        [0, 1, 0, 1],
        [1, 0, 1, 0],
    ],
    "t2": [
        [0, 1, 0, 0, 1],
        [1, 0, 1, 0, 0],
        [0, 1, 0, 1, 0],
        [0, 0, 1, 0, 1],
        [1, 0, 0, 1, 0],
    ],
    "t3": [
        [0, 0, 0, 1, 1, 0],
        [0, 0, 0, 1, 0, 1],
        [0, 0, 0, 0, 1, 1],
        [1, 1, 0, 0, 0, 0],
        [1, 0, 1, 0, 0, 0],
        [0, 1, 1, 0, 0, 0],
    ],
}

BENCHMARK_IDS = tuple(_BENCHMARKS)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected graph on ``n`` nodes given by a symmetric adjacency matrix."""

    n: int
    adj: np.ndarray

    def __post_init__(self):
        adj = _frozen(self.adj)
        if self.n < 2:
            raise InvalidArgumentError(f"a graph needs at least 2 nodes, got {self.n}")
        if adj.shape != (self.n, self.n):
            raise InvalidArgumentError(f"adjacency shape {adj.shape} does not match n={self.n}")
        if not np.all(np.isfinite(adj)) or np.any(adj < 0):
            raise InvalidArgumentError("adjacency entries must be finite and non-negative")
        if not np.array_equal(adj, adj.T):
            raise InvalidArgumentError("adjacency matrix must be symmetric")
        if np.any(np.diag(adj) != 0):
            raise InvalidArgumentError("self-loops are not supported (diagonal must be zero)")
        object.__setattr__(self, "adj", adj)

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        adj = np.asarray(adj, dtype=float)
        if adj.ndim != 2:
            raise InvalidArgumentError("adjacency must be a 2-D matrix")
        return cls(adj.shape[0], adj)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.adj[i, j]]

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "adj": [[_num(x) for x in row] for row in self.adj]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Graph":
        try:
            n, adj = d["n"], d["adj"]
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"graph JSON needs 'n' and 'adj': {exc}") from None
        return cls(int(n), np.asarray(adj, dtype=float))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        return cls.from_dict(json.loads(text))


def _num(x: float):
    return int(x) if float(x).is_integer() else float(x)


@dataclass(frozen=True, eq=False)
class NormalizedAdjacency:
    n: int
    values: np.ndarray
    scale: float

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        if not self.scale > 0:
            raise DegenerateInputError("normalization scale must be positive")

    def restore(self) -> np.ndarray:
        return self.values * self.scale


def make_benchmark_graph(graph_id: str) -> Graph:
    try:
        adj = _BENCHMARKS[graph_id]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown benchmark graph {graph_id!r}; expected one of {', '.join(BENCHMARK_IDS)}"
        ) from None
    return Graph.from_adjacency(adj)


def make_complete_graph(n: int) -> Graph:
    if n < 2:
        raise InvalidArgumentError(f"complete graph needs n >= 2, got {n}")
    return Graph(n, np.ones((n, n)) - np.eye(n))


def normalize_adjacency(g: Graph) -> NormalizedAdjacency:
    scale = float(np.sqrt(np.sum(g.adj**2)))
    if scale == 0.0:
        raise DegenerateInputError("cannot normalize an all-zero adjacency matrix")
    return NormalizedAdjacency(g.n, g.adj / scale, scale)


def qubits_for_nodes(n: int) -> int:
    """Smallest register that holds the n*n flattened adjacency entries."""
    return max(1, math.ceil(math.log2(n * n)))


def encode_to_amplitudes(na: NormalizedAdjacency, n_qubits: int | None = None) -> StateVector:
    if n_qubits is None:
        n_qubits = qubits_for_nodes(na.n)
    dim = 1 << n_qubits
    if dim < na.n * na.n:
        raise CapacityError(
            f"{n_qubits} qubits hold {dim} amplitudes, need {na.n * na.n} for a {na.n}-node graph"
        )
    amps = np.zeros(dim, dtype=complex)
    amps[: na.n * na.n] = na.values.ravel()
    return StateVector(n_qubits, amps)


def random_graph(n: int, rng: np.random.Generator, p: float = 0.5) -> Graph:
    """Random symmetric 0/1 graph with at least one edge."""
    while True:
        upper = np.triu(rng.random((n, n)) < p, k=1).astype(float)
        adj = upper + upper.T
        if adj.any():
            return Graph(n, adj)
