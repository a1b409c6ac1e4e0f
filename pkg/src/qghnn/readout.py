"""Reconstructing an adjacency estimate from a state, and scoring it.

Two readouts are offered. ``decode_amplitude`` inverts the amplitude
encoding: entry (i, j) is ``scale * |amp[i * n + j]|``. ``decode_zz`` reads
two-point correlators ``|<Z_i Z_j>|``, which is the natural readout once the
state has been driven towards a ground state of the graph Hamiltonian.

Metrics are taken over the flattened n*n matrices, zeros included:
mean squared error, cosine similarity, Frobenius norm of the difference and
the Pearson correlation coefficient.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from .errors import InvalidArgumentError, UndefinedMetricError
from .graph import Graph
from .pauli import PauliOperator, PauliString, expectation
from .statevector import StateVector

Method = Literal["amplitude", "zz_correlator"]
METHODS: tuple[str, ...] = ("amplitude", "zz_correlator")
METRIC_NAMES = ("mse", "cosine", "frobenius", "correlation")


@dataclass(frozen=True, eq=False)
class DecodedGraph:
    n: int
    adj_est: np.ndarray
    method: str

    def __post_init__(self):
        a = np.array(self.adj_est, dtype=float)
        if a.shape != (self.n, self.n) or not np.all(np.isfinite(a)):
            raise InvalidArgumentError("decoded adjacency must be a finite n x n matrix")
        a.setflags(write=False)
        object.__setattr__(self, "adj_est", a)

    def binarized(self, threshold: float) -> "DecodedGraph":
        return DecodedGraph(self.n, (self.adj_est >= threshold).astype(float), self.method)

    def to_dict(self) -> dict:
        return {"n": self.n, "method": self.method, "adj": self.adj_est.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "DecodedGraph":
        return cls(int(d["n"]), np.asarray(d["adj"], dtype=float), d["method"])


def _symmetrize(m: np.ndarray) -> np.ndarray:
    m = 0.5 * (m + m.T)
    np.fill_diagonal(m, 0.0)
    return m


def decode_amplitude(psi: StateVector, n: int, scale: float) -> DecodedGraph:
    if len(psi) < n * n:
        raise InvalidArgumentError(f"{psi.n}-qubit state cannot hold a {n}-node adjacency")
    m = scale * np.abs(psi.amps[: n * n]).reshape(n, n)
    return DecodedGraph(n, _symmetrize(m), "amplitude")


def decode_zz(psi: StateVector, n: int) -> DecodedGraph:
    if psi.n < n:
        raise InvalidArgumentError(f"{psi.n}-qubit state has too few qubits for {n} nodes")
    m = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            zz = PauliOperator(psi.n, [(1.0, PauliString.from_sparse(psi.n, {i: "Z", j: "Z"}))])
            m[i, j] = m[j, i] = abs(expectation(zz, psi))
    return DecodedGraph(n, m, "zz_correlator")


def decode(psi: StateVector, n: int, method: str, scale: float = 1.0) -> DecodedGraph:
    if method == "amplitude":
        return decode_amplitude(psi, n, scale)
    if method == "zz_correlator":
        return decode_zz(psi, n)
    raise InvalidArgumentError(f"unknown readout method {method!r}")


@dataclass(frozen=True)
class MetricReport:
    mse: float
    cosine: float | None
    frobenius: float
    correlation: float | None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "MetricReport":
        return cls(**{k: d[k] for k in METRIC_NAMES})


def score(target: Graph, decoded: DecodedGraph, strict: bool = True) -> MetricReport:
    """Compare target and decoded adjacency.

    With ``strict`` an undefined cosine (zero vector) or correlation (zero
    variance) raises ``UndefinedMetricError``; otherwise it is reported as
    ``None``.
    """
    if target.n != decoded.n:
        raise InvalidArgumentError(f"node counts differ: {target.n} vs {decoded.n}")
    x = target.adj.ravel()
    y = decoded.adj_est.ravel()
    diff = x - y
    mse = float(np.mean(diff**2))
    frob = float(np.linalg.norm(diff))

    cosine = correlation = None
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        if strict:
            raise UndefinedMetricError("cosine", "zero-norm adjacency vector")
    else:
        cosine = float(np.clip(x @ y / (nx * ny), -1.0, 1.0))
    xc, yc = x - x.mean(), y - y.mean()
    sx, sy = np.linalg.norm(xc), np.linalg.norm(yc)
    if sx == 0 or sy == 0:
        if strict:
            raise UndefinedMetricError("correlation", "zero variance")
    else:
        correlation = float(np.clip(xc @ yc / (sx * sy), -1.0, 1.0))
    return MetricReport(mse, cosine, frob, correlation)


def metrics_csv(rows: list[dict], extra: tuple[str, ...] = ()) -> str:
    """CSV with columns ``run_id, method, <extra>, mse, cosine, frobenius, correlation``."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=("run_id", "method", *extra, *METRIC_NAMES), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else "nan"
    return v
