"""The layered staircase ansatz.

A block on the neighbouring pair ``(c, t)`` has five stages

    RY(theta_y) on c and t -> CNOT(c, t) -> RZ(2 theta_z / pi) on t
    -> CNOT(c, t) -> RX(theta_x) on c and t

(``block_order="forward"``, wire order), or the same stages reversed
(``block_order="reversed"``, reading the operator product right to left).
A layer sweeps blocks over the pairs ``(0,1), (1,2), ..., (n-2, n-1)`` and all
blocks in a layer share one ``(theta_y, theta_z, theta_x)`` triple, so a
circuit has ``3 * layers`` parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from . import kernels
from .errors import InvalidArgumentError
from .statevector import GATE_CODES, Gate, StateVector, cnot, rx, ry, rz

PARAMS_PER_LAYER = 3
STAGES_PER_BLOCK = 5
BlockOrder = Literal["forward", "reversed"]

# (gate kind, which wire: 0 control / 1 target, parameter slot, angle factor)
_FIG4_STAGES = (
    (("RY", 0, 0, 1.0), ("RY", 1, 0, 1.0)),
    (("CNOT", None, None, 0.0),),
    (("RZ", 1, 1, 2.0 / math.pi),),
    (("CNOT", None, None, 0.0),),
    (("RX", 0, 2, 1.0), ("RX", 1, 2, 1.0)),
)


def _stages(order: BlockOrder):
    if order == "forward":
        return _FIG4_STAGES
    if order == "reversed":
        return tuple(reversed(_FIG4_STAGES))
    raise InvalidArgumentError(f"block_order must be 'forward' or 'reversed', got {order!r}")


def _check_pair(pair, n_qubits: int | None = None) -> tuple[int, int]:
    c, t = (int(x) for x in pair)
    if abs(c - t) != 1:
        raise InvalidArgumentError(f"block pair {pair} is not a pair of neighbouring qubits")
    if n_qubits is not None and not (0 <= min(c, t) and max(c, t) < n_qubits):
        raise InvalidArgumentError(f"block pair {pair} out of range for {n_qubits} qubits")
    return c, t


def build_block(
    theta_y: float, theta_z: float, theta_x: float, pair: tuple[int, int], order: BlockOrder = "forward"
) -> list[Gate]:
    c, t = _check_pair(pair)
    theta = (theta_y, theta_z, theta_x)
    wires = (c, t)
    makers = {"RY": ry, "RZ": rz, "RX": rx}
    gates = []
    for stage in _stages(order):
        for kind, wire, slot, factor in stage:
            if kind == "CNOT":
                gates.append(cnot(c, t))
            else:
                gates.append(makers[kind](wires[wire], factor * theta[slot]))
    return gates


@dataclass(frozen=True)
class CircuitSpec:
    n_qubits: int
    layers: int
    pair_layout: tuple[tuple[tuple[int, int], ...], ...]
    block_order: BlockOrder = "forward"
    params_per_layer: int = field(default=PARAMS_PER_LAYER, init=False)

    def __post_init__(self):
        if self.n_qubits < 2 or self.layers < 1:
            raise InvalidArgumentError(
                f"need n_qubits >= 2 and layers >= 1, got {self.n_qubits}, {self.layers}"
            )
        layout = tuple(tuple(_check_pair(p, self.n_qubits) for p in layer) for layer in self.pair_layout)
        if len(layout) != self.layers:
            raise InvalidArgumentError(f"pair_layout has {len(layout)} layers, expected {self.layers}")
        _stages(self.block_order)
        object.__setattr__(self, "pair_layout", layout)

    @property
    def n_params(self) -> int:
        return PARAMS_PER_LAYER * self.layers

    @property
    def n_blocks(self) -> int:
        return sum(len(layer) for layer in self.pair_layout)

    @property
    def n_stages(self) -> int:
        """Block stages (RY column, CNOT, RZ, CNOT, RX column) over the circuit."""
        return STAGES_PER_BLOCK * self.n_blocks

    def check_params(self, params) -> np.ndarray:
        p = np.asarray(params, dtype=float)
        if p.shape != (self.n_params,):
            raise InvalidArgumentError(f"expected {self.n_params} parameters, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise InvalidArgumentError("parameters must be finite")
        return p

    def layer_gates(self, layer: int, params) -> list[Gate]:
        p = self.check_params(params)
        ty, tz, tx = p[PARAMS_PER_LAYER * layer : PARAMS_PER_LAYER * (layer + 1)]
        gates = []
        for pair in self.pair_layout[layer]:
            gates += build_block(ty, tz, tx, pair, self.block_order)
        return gates

    def gates(self, params) -> list[Gate]:
        return [g for layer in range(self.layers) for g in self.layer_gates(layer, params)]

    def to_dict(self) -> dict:
        d = {"n_qubits": self.n_qubits, "layers": self.layers, "block_order": self.block_order}
        if self == default_layout(self.n_qubits, self.layers, self.block_order):
            d["layout"] = "staircase"
        else:
            d["layout"] = [[list(p) for p in layer] for layer in self.pair_layout]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CircuitSpec":
        order = d.get("block_order", "forward")
        layout = d.get("layout", "staircase")
        if layout == "staircase":
            return default_layout(int(d["n_qubits"]), int(d["layers"]), order)
        if isinstance(layout, str):
            raise InvalidArgumentError(f"unknown layout {layout!r}")
        return cls(int(d["n_qubits"]), int(d["layers"]), layout, order)


def default_layout(n_qubits: int, layers: int, block_order: BlockOrder = "forward") -> CircuitSpec:
    if n_qubits < 2 or layers < 1:
        raise InvalidArgumentError(f"need n_qubits >= 2 and layers >= 1, got {n_qubits}, {layers}")
    sweep = tuple((q, q + 1) for q in range(n_qubits - 1))
    return CircuitSpec(n_qubits, layers, (sweep,) * layers, block_order)


class CompiledCircuit:
    """Gate arrays for a spec with angles as a linear function of the params.

    ``angles = factor * params[slot]``, so re-evaluating at new parameters is a
    gather and one kernel call, no Python-level gate objects.
    """

    def __init__(self, spec: CircuitSpec):
        kinds, q0, q1, slot, factor = [], [], [], [], []
        stages = _stages(spec.block_order)
        for layer, pairs in enumerate(spec.pair_layout):
            for c, t in pairs:
                for stage in stages:
                    for kind, wire, s, f in stage:
                        kinds.append(GATE_CODES[kind])
                        if kind == "CNOT":
                            q0.append(c)
                            q1.append(t)
                            slot.append(0)
                        else:
                            q = (c, t)[wire]
                            q0.append(q)
                            q1.append(q)
                            slot.append(PARAMS_PER_LAYER * layer + s)
                        factor.append(f)
        self.spec = spec
        self.kinds = np.array(kinds, dtype=np.int32)
        self.q0 = np.array(q0, dtype=np.int32)
        self.q1 = np.array(q1, dtype=np.int32)
        self.slot = np.array(slot, dtype=np.intp)
        self.factor = np.array(factor, dtype=float)

    def __len__(self):
        return self.kinds.shape[0]

    def angles(self, params: np.ndarray) -> np.ndarray:
        return self.factor * params[self.slot]

    def run_amps(self, params: np.ndarray, amps: np.ndarray) -> np.ndarray:
        work = np.array(amps, dtype=complex)
        kernels.apply_program(work, self.spec.n_qubits, self.kinds, self.q0, self.q1, self.angles(params))
        return work


def run_circuit(spec: CircuitSpec, params: Sequence[float], psi0: StateVector) -> StateVector:
    p = spec.check_params(params)
    if psi0.n != spec.n_qubits:
        raise InvalidArgumentError(f"circuit has {spec.n_qubits} qubits, state has {psi0.n}")
    out = CompiledCircuit(spec).run_amps(p, psi0.amps)
    return StateVector(spec.n_qubits, out, check=False)
