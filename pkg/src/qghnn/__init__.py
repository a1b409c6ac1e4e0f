"""Quantum graph Hamiltonian learning on a dense statevector simulator.

A graph is mapped to a Heisenberg-type Pauli Hamiltonian, a layered
parameterized circuit is trained by finite-difference gradient descent to
minimize its energy, and the learned graph is read back from the final state.
"""

from .circuit import CircuitSpec, build_block, default_layout, run_circuit
from .errors import (
    CapacityError,
    DegenerateInputError,
    InvalidArgumentError,
    NumericalFailureError,
    QGHNNError,
    UndefinedMetricError,
)
from .graph import (
    Graph,
    NormalizedAdjacency,
    encode_to_amplitudes,
    make_benchmark_graph,
    make_complete_graph,
    normalize_adjacency,
)
from .kernels import BACKEND
from .noise import NoiseModel, apply_noisy_circuit, noisy_eval
from .pauli import (
    PauliOperator,
    PauliString,
    SpectralSummary,
    build_circuit_hamiltonian,
    build_mapping_hamiltonian,
    exact_spectrum,
    expectation,
    normalize_spectral,
)
from .readout import DecodedGraph, MetricReport, decode_amplitude, decode_zz, score
from .statevector import Gate, StateVector, apply_gate, basis_state, inner_product
from .trainer import TrainConfig, TrainReport, gradient_fd, loss, train

__version__ = "0.1.0"
