import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qghnn import (
    CapacityError,
    DegenerateInputError,
    Graph,
    InvalidArgumentError,
    encode_to_amplitudes,
    make_benchmark_graph,
    make_complete_graph,
    normalize_adjacency,
)
from qghnn.graph import qubits_for_nodes
from qghnn.readout import decode_amplitude


@st.composite
def symmetric_graphs(draw, sizes=(2, 3, 4, 5, 6)):
    n = draw(st.sampled_from(sizes))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    if not any(bits):
        bits[0] = True
    adj = np.zeros((n, n))
    adj[np.triu_indices(n, 1)] = bits
    return Graph(n, adj + adj.T)


class TestBenchmarks:
    @pytest.mark.parametrize(
        "gid, n, row0",
        [
            ("t1", 4, [0, 1, 0, 1]),
            ("t2", 5, [0, 1, 0, 0, 1]),
            ("t3", 6, [0, 0, 0, 1, 1, 0]),
        ],
    )
    def test_first_rows(self, gid, n, row0):
        g = make_benchmark_graph(gid)
        assert g.n == n
        assert g.adj[0].tolist() == row0

    def test_t2_is_a_five_cycle(self):
        g = make_benchmark_graph("t2")
        assert sorted(g.edges) == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
        assert g.adj.sum(axis=0).tolist() == [2] * 5

    def test_unknown_id(self):
        with pytest.raises(InvalidArgumentError):
            make_benchmark_graph("t4")


class TestGraphType:
    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidArgumentError):
            Graph(2, [[0, 1], [0, 0]])

    def test_rejects_self_loop(self):
        with pytest.raises(InvalidArgumentError):
            Graph(2, [[1, 1], [1, 0]])

    def test_rejects_single_node(self):
        with pytest.raises(InvalidArgumentError):
            Graph(1, [[0]])

    def test_adjacency_is_read_only(self):
        g = make_benchmark_graph("t1")
        with pytest.raises(ValueError):
            g.adj[0, 1] = 5

    def test_json_round_trip(self):
        g = make_benchmark_graph("t3")
        text = g.to_json()
        assert json.loads(text)["adj"][0] == [0, 0, 0, 1, 1, 0]
        assert Graph.from_json(text) == g

    def test_from_dict_missing_key(self):
        with pytest.raises(InvalidArgumentError):
            Graph.from_dict({"n": 3})


class TestCompleteGraph:
    def test_two_nodes(self):
        assert make_complete_graph(2).adj.tolist() == [[0, 1], [1, 0]]

    def test_k3_entries(self):
        assert make_complete_graph(3).adj.sum() == 6

    def test_k4_frobenius(self):
        assert np.linalg.norm(make_complete_graph(4).adj) == pytest.approx(math.sqrt(12))

    @pytest.mark.parametrize("n", range(2, 9))
    def test_unit_entry_count(self, n):
        adj = make_complete_graph(n).adj
        assert np.count_nonzero(adj == 1) == n * (n - 1)
        assert np.all(np.diag(adj) == 0)

    def test_too_small(self):
        with pytest.raises(InvalidArgumentError):
            make_complete_graph(1)


class TestNormalize:
    def test_t1(self):
        na = normalize_adjacency(make_benchmark_graph("t1"))
        assert na.scale == pytest.approx(math.sqrt(8))
        nz = na.values[na.values != 0]
        assert len(nz) == 8
        np.testing.assert_allclose(nz, 1 / math.sqrt(8), atol=1e-15)
        assert 1 / math.sqrt(8) == pytest.approx(0.353553, abs=1e-6)

    def test_single_edge(self):
        na = normalize_adjacency(Graph(2, [[0, 1], [1, 0]]))
        assert na.scale == pytest.approx(math.sqrt(2))
        np.testing.assert_allclose(na.values, [[0, 2**-0.5], [2**-0.5, 0]])

    def test_all_zero(self):
        with pytest.raises(DegenerateInputError):
            normalize_adjacency(Graph(3, np.zeros((3, 3))))

    @given(symmetric_graphs())
    def test_invariants(self, g):
        na = normalize_adjacency(g)
        assert abs(np.sum(na.values**2) - 1) < 1e-12
        assert na.scale > 0
        np.testing.assert_allclose(na.restore(), g.adj, atol=1e-12)


class TestEncode:
    def test_single_edge(self):
        psi = encode_to_amplitudes(normalize_adjacency(Graph(2, [[0, 1], [1, 0]])), 2)
        np.testing.assert_allclose(psi.amps, [0, 2**-0.5, 2**-0.5, 0], atol=1e-15)

    def test_t1_support(self):
        psi = encode_to_amplitudes(normalize_adjacency(make_benchmark_graph("t1")), 4)
        support = set(np.flatnonzero(psi.amps).tolist())
        assert support == {1, 3, 4, 6, 9, 11, 12, 14}
        np.testing.assert_allclose(psi.amps[sorted(support)], 1 / math.sqrt(8))

    def test_t2_padding(self):
        psi = encode_to_amplitudes(normalize_adjacency(make_benchmark_graph("t2")), 5)
        assert len(psi) == 32
        assert np.all(psi.amps[25:] == 0)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            encode_to_amplitudes(normalize_adjacency(make_benchmark_graph("t2")), 4)

    @pytest.mark.parametrize("n, q", [(2, 2), (3, 4), (4, 4), (5, 5), (6, 6), (8, 6)])
    def test_default_register(self, n, q):
        assert qubits_for_nodes(n) == q

    @given(symmetric_graphs())
    def test_unit_norm(self, g):
        psi = encode_to_amplitudes(normalize_adjacency(g))
        assert abs(np.linalg.norm(psi.amps) - 1) < 1e-12

    @settings(max_examples=100)
    @given(symmetric_graphs())
    def test_round_trip(self, g):
        na = normalize_adjacency(g)
        decoded = decode_amplitude(encode_to_amplitudes(na), g.n, na.scale)
        np.testing.assert_allclose(decoded.adj_est, g.adj, atol=1e-10)
