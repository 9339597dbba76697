import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kscontract.errors import InvalidGraph, NotConnected
from kscontract.graph import (
    WeightedGraph,
    algebraic_connectivity,
    complete_graph,
    cycle_basis,
    incidence_matrix,
    laplacian,
    max_weighted_degree,
    path_graph,
    random_connected_graph,
    ring_graph,
    star_graph,
)


def test_single_edge_incidence_and_laplacian():
    g = WeightedGraph(2, ((0, 1, 1.0),))
    np.testing.assert_array_equal(incidence_matrix(g), [[1.0], [-1.0]])
    np.testing.assert_array_equal(laplacian(g), [[1.0, -1.0], [-1.0, 1.0]])
    assert max_weighted_degree(g) == 1.0


def test_edges_are_canonicalized():
    g = WeightedGraph(3, ((1, 0, 2.0), (2, 1, 1.0)))
    assert g.edges == ((0, 1, 2.0), (1, 2, 1.0))


def test_incidence_columns_sum_to_zero(test_graphs):
    for g in test_graphs.values():
        np.testing.assert_array_equal(incidence_matrix(g).sum(axis=0), 0.0)


def test_k3_incidence_rank(k3):
    assert incidence_matrix(k3).shape == (3, 3)
    assert np.linalg.matrix_rank(incidence_matrix(k3)) == 2


def test_laplacian_assembly_k3(k3):
    L = laplacian(k3)
    np.testing.assert_array_equal(np.diag(L), [2, 2, 2])
    np.testing.assert_array_equal(L[~np.eye(3, dtype=bool)], -1.0)


def test_laplacian_matches_weights(random10):
    L = laplacian(random10)
    for i, j, w in random10.edges:
        assert L[i, j] == pytest.approx(-w, abs=1e-15)
    np.testing.assert_allclose(L, L.T, atol=0)
    np.testing.assert_allclose(L.sum(axis=1), 0.0, atol=1e-12)


# closed-form spectra: K_n -> n, P_n -> 2 - 2cos(pi/n), C_n -> 2 - 2cos(2pi/n), star -> 1
@pytest.mark.parametrize(
    "g, expected",
    [
        (complete_graph(3), 3.0),
        (complete_graph(6), 6.0),
        (path_graph(3), 1.0),
        (path_graph(7), 2 - 2 * math.cos(math.pi / 7)),
        (ring_graph(5), 2 - 2 * math.cos(2 * math.pi / 5)),
        (ring_graph(8), 2 - 2 * math.cos(2 * math.pi / 8)),
        (star_graph(5), 1.0),
    ],
)
def test_algebraic_connectivity_closed_forms(g, expected):
    assert algebraic_connectivity(g) == pytest.approx(expected, abs=1e-9)


def test_lambda2_scales_with_weights(random10):
    for alpha in (0.1, 3.7):
        assert random10.scaled(alpha).lambda2 == pytest.approx(alpha * random10.lambda2, rel=1e-12)


def test_lambda2_matches_restricted_eigensolve(random10):
    # eigensolve L restricted to 1-perp via an independent orthonormal basis (QR)
    n = random10.n
    Q, _ = np.linalg.qr(np.column_stack([np.ones(n), np.eye(n)[:, : n - 1]]))
    V = Q[:, 1:]
    restricted = np.linalg.eigvalsh(V.T @ laplacian(random10) @ V)
    assert restricted[0] == pytest.approx(random10.lambda2, abs=1e-9)


def test_spectrum_ordering_and_psd(test_graphs):
    for g in test_graphs.values():
        ev = g.laplacian_spectrum
        assert ev[0] == pytest.approx(0.0, abs=1e-10)
        assert np.all(ev >= -1e-10)
        assert ev[1] > 0
        assert np.all(np.diff(ev) >= -1e-12)


@pytest.mark.parametrize("g, expected", [(complete_graph(3), 2.0), (star_graph(4), 3.0)])
def test_max_degree(g, expected):
    assert max_weighted_degree(g) == expected


@pytest.mark.parametrize(
    "n, edges, exc",
    [
        (3, ((0, 1, 1.0),), NotConnected),
        (4, ((0, 1, 1.0), (2, 3, 1.0)), NotConnected),
        (2, ((0, 0, 1.0),), InvalidGraph),
        (2, ((0, 1, -1.0),), InvalidGraph),
        (2, ((0, 1, 0.0),), InvalidGraph),
        (3, ((0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0)), InvalidGraph),
        (1, (), InvalidGraph),
        (2, ((0, 5, 1.0),), InvalidGraph),
    ],
)
def test_invalid_graphs(n, edges, exc):
    with pytest.raises(exc):
        WeightedGraph(n, edges)


def test_tree_has_empty_basis():
    b = cycle_basis(path_graph(5))
    assert b.c == 0
    assert b.matrix.shape == (0, 4)
    assert b.pinv.shape == (4, 0)


def test_k3_has_one_triangle(k3):
    b = cycle_basis(k3)
    assert b.c == 1
    assert b.lengths == (3,)


def test_ring5_cycle_uses_every_edge(ring5):
    b = cycle_basis(ring5)
    assert b.c == 1
    assert set(np.abs(b.matrix[0]).tolist()) == {1}
    np.testing.assert_array_equal(incidence_matrix(ring5) @ b.matrix.T, 0)


def _is_simple_cycle(g, seq):
    if seq[0] != seq[-1] or len(seq) < 4:
        return False
    body = seq[:-1]
    if len(set(body)) != len(body):
        return False
    pairs = {(min(i, j), max(i, j)) for i, j, _ in g.edges}
    return all((min(a, b), max(a, b)) in pairs for a, b in zip(seq[:-1], seq[1:]))


def _check_basis(g):
    b = cycle_basis(g)
    assert b.c == g.m - g.n + 1
    # integer arithmetic: B C^T = 0 exactly
    B = np.zeros((g.n, g.m), dtype=np.int64)
    B[g.src, np.arange(g.m)] = 1
    B[g.dst, np.arange(g.m)] = -1
    np.testing.assert_array_equal(B @ b.matrix.T, 0)
    for k, seq in enumerate(b.cycles):
        assert _is_simple_cycle(g, seq)
        support = set(np.flatnonzero(b.matrix[k]).tolist())
        assert len(support) == len(seq) - 1
    if b.c:
        assert np.linalg.matrix_rank(b.matrix) == b.c
        np.testing.assert_allclose(b.matrix @ b.pinv, np.eye(b.c), atol=1e-12)
    # tree edges: n - 1 of them, each non-tree edge closes exactly one basis cycle
    assert int(b.tree_mask.sum()) == g.n - 1
    for k, e in enumerate(b.cycle_edges):
        assert not b.tree_mask[e]
        assert b.matrix[k, e] == 1
        assert np.count_nonzero(b.matrix[:, e]) == 1


@pytest.mark.parametrize("seed", range(8))
def test_random_graph_bases(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(int(rng.integers(3, 15)), float(rng.uniform(0, 0.6)), rng)
    _check_basis(g)


def test_named_graph_bases(test_graphs, double_ring):
    for g in list(test_graphs.values()) + [double_ring]:
        _check_basis(g)
    assert double_ring.n == 13 and double_ring.basis.c == 2


def test_bfs_tree_rooted_at_zero_lowest_index_first(k5):
    b = cycle_basis(k5)
    assert b.order == (0, 1, 2, 3, 4)
    assert b.parent[1:] == (0, 0, 0, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=12), st.floats(0.0, 1.0), st.integers(0, 2**31))
def test_random_graph_invariants(n, p, seed):
    g = random_connected_graph(n, p, np.random.default_rng(seed))
    assert g.lambda2 > 0
    assert np.all(g.laplacian_spectrum >= -1e-10)
    assert cycle_basis(g).c == g.m - g.n + 1
