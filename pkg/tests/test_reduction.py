import math

import numpy as np
import pytest

from kscontract.certificate import sample_cohesive_states
from kscontract.dynamics import ModelParams, integrate, jacobian, vector_field
from kscontract.errors import DimensionMismatch, InvalidRange
from kscontract.graph import path_graph
from kscontract.reduction import (
    ReducedState,
    cycle_offset,
    edge_map,
    embed_edge_diffs,
    in_polytope,
    in_weak_polytope,
    polytope_bounding_box,
    project,
    reduced_field,
    reduced_jacobian,
)
from kscontract.seminorm import build_projector, log_seminorm
from kscontract.sync import lift
from kscontract.torus import TWO_PI, edge_diffs, splay_state, winding_vector


def _omega(g, rng, scale=0.3):
    w = rng.normal(scale=scale, size=g.n)
    return w - w.mean()


def test_reduced_state_shapes():
    s = ReducedState([1.0, 2.0], [1])
    assert s.z.dtype == np.float64 and s.u.dtype == np.int64


def test_edge_map_kernel_free(test_graphs):
    for g in test_graphs.values():
        A = edge_map(g)
        assert A.shape == (g.m, g.n - 1)
        assert np.linalg.matrix_rank(A) == g.n - 1


def test_cycle_offset_reproduces_windings(ring5, double_ring):
    for g in (ring5, double_ring):
        b = g.basis
        for u in ([1] * b.c, [-1] * b.c, list(range(b.c))):
            off = cycle_offset(b, u)
            np.testing.assert_allclose(b.matrix @ off, TWO_PI * np.array(u), atol=1e-12)
    with pytest.raises(DimensionMismatch):
        cycle_offset(ring5.basis, [1, 0])


def test_project_embed_roundtrip(test_graphs, rng):
    for g in test_graphs.values():
        X = sample_cohesive_states(g, 1.4, 30, rng)
        for x in X:
            r = project(g, g.basis, x)
            eta = embed_edge_diffs(g, g.basis, r.z, r.u)
            np.testing.assert_allclose(eta, edge_diffs(g, x), atol=1e-9)
            np.testing.assert_array_equal(r.u, winding_vector(g.basis, x))


def test_project_invariances(ring6, rng):
    x = sample_cohesive_states(ring6, 1.4, 1, rng)[0]
    r = project(ring6, ring6.basis, x)
    for y in (x + 0.7, x + TWO_PI * rng.integers(-3, 4, size=6)):
        s = project(ring6, ring6.basis, y)
        np.testing.assert_allclose(s.z, r.z, atol=1e-9)
        np.testing.assert_array_equal(s.u, r.u)


def test_project_is_injective_on_cells(random10, rng):
    X = sample_cohesive_states(random10, 1.0, 40, rng)
    Z = np.array([project(random10, random10.basis, x).z for x in X])
    for a in range(len(X)):
        for b in range(a + 1, len(X)):
            assert np.linalg.norm(Z[a] - Z[b]) > 1e-6


def test_lift_inverts_project(test_graphs, rng):
    for g in test_graphs.values():
        for x in sample_cohesive_states(g, 1.2, 10, rng):
            r = project(g, g.basis, x)
            y = lift(g, g.basis, r.z, r.u)
            d = x - y
            np.testing.assert_allclose(np.angle(np.exp(1j * (d - d[0]))), 0, atol=1e-9)


def test_reduced_field_commutes_with_projection(test_graphs, rng):
    R_cache = {}
    for g in test_graphs.values():
        p = ModelParams(g, 0.4, _omega(g, rng))
        R = R_cache.setdefault(g.n, build_projector(g.n).R)
        for x in sample_cohesive_states(g, 1.2, 10, rng):
            r = project(g, g.basis, x)
            np.testing.assert_allclose(reduced_field(p, g.basis, r.z, r.u), R @ vector_field(p, x), atol=1e-10)


def test_reduced_jacobian_matches_finite_differences(test_graphs, rng):
    h = 1e-6
    for g in test_graphs.values():
        p = ModelParams(g, 0.6, _omega(g, rng))
        for x in sample_cohesive_states(g, 1.2, 5, rng):
            r = project(g, g.basis, x)
            Jr = reduced_jacobian(p, g.basis, r.z, r.u)
            fd = np.empty_like(Jr)
            for k in range(g.n - 1):
                e = np.zeros(g.n - 1)
                e[k] = h
                fd[:, k] = (reduced_field(p, g.basis, r.z + e, r.u) - reduced_field(p, g.basis, r.z - e, r.u)) / (2 * h)
            assert np.linalg.norm(fd - Jr) <= 1e-5 * np.linalg.norm(Jr)


def test_reduced_jacobian_is_compressed_full_jacobian(test_graphs, rng):
    for g in test_graphs.values():
        p = ModelParams(g, 0.5)
        R = build_projector(g.n).R
        for x in sample_cohesive_states(g, 1.2, 5, rng):
            r = project(g, g.basis, x)
            np.testing.assert_allclose(reduced_jacobian(p, g.basis, r.z, r.u), R @ jacobian(p, x) @ R.T, atol=1e-12)


def test_reduced_log_norm_equals_seminorm(test_graphs, rng):
    for g in test_graphs.values():
        p = ModelParams(g, 0.3)
        proj = build_projector(g.n)
        for x in sample_cohesive_states(g, 1.0, 5, rng):
            r = project(g, g.basis, x)
            Jr = reduced_jacobian(p, g.basis, r.z, r.u)
            mu_red = np.linalg.eigvalsh((Jr + Jr.T) / 2)[-1]
            assert mu_red == pytest.approx(log_seminorm(proj, jacobian(p, x)), abs=1e-9)


def test_polytope_membership(ring5, rng):
    g = ring5
    assert in_polytope(g, g.basis, np.zeros(4), [0], 0.1)
    r = project(g, g.basis, splay_state(5, 1))
    assert in_polytope(g, g.basis, r.z, [1], 1.3)
    assert not in_polytope(g, g.basis, r.z, [1], 2 * math.pi / 5)
    assert in_weak_polytope(g, g.basis, r.z, [1])
    Z = rng.normal(scale=0.5, size=(100, 4))
    mask = in_polytope(g, g.basis, Z, [0], 0.8)
    assert mask.shape == (100,) and mask.dtype == bool
    with pytest.raises(InvalidRange):
        in_polytope(g, g.basis, np.zeros(4), [0], 0.0)


def test_polytope_convexity(random10, rng):
    g = random10
    X = sample_cohesive_states(g, 0.9, 200, rng)
    Z = np.array([project(g, g.basis, x).z for x in X])
    U = np.array([winding_vector(g.basis, x) for x in X])
    zero = np.all(U == 0, axis=1)
    Z = Z[zero]
    for a, b in rng.integers(0, len(Z), size=(100, 2)):
        t = rng.uniform(size=(11, 1))
        assert np.all(in_polytope(g, g.basis, t * Z[a] + (1 - t) * Z[b], U[0] * 0, 0.9 + 1e-12))


def test_bounding_box(ring5):
    lo, hi = polytope_bounding_box(ring5, ring5.basis, [1], 1.4)
    assert np.all(lo < hi)
    r = project(ring5, ring5.basis, splay_state(5, 1))
    assert np.all((lo <= r.z) & (r.z <= hi))
    assert polytope_bounding_box(ring5, ring5.basis, [2], 1.4) is None


def test_tree_has_no_cycles():
    g = path_graph(4)
    assert g.basis.c == 0
    r = project(g, g.basis, np.array([0.0, 0.5, 0.1, -0.2]))
    assert r.u.shape == (0,)


def test_reduced_trajectory_tracks_full(ring6, rng):
    p = ModelParams(ring6, 0.2, _omega(ring6, rng, 0.1))
    x0 = sample_cohesive_states(ring6, 0.5, 1, rng)[0]
    traj = integrate(p, x0, 1e-3, 2.0)
    r0 = project(ring6, ring6.basis, x0)
    z = r0.z.copy()
    dt = 1e-3
    f = lambda z: reduced_field(p, ring6.basis, z, r0.u)
    for _ in range(2000):
        k1 = f(z)
        k2 = f(z + dt / 2 * k1)
        k3 = f(z + dt / 2 * k2)
        k4 = f(z + dt * k3)
        z = z + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    np.testing.assert_allclose(z, project(ring6, ring6.basis, traj.states[-1]).z, atol=1e-9)
