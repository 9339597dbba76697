"""Polytope coordinates for winding cells and the reduced (shift-free) dynamics.

A state ``x`` in winding cell ``u`` has counterclockwise edge differences
``eta = B^T R^T z + 2 pi C^+ u`` for a unique ``z`` in R^(n-1), where ``C^+``
is the pseudoinverse of the cycle-edge matrix.  The reduced field is
``R F(eta)`` with ``F`` the vector field written on edge differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import ModelParams, field_from_diffs, jacobian_from_diffs
from .errors import DimensionMismatch, InconsistentCell, InvalidRange
from .graph import CycleBasis, WeightedGraph
from .seminorm import build_projector
from .torus import TWO_PI, as_state, edge_diffs, winding_vector

PROJECTION_TOL = 1e-9


@dataclass(frozen=True)
class ReducedState:
    z: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", np.asarray(self.z, dtype=np.float64).reshape(-1))
        object.__setattr__(self, "u", np.asarray(self.u, dtype=np.int64).reshape(-1))


def _as_u(basis: CycleBasis, u) -> np.ndarray:
    u = np.asarray(u, dtype=np.int64).reshape(-1)
    if u.shape[0] != basis.c:
        raise DimensionMismatch(f"winding vector has length {u.shape[0]}, basis has {basis.c} cycles")
    return u


def cycle_offset(basis: CycleBasis, u) -> np.ndarray:
    """``2 pi C^+ u`` (length m)."""
    return TWO_PI * (basis.pinv @ _as_u(basis, u).astype(np.float64))


def edge_map(g: WeightedGraph) -> np.ndarray:
    """``B^T R^T``, the linear part of the embedding (m x (n-1))."""
    return g.incidence.T @ build_projector(g.n).R.T


def project(g: WeightedGraph, basis: CycleBasis, x) -> ReducedState:
    x = as_state(x, g.n)
    u = winding_vector(basis, x)
    eta = edge_diffs(g, x) - cycle_offset(basis, u)
    y, *_ = np.linalg.lstsq(g.incidence.T, eta, rcond=None)
    resid = float(np.linalg.norm(g.incidence.T @ y - eta))
    if resid > PROJECTION_TOL:
        raise InconsistentCell(f"edge differences not in the range of B^T (residual {resid:.3e})")
    return ReducedState(build_projector(g.n).R @ y, u)


def embed_edge_diffs(g: WeightedGraph, basis: CycleBasis, z, u) -> np.ndarray:
    """``eta = B^T R^T z + 2 pi C^+ u``; ``z`` may be a stack (N, n-1)."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape[-1] != g.n - 1:
        raise DimensionMismatch(f"z has length {z.shape[-1]}, expected {g.n - 1}")
    y = z @ build_projector(g.n).R
    return y[..., g.src] - y[..., g.dst] + cycle_offset(basis, u)


def in_polytope(g: WeightedGraph, basis: CycleBasis, z, u, gamma: float):
    """Strict test ``||eta||_inf < gamma``; vectorized over a stack of ``z``."""
    gamma = float(gamma)
    if not (0.0 < gamma <= math.pi):
        raise InvalidRange(f"gamma = {gamma} outside (0, pi]")
    eta = embed_edge_diffs(g, basis, z, u)
    inside = np.max(np.abs(eta), axis=-1) < gamma
    return bool(inside) if np.ndim(inside) == 0 else inside


def in_weak_polytope(g: WeightedGraph, basis: CycleBasis, z, u) -> bool:
    """Closed membership ``||eta||_inf <= pi`` (the full cell)."""
    eta = embed_edge_diffs(g, basis, z, u)
    return bool(np.max(np.abs(eta)) <= math.pi)


def reduced_field(p: ModelParams, basis: CycleBasis, z, u) -> np.ndarray:
    g = p.graph
    eta = embed_edge_diffs(g, basis, z, u)
    return field_from_diffs(p, eta) @ build_projector(g.n).R.T


def reduced_jacobian(p: ModelParams, basis: CycleBasis, z, u) -> np.ndarray:
    """``R J_f(x) R^T`` for any preimage ``x`` of ``z``.

    The Jacobian is assembled straight from ``eta``: every preimage has raw
    edge differences equal to ``eta`` modulo 2*pi, so the trigonometric
    entries coincide.
    """
    g = p.graph
    eta = embed_edge_diffs(g, basis, z, u)
    R = build_projector(g.n).R
    return R @ jacobian_from_diffs(p, eta) @ R.T


def polytope_bounding_box(g: WeightedGraph, basis: CycleBasis, u, gamma: float):
    """Axis-aligned box enclosing P_{u,gamma} in z-space, or ``None`` if the polytope is empty.

    Solved as 2(n-1) linear programs.
    """
    from scipy.optimize import linprog

    A_ub, b_ub = _halfspaces(g, basis, u, gamma)
    k = g.n - 1
    lo = np.empty(k)
    hi = np.empty(k)
    bounds = [(None, None)] * k
    for i in range(k):
        cost = np.zeros(k)
        cost[i] = 1.0
        res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if res.status == 2:
            return None
        if not res.success:
            raise RuntimeError(f"bounding-box LP failed: {res.message}")
        lo[i] = res.fun
        res = linprog(-cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if not res.success:
            raise RuntimeError(f"bounding-box LP failed: {res.message}")
        hi[i] = -res.fun
    return lo, hi


def _halfspaces(g: WeightedGraph, basis: CycleBasis, u, gamma: float):
    A = edge_map(g)
    b = cycle_offset(basis, u)
    return np.vstack([A, -A]), np.concatenate([gamma - b, gamma + b])


def chebyshev_center(g: WeightedGraph, basis: CycleBasis, u, gamma: float):
    """Center and radius of the largest ball inside P_{u,gamma}; ``None`` if it has no interior."""
    from scipy.optimize import linprog

    A_ub, b_ub = _halfspaces(g, basis, u, gamma)
    k = g.n - 1
    norms = np.linalg.norm(A_ub, axis=1)
    cost = np.zeros(k + 1)
    cost[-1] = -1.0
    res = linprog(
        cost,
        A_ub=np.hstack([A_ub, norms[:, None]]),
        b_ub=b_ub,
        bounds=[(None, None)] * k + [(0, None)],
        method="highs",
    )
    if res.status == 2 or (res.success and res.x[-1] <= 0):
        return None
    if not res.success:
        raise RuntimeError(f"Chebyshev-center LP failed: {res.message}")
    return res.x[:k], float(res.x[-1])
