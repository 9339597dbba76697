"""Phase differences on the circle, winding numbers, and cohesive cells."""
from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, InvalidGamma, NonIntegerWinding
from .graph import CycleBasis, WeightedGraph

TWO_PI = 2.0 * math.pi
WINDING_TOL = 1e-9


def ccw_diff(x1, x2):
    """Counterclockwise difference: ``x1 - x2`` shifted by a multiple of 2*pi into [-pi, pi).

    Works elementwise on arrays; returns a float for scalar input.
    """
    d = np.mod(np.subtract(x1, x2, dtype=np.float64) + math.pi, TWO_PI) - math.pi
    # np.mod can round up to exactly 2*pi for tiny negative arguments
    d = np.where(d >= math.pi, d - TWO_PI, d)
    return float(d) if d.ndim == 0 else d


def as_state(x, n: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch(f"phase state must be 1-D, got shape {x.shape}")
    if n is not None and x.shape[0] != n:
        raise DimensionMismatch(f"phase state has length {x.shape[0]}, graph has {n} vertices")
    return x


def raw_edge_diffs(g: WeightedGraph, x) -> np.ndarray:
    """``B^T x`` without wrapping; accepts a single state or a stack (N, n)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != g.n:
        raise DimensionMismatch(f"state length {x.shape[-1]} != n = {g.n}")
    return x[..., g.src] - x[..., g.dst]


def edge_diffs(g: WeightedGraph, x) -> np.ndarray:
    """Counterclockwise difference across every edge in canonical orientation."""
    return ccw_diff(raw_edge_diffs(g, x), 0.0)


def _round_winding(total: np.ndarray) -> np.ndarray:
    q = np.rint(total / TWO_PI)
    err = np.abs(total - TWO_PI * q)
    if np.any(err > WINDING_TOL):
        raise NonIntegerWinding(f"cycle sum off a multiple of 2*pi by {float(err.max()):.3e}")
    return q.astype(np.int64)


def winding_number(cycle, x) -> int:
    """Winding number of ``x`` along the closed vertex sequence ``cycle``."""
    x = as_state(x)
    seq = np.asarray(cycle, dtype=np.int64)
    if seq.shape[0] < 2 or seq[0] != seq[-1]:
        raise ValueError("cycle must be a closed vertex sequence (i0, ..., i0)")
    total = float(np.sum(ccw_diff(x[seq[:-1]], x[seq[1:]])))
    return int(_round_winding(np.asarray(total)))


def winding_vector(basis: CycleBasis, x) -> np.ndarray:
    x = as_state(x)
    return np.array([winding_number(cyc, x) for cyc in basis.cycles], dtype=np.int64)


def winding_vectors_from_diffs(basis: CycleBasis, diffs) -> np.ndarray:
    """``C d / 2pi`` rounded, for counterclockwise edge differences of shape (..., m)."""
    diffs = np.asarray(diffs, dtype=np.float64)
    if basis.c == 0:
        return np.zeros(diffs.shape[:-1] + (0,), dtype=np.int64)
    return _round_winding(diffs @ basis.matrix.T.astype(np.float64))


def check_gamma(gamma: float, upper: float = math.pi) -> float:
    gamma = float(gamma)
    if not (0.0 <= gamma <= upper):
        raise InvalidGamma(f"gamma = {gamma} outside [0, {upper}]")
    return gamma


def is_cohesive(g: WeightedGraph, x, gamma: float) -> bool:
    """True iff every edge has ``|ccw_diff(x_i, x_j)| <= gamma``."""
    gamma = check_gamma(gamma)
    x = as_state(x, g.n)
    return bool(np.max(np.abs(edge_diffs(g, x))) <= gamma)


def in_cell(g: WeightedGraph, basis: CycleBasis, x, u, gamma: float) -> bool:
    """Membership in the gamma-cohesive u-winding cell."""
    u = np.asarray(u, dtype=np.int64).reshape(-1)
    if u.shape[0] != basis.c:
        return False
    if not is_cohesive(g, x, gamma):
        return False
    return bool(np.array_equal(winding_vector(basis, x), u))


def splay_state(n: int, k: int = 1) -> np.ndarray:
    """Equally spaced ring state with winding ``k`` along 0 -> 1 -> ... -> n-1 -> 0."""
    return -TWO_PI * k * np.arange(n) / n
