"""Closed-form semicontraction bounds and their numerical verification.

For a gamma-cohesive state the odd Jacobian has log-seminorm at most
``-cos(phi) cos(gamma) lambda_2`` and the even Jacobian at most
``sin(phi) sin(gamma) d_max``.  Their sum is negative exactly for
``gamma < gamma_bar = arctan(lambda_2 / (d_max tan(phi)))``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .dynamics import ModelParams, jacobian_parts_from_diffs
from .errors import DimensionMismatch, InvalidRange, NotCohesive
from .graph import CycleBasis, WeightedGraph
from .seminorm import build_projector, log_seminorm
from .torus import TWO_PI, as_state, ccw_diff, edge_diffs, is_cohesive, winding_vectors_from_diffs

BOUND_TOL = 1e-9

SEMICONTRACTING = "Semicontracting"
NOT_CERTIFIED = "NotCertified"


def _check_angles(phi: float, gamma: float | None = None) -> None:
    if not (0.0 <= phi <= math.pi / 2):
        raise InvalidRange(f"phi = {phi} outside [0, pi/2]")
    if gamma is not None and not (0.0 <= gamma <= math.pi / 2):
        raise InvalidRange(f"gamma = {gamma} outside [0, pi/2]")


def odd_bound(g: WeightedGraph, phi: float, gamma: float) -> float:
    _check_angles(phi, gamma)
    return -math.cos(phi) * math.cos(gamma) * g.lambda2


def even_bound(g: WeightedGraph, phi: float, gamma: float) -> float:
    _check_angles(phi, gamma)
    return math.sin(phi) * math.sin(gamma) * g.d_max


def gamma_bar_from_ratio(ratio: float, phi: float) -> float:
    """``arctan(ratio / tan(phi))``, continuous at phi = 0 where it equals pi/2."""
    return math.atan2(ratio * math.cos(phi), math.sin(phi))


def gamma_bar(g: WeightedGraph, phi: float) -> float:
    """Cohesiveness threshold below which the model is certified semicontracting."""
    _check_angles(phi)
    return math.atan2(g.lambda2 * math.cos(phi), g.d_max * math.sin(phi))


def _rate(g: WeightedGraph, phi: float, gamma: float) -> float:
    return math.cos(phi) * math.cos(gamma) * g.lambda2 - math.sin(phi) * math.sin(gamma) * g.d_max


def contraction_rate(g: WeightedGraph, phi: float, gamma: float) -> float:
    """Certified rate ``cos(phi)cos(gamma)lambda_2 - sin(phi)sin(gamma)d_max``.

    Raises :class:`InvalidRange` unless ``0 <= gamma < gamma_bar``.
    """
    _check_angles(phi, gamma)
    gb = gamma_bar(g, phi)
    if gamma >= gb:
        raise InvalidRange(f"gamma = {gamma} >= gamma_bar = {gb}: no certificate")
    return _rate(g, phi, gamma)


def contraction_rate_closed_form(lambda2: float, d_max: float, phi: float, gamma: float) -> float:
    """The same rate written through ``tan(gamma_bar - gamma)``.

    With ``T = d_max tan(phi)`` and ``tau = tan(gamma_bar - gamma)``::

        c = cos(phi) cos(gamma) tau (T^2 + lambda2^2) / (T + lambda2 tau)
    """
    T = d_max * math.tan(phi)
    gb = math.atan2(lambda2 * math.cos(phi), d_max * math.sin(phi))
    tau = math.tan(gb - gamma)
    return math.cos(phi) * math.cos(gamma) * tau * (T * T + lambda2 * lambda2) / (T + lambda2 * tau)


@dataclass(frozen=True)
class CertificateReport:
    gamma_bar: float
    gamma: float
    odd_bound: float
    even_bound: float
    rate_c: float
    lambda2: float
    d_max: float
    phi: float
    verdict: str
    limit_case: bool

    def to_dict(self) -> dict:
        return asdict(self)


def certify(g: WeightedGraph, phi: float, gamma: float | None = None) -> CertificateReport:
    """Evaluate the certificate at ``gamma`` (default ``0.9 * gamma_bar``)."""
    gb = gamma_bar(g, phi)
    if gamma is None:
        gamma = 0.9 * gb
    gamma = float(gamma)
    _check_angles(phi, gamma)
    ob = odd_bound(g, phi, gamma)
    eb = even_bound(g, phi, gamma)
    return CertificateReport(
        gamma_bar=gb,
        gamma=gamma,
        odd_bound=ob,
        even_bound=eb,
        rate_c=-(ob + eb),
        lambda2=g.lambda2,
        d_max=g.d_max,
        phi=float(phi),
        verdict=SEMICONTRACTING if gamma < gb else NOT_CERTIFIED,
        limit_case=(phi == 0.0),
    )


@dataclass(frozen=True)
class PointwiseCheck:
    mu_odd: float
    mu_even: float
    mu_total: float
    odd_bound: float
    even_bound: float
    max_even_diagonal: float
    all_bounds_hold: bool


def verify_pointwise(p: ModelParams, x, gamma: float) -> PointwiseCheck:
    g = p.graph
    x = as_state(x, g.n)
    _check_angles(p.phi, gamma)
    if not is_cohesive(g, x, gamma):
        raise NotCohesive(f"state is not {gamma}-cohesive")
    jo, je = jacobian_parts_from_diffs(p, edge_diffs(g, x))
    proj = build_projector(g.n)
    mus = log_seminorm(proj, np.stack([jo, je, jo + je]))
    ob = odd_bound(g, p.phi, gamma)
    eb = even_bound(g, p.phi, gamma)
    ok = bool(
        mus[0] <= ob + BOUND_TOL and mus[1] <= eb + BOUND_TOL and mus[2] <= ob + eb + BOUND_TOL
    )
    return PointwiseCheck(
        mu_odd=float(mus[0]),
        mu_even=float(mus[1]),
        mu_total=float(mus[2]),
        odd_bound=ob,
        even_bound=eb,
        max_even_diagonal=float(np.max(np.diag(je))),
        all_bounds_hold=ok,
    )


def log_seminorms_at(p: ModelParams, X) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Log-seminorms of the odd, even, and full Jacobians for a stack of states (N, n)."""
    g = p.graph
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != g.n:
        raise DimensionMismatch(f"states have {X.shape[1]} columns, expected {g.n}")
    jo, je = jacobian_parts_from_diffs(p, X[:, g.src] - X[:, g.dst])
    proj = build_projector(g.n)
    return log_seminorm(proj, jo), log_seminorm(proj, je), log_seminorm(proj, jo + je)


def sample_cohesive_states(
    g: WeightedGraph,
    gamma: float,
    count: int,
    rng: np.random.Generator,
    batch: int = 4096,
    max_draws: int = 50_000_000,
) -> np.ndarray:
    """Uniform draws from the gamma-cohesive set, modulo rigid shifts.

    Edge differences along the BFS spanning tree are drawn uniformly in
    [-gamma, gamma] and propagated to node phases from a uniformly random
    root phase; draws whose remaining edges violate cohesiveness are
    rejected.  Returns an array of shape (count, n).
    """
    gamma = float(gamma)
    if not (0.0 <= gamma <= math.pi):
        raise InvalidRange(f"gamma = {gamma} outside [0, pi]")
    basis = g.basis
    kept = []
    total = 0
    draws = 0
    while total < count:
        if draws >= max_draws:
            raise RuntimeError(f"cohesive sampler accepted {total}/{count} after {draws} draws")
        X = _tree_phases(g, basis, rng.uniform(-gamma, gamma, size=(batch, g.n - 1)))
        X += rng.uniform(0.0, TWO_PI, size=(batch, 1))
        draws += batch
        ok = np.max(np.abs(ccw_diff(X[:, g.src] - X[:, g.dst], 0.0)), axis=1) <= gamma
        kept.append(X[ok])
        total += int(ok.sum())
    return np.concatenate(kept)[:count]


def _tree_phases(g: WeightedGraph, basis: CycleBasis, tree_diffs: np.ndarray) -> np.ndarray:
    """Phases whose tree-edge differences (in BFS order of the child vertex) are given."""
    N = tree_diffs.shape[0]
    X = np.zeros((N, g.n))
    for k, v in enumerate(basis.order[1:]):
        par = basis.parent[v]
        # child sits at src or dst of its parent edge
        sign = 1.0 if g.src[basis.parent_edge[v]] == v else -1.0
        X[:, v] = X[:, par] + sign * tree_diffs[:, k]
    return X


def bounds_curve(ratios, phi_grid) -> np.ndarray:
    """Rows ``(ratio, phi, gamma_bar)`` for every ratio and phi; shape (len(ratios)*len(phi_grid), 3)."""
    rows = []
    for r in ratios:
        r = float(r)
        if not r > 0:
            raise InvalidRange(f"ratio must be positive, got {r}")
        for phi in phi_grid:
            phi = float(phi)
            if not (0.0 < phi <= math.pi / 2):
                raise InvalidRange(f"phi = {phi} outside (0, pi/2]")
            rows.append((r, phi, gamma_bar_from_ratio(r, phi)))
    return np.array(rows, dtype=np.float64).reshape(-1, 3)


@dataclass(frozen=True)
class ScanGrid:
    s: np.ndarray  # (res,)
    t: np.ndarray  # (res,)
    mu: np.ndarray  # (res, res), indexed [i_s, i_t]
    windings: np.ndarray  # (res, res, c)
    cohesive: np.ndarray  # (res, res) bool
    gamma: float
    origin: np.ndarray
    dir1: np.ndarray
    dir2: np.ndarray

    @property
    def resolution(self) -> int:
        return self.s.shape[0]


def scan_slice(
    p: ModelParams,
    basis: CycleBasis,
    origin,
    dir1,
    dir2,
    s_range: tuple[float, float],
    t_range: tuple[float, float],
    resolution: int,
    gamma: float | None = None,
    jobs: int = 1,
    chunk: int = 2048,
) -> ScanGrid:
    """Log-seminorm of the Jacobian on the plane ``origin + s dir1 + t dir2``.

    Grid axes include both endpoints.  Cohesiveness is flagged at ``gamma``,
    which defaults to ``gamma_bar``.  Grid points are independent; with
    ``jobs > 1`` chunks are evaluated on a thread pool (LAPACK releases the GIL).
    """
    g = p.graph
    origin = as_state(origin, g.n)
    dir1 = as_state(dir1, g.n)
    dir2 = as_state(dir2, g.n)
    if np.linalg.matrix_rank(np.stack([dir1, dir2])) < 2:
        raise InvalidRange("scan directions must be linearly independent")
    resolution = int(resolution)
    if resolution < 2:
        raise InvalidRange("resolution must be at least 2")
    if gamma is None:
        gamma = gamma_bar(g, p.phi)
    s = np.linspace(s_range[0], s_range[1], resolution)
    t = np.linspace(t_range[0], t_range[1], resolution)
    S, T = np.meshgrid(s, t, indexing="ij")
    X = origin + S.reshape(-1, 1) * dir1 + T.reshape(-1, 1) * dir2
    D = ccw_diff(X[:, g.src] - X[:, g.dst], 0.0)

    proj = build_projector(g.n)

    def work(sl):
        jo, je = jacobian_parts_from_diffs(p, D[sl])
        return log_seminorm(proj, jo + je)

    slices = [slice(k, min(k + chunk, D.shape[0])) for k in range(0, D.shape[0], chunk)]
    if jobs > 1 and len(slices) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(work, slices))
    else:
        parts = [work(sl) for sl in slices]
    mu = np.concatenate(parts).reshape(resolution, resolution)
    windings = winding_vectors_from_diffs(basis, D).reshape(resolution, resolution, basis.c)
    cohesive = (np.max(np.abs(D), axis=1) <= gamma).reshape(resolution, resolution)
    return ScanGrid(s, t, mu, windings, cohesive, float(gamma), origin, dir1, dir2)
