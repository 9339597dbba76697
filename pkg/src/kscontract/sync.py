"""Synchronous states per winding cell: lifting, Newton search, and multistart uniqueness."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .certificate import gamma_bar
from .dynamics import ModelParams, sync_residual
from .errors import (
    CycleInconsistent,
    DimensionMismatch,
    InvalidRange,
    MaxIterations,
    SingularJacobian,
    SolverError,
)
from .graph import CycleBasis, WeightedGraph
from .reduction import (
    ReducedState,
    _as_u,
    embed_edge_diffs,
    in_polytope,
    _halfspaces,
    chebyshev_center,
    polytope_bounding_box,
    reduced_field,
    reduced_jacobian,
)
from .torus import as_state, ccw_diff

NEWTON_TOL = 1e-10
LIFTED_TOL = 1e-8
SAME_SYNC_TOL = 1e-7
LIFT_TOL = 1e-8
MAX_COND = 1e13


def lift(g: WeightedGraph, basis: CycleBasis, z, u) -> np.ndarray:
    """Mean-zero phase state whose projection is ``(z, u)``.

    Phases are propagated from the BFS root along tree edges; each non-tree
    edge must then match its prescribed difference modulo 2*pi.
    """
    eta = embed_edge_diffs(g, basis, z, u)
    x = np.zeros(g.n)
    for v in basis.order[1:]:
        e = basis.parent_edge[v]
        par = basis.parent[v]
        x[v] = x[par] + eta[e] if g.src[e] == v else x[par] - eta[e]
    off = ccw_diff(x[g.src] - x[g.dst] - eta, 0.0)
    worst = float(np.max(np.abs(off)))
    if worst > LIFT_TOL:
        raise CycleInconsistent(f"non-tree edge mismatch {worst:.3e}: eta is not a cell image")
    return x - x.mean()


def same_sync(x, y) -> bool:
    """Equal up to a common phase shift and per-node multiples of 2*pi."""
    x = as_state(x)
    y = as_state(y)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shapes {x.shape} and {y.shape} differ")
    d = x - y
    r = ccw_diff(d - d[0], 0.0)
    return bool(np.max(np.abs(r)) <= SAME_SYNC_TOL)


@dataclass(frozen=True)
class SyncResult:
    found: bool
    z_star: ReducedState | None
    x_star: np.ndarray | None
    omega_s: float
    residual: float
    in_cell: bool
    iterations: int
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "u": None if self.z_star is None else self.z_star.u.tolist(),
            "z_star": None if self.z_star is None else self.z_star.z.tolist(),
            "x_star": None if self.x_star is None else self.x_star.tolist(),
            "omega_s": self.omega_s,
            "residual": self.residual,
            "in_cell": self.in_cell,
            "iterations": self.iterations,
            "error": self.error,
        }


def _check_gamma(p: ModelParams, gamma: float) -> float:
    gb = gamma_bar(p.graph, p.phi)
    gamma = float(gamma)
    if not (0.0 < gamma < gb):
        raise InvalidRange(f"gamma = {gamma} must lie in (0, gamma_bar = {gb})")
    return gamma


def find_sync(
    p: ModelParams,
    basis: CycleBasis,
    u,
    gamma: float,
    z0,
    *,
    tol: float = NEWTON_TOL,
    max_iter: int = 100,
    max_halvings: int = 30,
    strict: bool = True,
) -> SyncResult:
    """Damped Newton on the reduced field from ``z0``.

    Iterates may leave the polytope; only the converged point's membership is
    reported.  With ``strict=False`` solver failures come back as a result
    with ``found=False`` instead of raising.
    """
    g = p.graph
    gamma = _check_gamma(p, gamma)
    u = _as_u(basis, u)
    z = np.array(z0.z if isinstance(z0, ReducedState) else z0, dtype=np.float64).reshape(-1)
    if z.shape[0] != g.n - 1:
        raise DimensionMismatch(f"z0 has length {z.shape[0]}, expected {g.n - 1}")
    if not in_polytope(g, basis, z, u, gamma):
        raise InvalidRange("initial point is not in the gamma-cohesive polytope")

    def fail(exc: SolverError, it: int, resid: float) -> SyncResult:
        if strict:
            raise exc
        return SyncResult(False, None, None, math.nan, resid, False, it, f"{type(exc).__name__}: {exc}")

    F = reduced_field(p, basis, z, u)
    r = float(np.linalg.norm(F))
    it = 0
    while r > tol:
        if it >= max_iter:
            return fail(MaxIterations(f"no convergence after {max_iter} iterations"), it, r)
        J = reduced_jacobian(p, basis, z, u)
        if not np.all(np.isfinite(J)) or np.linalg.cond(J) > MAX_COND:
            return fail(SingularJacobian(f"reduced Jacobian singular at iteration {it}"), it, r)
        step = np.linalg.solve(J, -F)
        t = 1.0
        for _ in range(max_halvings + 1):
            z_new = z + t * step
            F_new = reduced_field(p, basis, z_new, u)
            r_new = float(np.linalg.norm(F_new))
            if r_new < r:
                break
            t *= 0.5
        else:
            return fail(MaxIterations(f"line search stalled at residual {r:.3e}"), it, r)
        z, F, r = z_new, F_new, r_new
        it += 1

    x = lift(g, basis, z, u)
    omega_s, lifted = sync_residual(p, x)
    if lifted > LIFTED_TOL:
        return fail(SolverError(f"lifted residual {lifted:.3e} above {LIFTED_TOL}"), it, r)
    return SyncResult(
        found=True,
        z_star=ReducedState(z, u),
        x_star=x,
        omega_s=omega_s,
        residual=r,
        in_cell=bool(in_polytope(g, basis, z, u, gamma)),
        iterations=it,
    )


def enumerate_feasible_windings(g: WeightedGraph, basis: CycleBasis, gamma: float) -> list[np.ndarray]:
    """Winding vectors allowed by cohesiveness: ``|u_k| <= floor(len_k gamma / 2pi)``.

    Necessary, not sufficient: some returned cells can be empty.
    """
    gamma = float(gamma)
    if not (0.0 < gamma <= math.pi / 2):
        raise InvalidRange(f"gamma = {gamma} outside (0, pi/2]")
    ranges = []
    for ell in basis.lengths:
        k = int(math.floor(ell * gamma / (2.0 * math.pi)))
        ranges.append(range(-k, k + 1))
    return [np.array(c, dtype=np.int64) for c in itertools.product(*ranges)]


def _hit_and_run(A, b, z, count, thin, rng) -> np.ndarray:
    k = z.shape[0]
    out = np.empty((count, k))
    burn = 10 * thin
    total = burn + count * thin
    dirs = rng.normal(size=(total, k))
    unif = rng.uniform(size=total)
    for step in range(total):
        d = dirs[step]
        ad = A @ d
        with np.errstate(divide="ignore"):
            ratio = (b - A @ z) / ad
        hi = np.min(ratio[ad > 0], initial=np.inf)
        lo = np.max(ratio[ad < 0], initial=-np.inf)
        z = z + (lo + (hi - lo) * unif[step]) * d
        if step >= burn and (step - burn) % thin == thin - 1:
            out[(step - burn) // thin] = z
    return out


def sample_polytope(
    g: WeightedGraph,
    basis: CycleBasis,
    u,
    gamma: float,
    count: int,
    rng: np.random.Generator,
    method: str = "auto",
    batch: int = 4096,
    max_draws: int = 1_000_000,
) -> np.ndarray:
    """Points of P_{u,gamma}, uniform or approximately so.

    ``"rejection"`` draws from the LP bounding box and keeps members (exact,
    independent).  ``"hit-and-run"`` runs a chain from the Chebyshev center,
    thinned every ``n - 1`` moves; it is needed in higher dimension, where the
    polytope fills a vanishing fraction of its box.  ``"auto"`` uses rejection
    when a trial batch suggests ``count`` members fit within ``max_draws``.
    Rejection may return fewer than ``count`` rows once ``max_draws`` is
    spent; an empty array means the polytope has no interior.
    """
    if method not in ("auto", "rejection", "hit-and-run"):
        raise ValueError(f"unknown sampling method {method!r}")
    k = g.n - 1
    if count <= 0:
        return np.zeros((0, k))
    center = chebyshev_center(g, basis, u, gamma)
    if center is None:
        return np.zeros((0, k))

    if method != "hit-and-run":
        lo, hi = polytope_bounding_box(g, basis, u, gamma)
        kept = []
        total = draws = 0
        while total < count and draws < max_draws:
            Z = rng.uniform(lo, hi, size=(batch, k))
            draws += batch
            ok = in_polytope(g, basis, Z, u, gamma)
            kept.append(Z[ok])
            total += int(ok.sum())
            if method == "auto" and draws == batch and total * max_draws < count * batch:
                break
        else:
            return np.concatenate(kept)[:count]

    A, b = _halfspaces(g, basis, u, gamma)
    out = _hit_and_run(A, b, center[0].copy(), count, max(1, k), rng)
    return out[in_polytope(g, basis, out, u, gamma)]


@dataclass
class SyncClass:
    representative: np.ndarray
    omega_s: float
    count: int = 1
    max_residual: float = 0.0


@dataclass
class UniquenessReport:
    u: list[int]
    gamma: float
    n_starts: int
    converged: int = 0
    escaped: int = 0
    diverged: int = 0
    classes: list[SyncClass] = field(default_factory=list)
    errors: dict[str, int] = field(default_factory=dict)
    note: str | None = None

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def violation(self) -> bool:
        """Two distinct synchronous states inside one certified cell."""
        return self.n_classes > 1

    def to_dict(self) -> dict:
        return {
            "u": self.u,
            "gamma": self.gamma,
            "n_starts": self.n_starts,
            "converged": self.converged,
            "escaped": self.escaped,
            "diverged": self.diverged,
            "n_classes": self.n_classes,
            "violation": self.violation,
            "classes": [
                {
                    "representative": c.representative.tolist(),
                    "omega_s": c.omega_s,
                    "count": c.count,
                    "max_residual": c.max_residual,
                }
                for c in self.classes
            ],
            "errors": dict(sorted(self.errors.items())),
            "note": self.note,
        }


def _solve_from(args) -> SyncResult:
    p, basis, u, gamma, z0 = args
    return find_sync(p, basis, u, gamma, z0, strict=False)


def uniqueness_check(
    p: ModelParams,
    basis: CycleBasis,
    u,
    gamma: float,
    n_starts: int,
    seed: int,
    jobs: int = 1,
) -> UniquenessReport:
    """Multistart Newton inside P_{u,gamma}, grouping in-cell results by :func:`same_sync`."""
    g = p.graph
    gamma = _check_gamma(p, gamma)
    u = _as_u(basis, u)
    report = UniquenessReport(u=u.tolist(), gamma=gamma, n_starts=0)
    if n_starts <= 0:
        return report
    rng = np.random.default_rng(seed)
    starts = sample_polytope(g, basis, u, gamma, n_starts, rng)
    report.n_starts = int(starts.shape[0])
    if starts.shape[0] == 0:
        report.note = "empty cell"
        return report
    if starts.shape[0] < n_starts:
        report.note = f"sampler budget exhausted: {starts.shape[0]} of {n_starts} starts"

    tasks = [(p, basis, u, gamma, z0) for z0 in starts]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve_from, tasks))
    else:
        results = [_solve_from(t) for t in tasks]

    for res in results:
        if not res.found:
            report.diverged += 1
            name = (res.error or "unknown").split(":")[0]
            report.errors[name] = report.errors.get(name, 0) + 1
            continue
        if not res.in_cell:
            report.escaped += 1
            continue
        report.converged += 1
        _, lifted = sync_residual(p, res.x_star)
        for cls in report.classes:
            if same_sync(cls.representative, res.x_star):
                cls.count += 1
                cls.max_residual = max(cls.max_residual, lifted)
                break
        else:
            report.classes.append(SyncClass(res.x_star, res.omega_s, 1, lifted))
    return report
