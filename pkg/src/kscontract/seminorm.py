"""The consensus seminorm ||R x||_2 and its logarithmic seminorm.

``R`` is an (n-1) x n matrix with orthonormal rows spanning the complement of
the all-ones vector.  Three independent evaluations of the log-seminorm are
provided: the symmetric-part eigenvalue formula, a linear-matrix-inequality
membership test, and the defining one-sided difference quotient.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, InvalidDimension, KernelNotInvariant

LMI_TOL = 1e-9
KERNEL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ConsensusProjector:
    n: int
    R: np.ndarray
    Pi: np.ndarray

    def _check(self, A: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=np.float64)
        if A.shape[-2:] != (self.n, self.n):
            raise DimensionMismatch(f"matrix shape {A.shape} incompatible with n = {self.n}")
        return A

    def compress(self, A) -> np.ndarray:
        """``R A R^T``; works on stacks (..., n, n)."""
        A = self._check(A)
        return self.R @ A @ self.R.T

    def rotated(self, Q: np.ndarray) -> ConsensusProjector:
        """Projector with rows ``Q R`` for an orthogonal (n-1) x (n-1) matrix ``Q``."""
        R = np.asarray(Q) @ self.R
        R.setflags(write=False)
        return ConsensusProjector(self.n, R, self.Pi)


def helmert_rows(n: int) -> np.ndarray:
    R = np.zeros((n - 1, n))
    for k in range(1, n):
        R[k - 1, :k] = 1.0
        R[k - 1, k] = -k
        R[k - 1] /= np.sqrt(k * (k + 1.0))
    return R


@lru_cache(maxsize=64)
def build_projector(n: int) -> ConsensusProjector:
    """Deterministic projector built from Helmert rows."""
    if int(n) != n or n < 2:
        raise InvalidDimension(f"need n >= 2, got {n}")
    n = int(n)
    R = helmert_rows(n)
    Pi = np.eye(n) - np.full((n, n), 1.0 / n)
    R.setflags(write=False)
    Pi.setflags(write=False)
    return ConsensusProjector(n, R, Pi)


def consensus_seminorm(proj: ConsensusProjector, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (proj.n,):
        raise DimensionMismatch(f"vector shape {x.shape}, expected ({proj.n},)")
    return float(np.linalg.norm(proj.R @ x))


def log_seminorm(proj: ConsensusProjector, A):
    """``lambda_max(R (A + A^T)/2 R^T)``; vectorized over leading axes."""
    A = proj._check(A)
    sym = 0.5 * (A + np.swapaxes(A, -1, -2))
    vals = np.linalg.eigvalsh(proj.R @ sym @ proj.R.T)
    out = vals[..., -1]
    return float(out) if out.ndim == 0 else out


def log_seminorm_lmi_check(proj: ConsensusProjector, A, b: float) -> bool:
    """Whether ``Pi A + A^T Pi <= 2 b Pi`` holds on the complement of 1."""
    A = proj._check(A)
    Pi = proj.Pi
    M = 2.0 * b * Pi - Pi @ A - A.T @ Pi
    lo = np.linalg.eigvalsh(proj.R @ M @ proj.R.T)[0]
    return bool(lo >= -LMI_TOL)


def kernel_defect(proj: ConsensusProjector, A) -> float:
    A = proj._check(A)
    return float(np.linalg.norm(proj.Pi @ A @ np.ones(proj.n)))


def log_seminorm_limit_estimate(proj: ConsensusProjector, A, h: float) -> float:
    """One-sided difference quotient ``(||I + hA|| - 1)/h`` in the induced seminorm.

    Requires ``A 1`` to lie in span(1) so that the induced seminorm equals the
    spectral norm of the compression ``R (I + hA) R^T``.
    """
    A = proj._check(A)
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    defect = kernel_defect(proj, A)
    if defect > KERNEL_TOL:
        raise KernelNotInvariant(f"||Pi A 1|| = {defect:.3e}: A does not preserve span(1)")
    M = proj.R @ (np.eye(proj.n) + h * A) @ proj.R.T
    return float((np.linalg.norm(M, 2) - 1.0) / h)


def richardson_limit(proj: ConsensusProjector, A, hs=(1e-2, 1e-3, 1e-4)) -> float:
    """Extrapolate the difference quotient to h -> 0 assuming an O(h) error term.

    Fits ``mu + a h + b h^2`` through the given step sizes.
    """
    hs = np.asarray(hs, dtype=np.float64)
    vals = np.array([log_seminorm_limit_estimate(proj, A, h) for h in hs])
    V = np.vander(hs, N=min(len(hs), 3), increasing=True)
    coef, *_ = np.linalg.lstsq(V, vals, rcond=None)
    return float(coef[0])
