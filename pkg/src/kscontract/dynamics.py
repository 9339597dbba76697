"""The Kuramoto-Sakaguchi vector field, its Jacobians, and a fixed-step RK4 integrator.

The model on a weighted graph with frustration ``phi`` is::

    dx_i/dt = omega_i - sum_j a_ij * (sin(x_i - x_j - phi) + sin(phi))

and splits into an odd part ``-sum_j c_ij sin(x_i - x_j)`` and an even part
``-sum_j s_ij (1 - cos(x_i - x_j))`` with ``c = a cos(phi)``, ``s = a sin(phi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DimensionMismatch, InvalidRange, NonFiniteState
from .graph import WeightedGraph
from .torus import as_state, raw_edge_diffs


@dataclass(frozen=True, eq=False)
class ModelParams:
    graph: WeightedGraph
    phi: float
    omega: np.ndarray = field(default=None)
    c: np.ndarray = field(init=False, repr=False)
    s: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        phi = float(self.phi)
        if not (0.0 <= phi <= math.pi / 2):
            raise InvalidRange(f"frustration phi = {phi} outside [0, pi/2]")
        n = self.graph.n
        omega = np.zeros(n) if self.omega is None else np.array(self.omega, dtype=np.float64)
        if omega.shape != (n,):
            raise DimensionMismatch(f"omega has shape {omega.shape}, expected ({n},)")
        if not np.all(np.isfinite(omega)):
            raise InvalidRange("omega must be finite")
        omega.setflags(write=False)
        c = self.graph.weights * math.cos(phi)
        s = self.graph.weights * math.sin(phi)
        c.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "s", s)

    @property
    def n(self) -> int:
        return self.graph.n

    def with_omega(self, omega) -> ModelParams:
        return ModelParams(self.graph, self.phi, omega)


def field_from_diffs(p: ModelParams, d) -> np.ndarray:
    """Vector field as a function of oriented edge differences (the map F with f(x) = F(B^T x))."""
    g = p.graph
    d = np.asarray(d, dtype=np.float64)
    if d.shape[-1] != g.m:
        raise DimensionMismatch(f"edge vector has length {d.shape[-1]}, graph has {g.m} edges")
    if d.ndim == 1:
        return kernels.field(p.omega, g.src, g.dst, g.weights, p.phi, d)
    return kernels.field_batch(p.omega, g.src, g.dst, g.weights, p.phi, d)


def vector_field(p: ModelParams, x) -> np.ndarray:
    x = as_state(x, p.n)
    return field_from_diffs(p, raw_edge_diffs(p.graph, x))


def odd_part(p: ModelParams, x) -> np.ndarray:
    g = p.graph
    d = raw_edge_diffs(g, as_state(x, p.n))
    t = p.c * np.sin(d)
    return np.bincount(g.dst, weights=t, minlength=g.n) - np.bincount(g.src, weights=t, minlength=g.n)


def even_part(p: ModelParams, x) -> np.ndarray:
    g = p.graph
    d = raw_edge_diffs(g, as_state(x, p.n))
    t = p.s * (1.0 - np.cos(d))
    return -(np.bincount(g.src, weights=t, minlength=g.n) + np.bincount(g.dst, weights=t, minlength=g.n))


def jacobian_parts_from_diffs(p: ModelParams, d):
    """Odd and even Jacobians evaluated at edge differences ``d``.

    ``d`` may be (m,) or a stack (N, m); the outputs follow with shape
    (n, n) or (N, n, n).
    """
    g = p.graph
    d = np.asarray(d, dtype=np.float64)
    if d.shape[-1] != g.m:
        raise DimensionMismatch(f"edge vector has length {d.shape[-1]}, graph has {g.m} edges")
    jo, je = kernels.jacobian_parts_batch(g.n, g.src, g.dst, p.c, p.s, d.reshape(-1, g.m))
    if d.ndim == 1:
        return jo[0], je[0]
    return jo.reshape(d.shape[:-1] + (g.n, g.n)), je.reshape(d.shape[:-1] + (g.n, g.n))


def jacobian_odd(p: ModelParams, x) -> np.ndarray:
    return jacobian_parts_from_diffs(p, raw_edge_diffs(p.graph, as_state(x, p.n)))[0]


def jacobian_even(p: ModelParams, x) -> np.ndarray:
    return jacobian_parts_from_diffs(p, raw_edge_diffs(p.graph, as_state(x, p.n)))[1]


def jacobian(p: ModelParams, x) -> np.ndarray:
    jo, je = jacobian_parts_from_diffs(p, raw_edge_diffs(p.graph, as_state(x, p.n)))
    return jo + je


def jacobian_from_diffs(p: ModelParams, d) -> np.ndarray:
    jo, je = jacobian_parts_from_diffs(p, d)
    return jo + je


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (len(times), n)
    step: float

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def default_step(g: WeightedGraph) -> float:
    """1e-3 of the coupling time scale 1/d_max."""
    return 1e-3 / g.d_max


def integrate(p: ModelParams, x0, dt: float, t_end: float) -> Trajectory:
    """Classical RK4 with fixed step ``dt`` up to ``t_end``.

    The number of steps is ``round(t_end / dt)``; the last sample time is that
    many steps times ``dt``.
    """
    x0 = as_state(x0, p.n)
    if not (dt > 0 and math.isfinite(dt)):
        raise InvalidRange(f"dt must be positive, got {dt}")
    if not (t_end > 0 and math.isfinite(t_end)):
        raise InvalidRange(f"t_end must be positive, got {t_end}")
    if not np.all(np.isfinite(x0)):
        raise NonFiniteState("initial state is not finite")
    nsteps = max(1, int(round(t_end / dt)))
    g = p.graph
    states = kernels.rk4(p.omega, g.src, g.dst, g.weights, p.phi, x0, dt, nsteps)
    if not np.all(np.isfinite(states)):
        bad = int(np.argmax(~np.all(np.isfinite(states), axis=1)))
        raise NonFiniteState(f"state left the finite range at step {bad}")
    return Trajectory(times=dt * np.arange(nsteps + 1), states=states, step=float(dt))


def sync_residual(p: ModelParams, x) -> tuple[float, float]:
    """Mean frequency and distance of f(x) from the consensus direction."""
    f = vector_field(p, x)
    omega_s = float(np.mean(f))
    return omega_s, float(np.linalg.norm(f - omega_s))
