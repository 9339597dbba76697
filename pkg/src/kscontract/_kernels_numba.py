"""Numba-compiled kernels; same contracts as :mod:`._kernels_numpy`."""
import math

import numpy as np
from numba import njit

from ._jit import numba_default


@njit(**numba_default)
def _field_into(out, omega, src, dst, w, phi, d):
    sphi = math.sin(phi)
    for i in range(omega.shape[0]):
        out[i] = omega[i]
    for e in range(src.shape[0]):
        out[src[e]] -= w[e] * (math.sin(d[e] - phi) + sphi)
        out[dst[e]] -= w[e] * (math.sin(-d[e] - phi) + sphi)


@njit(**numba_default)
def field(omega, src, dst, w, phi, d):
    out = np.empty(omega.shape[0])
    _field_into(out, omega, src, dst, w, phi, d)
    return out


@njit(**numba_default)
def field_batch(omega, src, dst, w, phi, D):
    N = D.shape[0]
    out = np.empty((N, omega.shape[0]))
    for k in range(N):
        _field_into(out[k], omega, src, dst, w, phi, D[k])
    return out


@njit(**numba_default)
def jacobian_parts_batch(n, src, dst, c, s, D):
    N = D.shape[0]
    m = src.shape[0]
    jo = np.zeros((N, n, n))
    je = np.zeros((N, n, n))
    for k in range(N):
        for e in range(m):
            i = src[e]
            j = dst[e]
            cd = c[e] * math.cos(D[k, e])
            sd = s[e] * math.sin(D[k, e])
            jo[k, i, j] = cd
            jo[k, j, i] = cd
            je[k, i, j] = sd
            je[k, j, i] = -sd
        for i in range(n):
            ao = 0.0
            ae = 0.0
            for j in range(n):
                ao += jo[k, i, j]
                ae += je[k, i, j]
            jo[k, i, i] = -ao
            je[k, i, i] = -ae
    return jo, je


@njit(**numba_default)
def rk4(omega, src, dst, w, phi, x0, dt, nsteps):
    n = x0.shape[0]
    m = src.shape[0]
    out = np.empty((nsteps + 1, n))
    x = x0.copy()
    out[0] = x
    y = np.empty(n)
    d = np.empty(m)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    for step in range(nsteps):
        for e in range(m):
            d[e] = x[src[e]] - x[dst[e]]
        _field_into(k1, omega, src, dst, w, phi, d)
        for i in range(n):
            y[i] = x[i] + 0.5 * dt * k1[i]
        for e in range(m):
            d[e] = y[src[e]] - y[dst[e]]
        _field_into(k2, omega, src, dst, w, phi, d)
        for i in range(n):
            y[i] = x[i] + 0.5 * dt * k2[i]
        for e in range(m):
            d[e] = y[src[e]] - y[dst[e]]
        _field_into(k3, omega, src, dst, w, phi, d)
        for i in range(n):
            y[i] = x[i] + dt * k3[i]
        for e in range(m):
            d[e] = y[src[e]] - y[dst[e]]
        _field_into(k4, omega, src, dst, w, phi, d)
        for i in range(n):
            x[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            out[step + 1, i] = x[i]
    return out
