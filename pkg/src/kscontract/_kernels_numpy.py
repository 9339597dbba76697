"""Pure-numpy reference kernels.

All kernels work on the edge-list form of a graph: ``src[e] < dst[e]`` are the
endpoints of edge ``e`` and ``d[e]`` is the oriented difference
``x[src[e]] - x[dst[e]]`` (raw or counterclockwise, the trigonometry does not
care).
"""
import numpy as np


def field(omega, src, dst, w, phi, d):
    n = omega.shape[0]
    sphi = np.sin(phi)
    out_src = w * (np.sin(d - phi) + sphi)
    out_dst = w * (np.sin(-d - phi) + sphi)
    return (
        omega
        - np.bincount(src, weights=out_src, minlength=n)
        - np.bincount(dst, weights=out_dst, minlength=n)
    )


def field_batch(omega, src, dst, w, phi, D):
    """Row-wise :func:`field` for a stack of edge-difference vectors ``D`` (N, m)."""
    N = D.shape[0]
    n = omega.shape[0]
    sphi = np.sin(phi)
    out = np.broadcast_to(omega, (N, n)).copy()
    np.subtract.at(out, (slice(None), src), w * (np.sin(D - phi) + sphi))
    np.subtract.at(out, (slice(None), dst), w * (np.sin(-D - phi) + sphi))
    return out


def jacobian_parts_batch(n, src, dst, c, s, D):
    N = D.shape[0]
    cosd = np.cos(D)
    sind = np.sin(D)
    jo = np.zeros((N, n, n))
    je = np.zeros((N, n, n))
    jo[:, src, dst] = c * cosd
    jo[:, dst, src] = c * cosd
    je[:, src, dst] = s * sind
    je[:, dst, src] = -s * sind
    idx = np.arange(n)
    jo[:, idx, idx] = -jo.sum(axis=2)
    je[:, idx, idx] = -je.sum(axis=2)
    return jo, je


def rk4(omega, src, dst, w, phi, x0, dt, nsteps):
    out = np.empty((nsteps + 1, x0.shape[0]))
    out[0] = x0
    x = x0.copy()

    def f(y):
        return field(omega, src, dst, w, phi, y[src] - y[dst])

    # a blow-up is reported by the caller, as in the compiled kernel
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(nsteps):
            k1 = f(x)
            k2 = f(x + 0.5 * dt * k1)
            k3 = f(x + 0.5 * dt * k2)
            k4 = f(x + dt * k3)
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out[k + 1] = x
    return out
