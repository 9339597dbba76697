"""Backend selection for the hot numeric kernels.

The compiled backend is used when numba imports and
``KSCONTRACT_DISABLE_NUMBA`` is unset; otherwise the numpy reference
implementation is used.  Both backends are importable directly for parity
tests and benchmarks.
"""
import numpy as np

from . import _kernels_numpy
from ._jit import HAVE_NUMBA, USE_NUMBA

if USE_NUMBA:
    from . import _kernels_numba as _backend
else:
    _backend = _kernels_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"


def backend_module(name):
    """Return the kernel module called ``name`` ("numba" or "numpy")."""
    if name == "numpy":
        return _kernels_numpy
    if name == "numba":
        if not HAVE_NUMBA:
            raise ImportError("numba is not installed")
        from . import _kernels_numba

        return _kernels_numba
    raise ValueError(f"unknown backend {name!r}")


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def field(omega, src, dst, w, phi, d):
    return _backend.field(_f64(omega), src, dst, w, float(phi), _f64(d))


def field_batch(omega, src, dst, w, phi, D):
    return _backend.field_batch(_f64(omega), src, dst, w, float(phi), _f64(np.atleast_2d(D)))


def jacobian_parts_batch(n, src, dst, c, s, D):
    return _backend.jacobian_parts_batch(int(n), src, dst, c, s, _f64(np.atleast_2d(D)))


def rk4(omega, src, dst, w, phi, x0, dt, nsteps):
    return _backend.rk4(_f64(omega), src, dst, w, float(phi), _f64(x0), float(dt), int(nsteps))
