"""Numba availability and the switch between compiled and pure-numpy kernels.

Set ``KSCONTRACT_DISABLE_NUMBA=1`` before import to force the numpy path.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

DISABLED_BY_ENV = os.environ.get("KSCONTRACT_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is optional
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV

numba_default = {
    "nogil": True,
    "cache": True,
    "fastmath": False,
    "boundscheck": False,
    "error_model": "numpy",
}
