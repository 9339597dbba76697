"""Compiled and numpy kernels must agree."""
import math

import numpy as np
import pytest

from kscontract import kernels
from kscontract._jit import HAVE_NUMBA

pytestmark = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


@pytest.fixture(scope="module")
def backends():
    return kernels.backend_module("numpy"), kernels.backend_module("numba")


def test_field_parity(backends, random10, rng):
    ref, jit = backends
    g = random10
    for _ in range(10):
        omega = rng.normal(size=g.n)
        phi = rng.uniform(0, math.pi / 2)
        d = rng.uniform(-4, 4, g.m)
        np.testing.assert_allclose(
            jit.field(omega, g.src, g.dst, g.weights, phi, d),
            ref.field(omega, g.src, g.dst, g.weights, phi, d),
            atol=1e-13,
        )
        D = rng.uniform(-4, 4, (7, g.m))
        np.testing.assert_allclose(
            jit.field_batch(omega, g.src, g.dst, g.weights, phi, D),
            ref.field_batch(omega, g.src, g.dst, g.weights, phi, D),
            atol=1e-13,
        )


def test_jacobian_parity(backends, random10, rng):
    ref, jit = backends
    g = random10
    c = g.weights * math.cos(0.4)
    s = g.weights * math.sin(0.4)
    D = rng.uniform(-4, 4, (9, g.m))
    for a, b in zip(jit.jacobian_parts_batch(g.n, g.src, g.dst, c, s, D), ref.jacobian_parts_batch(g.n, g.src, g.dst, c, s, D)):
        np.testing.assert_allclose(a, b, atol=1e-13)


def test_rk4_parity(backends, ring6, rng):
    ref, jit = backends
    g = ring6
    omega = 0.1 * rng.normal(size=g.n)
    x0 = rng.uniform(-1, 1, g.n)
    a = jit.rk4(omega, g.src, g.dst, g.weights, 0.3, x0, 1e-2, 200)
    b = ref.rk4(omega, g.src, g.dst, g.weights, 0.3, x0, 1e-2, 200)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_backend_module_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.backend_module("fortran")


def test_env_flag_selects_numpy(monkeypatch):
    import importlib

    import kscontract._jit as jit_mod

    monkeypatch.setenv("KSCONTRACT_DISABLE_NUMBA", "1")
    try:
        importlib.reload(jit_mod)
        reloaded = importlib.reload(kernels)
        assert reloaded.BACKEND == "numpy"
    finally:
        monkeypatch.delenv("KSCONTRACT_DISABLE_NUMBA")
        importlib.reload(jit_mod)
        importlib.reload(kernels)
