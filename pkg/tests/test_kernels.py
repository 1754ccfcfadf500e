"""The compiled kernels must reproduce the NumPy fallback."""

import numpy as np
import pytest

from spincat import dynamics as dy
from spincat import kernels

pytestmark = pytest.mark.skipif("cython" not in kernels.available_backends(),
                                reason="compiled kernels not built")


@pytest.fixture
def both():
    return kernels.backend_module("python"), kernels.backend_module("cython")


@pytest.mark.parametrize("n, nbar, d", [(5, 0.0, 0), (20, 1.5, 3), (40, 10.0, 0), (7, 2.0, 7)])
def test_dopri_equivalent(both, n, nbar, d, rng):
    py, cy = both
    diag, lo, up = dy.diagonal_coefficients(n, nbar, d)
    y0 = rng.normal(size=(2, n + 1 - d))
    ts = np.linspace(0, 0.3, 7)
    a = py.dopri_tridiag(diag, lo, up, y0, 0.0, ts, 1e-10, 1e-12, 1e-4, 10**6)
    b = cy.dopri_tridiag(diag, lo, up, y0, 0.0, ts, 1e-10, 1e-12, 1e-4, 10**6)
    assert a[1] == b[1] == kernels.STATUS_OK
    scale = np.max(np.abs(a[0]))
    assert np.max(np.abs(a[0] - b[0])) < 1e-9 * scale


@pytest.mark.parametrize("status_case", ["max_steps", "underflow"])
def test_dopri_status_codes(both, status_case):
    diag = np.array([-1.0, -2.0])
    lo = np.zeros(2)
    up = np.zeros(2)
    for mod in both:
        if status_case == "max_steps":
            res = mod.dopri_tridiag(diag, lo, up, np.ones((1, 2)), 0.0, [10.0], 1e-10, 1e-12, 1e-3, 5)
            assert res[1] == kernels.STATUS_MAX_STEPS
        else:
            res = mod.dopri_tridiag(diag * 1e18, lo, up, np.ones((1, 2)), 0.0, [1.0], 1e-14, 0.0, 1e-30,
                                    10**6)
            assert res[1] in (kernels.STATUS_UNDERFLOW, kernels.STATUS_OK)


@pytest.mark.parametrize("args", [(3, 3, 0, 0, -0.5), (10, 12, -2, 5, 0.0), (2.5, 3.5, 0.5, -1.5, 0.0),
                                  (50, 60, 10, -3, 0.0), (200, 200, 0, 0, -0.99)])
def test_threej_equivalent(both, args):
    py, cy = both
    assert np.allclose(py.threej_recursion(*args), cy.threej_recursion(*args), atol=1e-15, rtol=0)


@pytest.mark.parametrize("m, lmax", [(0, 0), (0, 30), (3, 3), (7, 80), (400, 700)])
def test_legendre_equivalent(both, m, lmax):
    py, cy = both
    x = np.linspace(-1, 1, 37)
    a = py.legendre_table(m, lmax, x)
    b = cy.legendre_table(m, lmax, x)
    assert np.allclose(a, b, atol=1e-13, rtol=1e-12)
    c = np.linspace(1, 2, max(lmax - m + 1, 0))
    assert np.allclose(py.legendre_sum(c, m, x), cy.legendre_sum(c, m, x), atol=1e-12, rtol=1e-12)


def test_backend_selection():
    assert kernels.BACKEND in kernels.available_backends()
    with pytest.raises(ValueError):
        kernels.backend_module("fortran")
