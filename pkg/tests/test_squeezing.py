import math

import numpy as np
import pytest

from spincat.errors import DomainError, NoSqueezingError
from spincat.squeezing import (
    max_squeezing,
    squeezing_measure,
    squeezing_report,
    variance_jx,
    variance_jy,
    variance_oracle,
)
from spincat.states import coherent_state, nonpolar_cat, spin_operators


def test_two_atom_values():
    assert variance_jx(2, math.pi / 4) == pytest.approx(2 / 3, abs=1e-15)
    assert variance_jy(2, math.pi / 4) == pytest.approx(1 / 3, abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 8, 17, 30])
@pytest.mark.parametrize("beta_deg", [0, 10, 45, 90, 135, 179])
def test_variances_match_oracle(n, beta_deg):
    beta = math.radians(beta_deg)
    psi = nonpolar_cat(n, beta)
    assert variance_jx(n, beta) == pytest.approx(variance_oracle(psi, "x"), abs=1e-10)
    assert variance_jy(n, beta) == pytest.approx(variance_oracle(psi, "y"), abs=1e-10)


@pytest.mark.parametrize("n", [1, 4, 9])
def test_coherent_state_variance(n):
    assert variance_oracle(coherent_state(n, 0.0), "x") == pytest.approx(n / 4)


@pytest.mark.parametrize("n", [2, 3, 10])
def test_no_squeezing_at_special_angles(n):
    assert squeezing_measure(n, 0.0) == 0.0
    assert squeezing_measure(1, 0.8) == 0.0
    if n > 2:
        assert squeezing_measure(n, math.pi / 2) == 0.0


def test_two_atoms_fully_squeezed_at_right_angle():
    # cos^(N-2) is 1 for N = 2, so the rotated polar cat is the exception
    psi = nonpolar_cat(2, math.pi / 2)
    assert variance_oracle(psi, "y") == pytest.approx(0.0, abs=1e-15)
    assert squeezing_measure(2, math.pi / 2) == 1.0


def test_two_atom_maximiser_matches_dense_scan():
    betas = np.linspace(0, math.pi / 2, 10**6)
    s = np.array([squeezing_measure(2, b) for b in betas])
    beta_m, s_max = max_squeezing(2)
    assert beta_m == pytest.approx(betas[np.argmax(s)], abs=1e-6)
    assert s_max == pytest.approx(s.max(), abs=1e-12)


@pytest.mark.parametrize("n", [1, 3, 6])
@pytest.mark.parametrize("beta_deg", [20, 55, 80])
def test_component_dipoles(n, beta_deg):
    """Each component of the cat has <Jx> = +-(N/2) sin(beta)."""
    beta = math.radians(beta_deg)
    for alpha, sign in ((0.0, 1), (math.pi, -1)):
        psi = coherent_state(n, beta, alpha).amplitudes
        jx = np.vdot(psi, spin_operators(n).jx @ psi).real
        assert jx == pytest.approx(sign * n / 2 * math.sin(beta), abs=1e-12)


def test_report_fields():
    rep = squeezing_report(5, 0.5)
    assert rep.var_jy == pytest.approx(5 / 4 * (1 - rep.s_measure))


def test_degenerate_cat():
    with pytest.raises(DomainError):
        variance_jx(3, math.pi)


@pytest.mark.parametrize("n, beta_deg, s_max", [(2, 90.0, 1.0), (5, 43.770218, 0.602487)])
def test_max_squeezing_frozen(n, beta_deg, s_max):
    beta_m, s = max_squeezing(n)
    assert math.degrees(beta_m) == pytest.approx(beta_deg, abs=1e-5)
    assert s == pytest.approx(s_max, abs=1e-6)


def test_max_is_a_maximum():
    beta_m, s = max_squeezing(40)
    grid = np.linspace(0.01, math.pi / 2, 2000)
    assert s >= max(squeezing_measure(40, b) for b in grid) - 1e-12


def test_single_atom_has_no_maximiser():
    with pytest.raises(NoSqueezingError):
        max_squeezing(1)


def test_oracle_axis_validation():
    with pytest.raises(DomainError):
        variance_oracle(coherent_state(2, 0.1), "w")
