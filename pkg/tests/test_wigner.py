import math

import numpy as np
import pytest

from conftest import random_density, random_pure_state
from spincat.errors import (
    DimensionError,
    DomainError,
    GridMismatchError,
    PreconditionError,
    ResolutionError,
)
from spincat.states import coherent_state, density_of, maximally_mixed, polar_cat, spin_operators
from spincat.wigner import (
    ConvergenceWarning,
    CharacteristicMatrix,
    characteristic_matrix,
    default_grid,
    min_section,
    nonclassicality,
    nonclassicality_of,
    nonpolar_cat_wigner,
    operator_wigner,
    polar_cat_wigner,
    polar_characteristic,
    polar_nonclassicality,
    product_rule_expectation,
    section_extrema,
    sphere_grid,
    tensor_operator,
    wigner_at,
    wigner_field,
)


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_tensor_operators_orthonormal(n):
    ops = [tensor_operator(n, K, Q) for K in range(n + 1) for Q in range(-K, K + 1)]
    gram = np.array([[np.trace(a.conj().T @ b) for b in ops] for a in ops])
    assert np.allclose(gram, np.eye(len(ops)), atol=1e-13)


@pytest.mark.parametrize("n", [1, 4])
def test_characteristic_matrix_reconstructs(n, rng):
    rho = random_density(n, rng)
    chi = characteristic_matrix(rho)
    rebuilt = sum(chi[K, Q] * tensor_operator(n, K, Q) for K in range(n + 1) for Q in range(-K, K + 1))
    assert np.allclose(rebuilt, rho.elements, atol=1e-13)


def test_t00_coefficient_is_trace():
    n = 5
    chi = characteristic_matrix(maximally_mixed(n))
    assert chi[0, 0] == pytest.approx(1 / math.sqrt(n + 1))
    assert np.allclose(chi.coeffs[1:], 0.0, atol=1e-15)


def test_maximally_mixed_field_is_flat():
    chi = characteristic_matrix(maximally_mixed(4))
    fld = wigner_field(chi, default_grid(4))
    assert np.allclose(fld.values, 1 / (4 * np.pi), atol=1e-15)


@pytest.mark.parametrize("n", [1, 3, 8])
def test_coherent_state_peaks_at_its_direction(n):
    beta, alpha = 1.1, 0.6
    chi = characteristic_matrix(density_of(coherent_state(n, beta, alpha)))
    at_state = wigner_at(chi, math.pi - beta, alpha)  # theta from the north pole
    grid = default_grid(n, 4)
    assert at_state >= wigner_field(chi, grid).values.max() - 1e-12


@pytest.mark.parametrize("n", [1, 2, 5])
def test_rotation_covariance_about_z(n, rng):
    psi = random_pure_state(n, rng)
    shift = 0.7
    m = np.arange(n + 1) - n / 2
    rotated = psi.amplitudes * np.exp(-1j * m * shift)
    chi_a = characteristic_matrix(density_of(psi))
    chi_b = characteristic_matrix(np.outer(rotated, rotated.conj()))
    theta = np.array([0.3, 1.4, 2.6])
    phi = np.array([0.2, -1.0, 2.5])
    assert np.allclose(wigner_at(chi_b, theta, phi + shift), wigner_at(chi_a, theta, phi), atol=1e-13)


def test_grid_exactness():
    grid = sphere_grid(6, 11)
    assert np.sum(grid.weights) == pytest.approx(4 * np.pi, abs=1e-13)
    assert np.sum(grid.weights * np.cos(grid.theta)[:, None] ** 10) == pytest.approx(4 * np.pi / 11)


def test_resolution_guard():
    chi = characteristic_matrix(density_of(polar_cat(6)))
    with pytest.raises(ResolutionError):
        wigner_field(chi, sphere_grid(3, 13))


def test_product_rule_needs_double_resolution():
    n = 4
    grid = sphere_grid(3, 5)
    w = wigner_field(characteristic_matrix(density_of(polar_cat(n))), grid)
    with pytest.raises(ResolutionError):
        product_rule_expectation(w, w)


def test_product_rule_grid_mismatch():
    n = 2
    rho = density_of(polar_cat(n))
    w1 = wigner_field(characteristic_matrix(rho), default_grid(n))
    w2 = operator_wigner(spin_operators(n).jz, default_grid(n, 2))
    with pytest.raises(GridMismatchError):
        product_rule_expectation(w1, w2)


def test_product_rule_non_hermitian(rng):
    n = 3
    rho = random_density(n, rng)
    grid = default_grid(n)
    jp = spin_operators(n).jplus
    w_op = operator_wigner(jp, grid)
    assert w_op.is_complex
    value = product_rule_expectation(wigner_field(characteristic_matrix(rho), grid), w_op)
    assert value == pytest.approx(np.trace(rho.elements @ jp), abs=1e-12)


def test_identity_symbol_constant():
    n = 3
    w = operator_wigner(np.eye(n + 1), default_grid(n))
    assert np.allclose(w.values, (n + 1) / (4 * np.pi))


def test_non_hermitian_density_input_rejected():
    n = 2
    a = np.zeros((3, 3), dtype=complex)
    a[0, 1] = 1.0
    with pytest.raises(DomainError):
        wigner_field(characteristic_matrix(a), default_grid(n))


def test_characteristic_shape_check():
    with pytest.raises(DimensionError):
        CharacteristicMatrix(2, np.zeros((2, 5)))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 20])
def test_polar_closed_form(n):
    chi = characteristic_matrix(density_of(polar_cat(n)))
    theta = np.linspace(0, np.pi, 13)[:, None]
    phi = np.linspace(0, 2 * np.pi, 17)[None, :]
    assert np.allclose(polar_cat_wigner(n, theta, phi), wigner_at(chi, theta, phi), atol=1e-12)


def test_polar_cat_has_n_negative_wings():
    n = 5
    phi = np.linspace(0, 2 * np.pi, 720, endpoint=False)
    w = polar_cat_wigner(n, math.pi / 2, phi)
    negative = w < 0
    runs = np.count_nonzero(negative & ~np.roll(negative, 1))
    assert runs == n


@pytest.mark.parametrize("n", [1, 3, 6])
def test_polar_characteristic_matches_full(n):
    rho = density_of(polar_cat(n))
    chi_full = characteristic_matrix(rho)
    chi_fast = polar_characteristic(n, rho.diagonal(), rho.elements[0, n])
    assert np.allclose(chi_full.coeffs, chi_fast.coeffs, atol=1e-14)


def test_polar_sparsity_precondition(rng):
    chi = characteristic_matrix(random_density(3, rng))
    with pytest.raises(PreconditionError):
        section_extrema(chi)


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_minimum_on_section(n):
    chi = characteristic_matrix(density_of(polar_cat(n)))
    w_min, w_max = section_extrema(chi)
    fld = wigner_field(chi, default_grid(n, 8))
    assert w_min <= fld.values.min() + 1e-12
    assert w_max >= np.abs(fld.values).max() - 1e-12
    theta = np.linspace(0, np.pi, 4001)[:, None]
    phi = np.linspace(0, 2 * np.pi, 8 * n, endpoint=False)[None, :]
    dense = wigner_at(chi, theta, phi)
    assert w_min == pytest.approx(dense.min(), abs=1e-6)
    assert w_max == pytest.approx(np.abs(dense).max(), abs=1e-6)
    assert min_section(chi, n) == w_min


def test_nu_zero_for_mixed_state():
    chi = characteristic_matrix(maximally_mixed(3))
    assert nonclassicality(wigner_field(chi, default_grid(3, 4))) == 0.0


def test_spin_half_coherent_state_is_negative_somewhere():
    chi = characteristic_matrix(density_of(coherent_state(1, 0.3)))
    assert nonclassicality(wigner_field(chi, default_grid(1, 4))) > 0.0


@pytest.mark.parametrize("n", [1, 2, 4])
def test_polar_nonclassicality_matches_grid(n):
    chi = characteristic_matrix(density_of(polar_cat(n)))
    assert polar_nonclassicality(chi) == pytest.approx(nonclassicality_of(chi), abs=1e-6)


def test_polar_nonclassicality_single_atom_closed_form():
    # W = (1 + sqrt(3) sin(theta) cos(phi)) / 4pi for N = 1
    chi = characteristic_matrix(density_of(polar_cat(1)))
    assert polar_nonclassicality(chi) == pytest.approx(1 - math.sqrt(3) / 2, abs=1e-10)


def test_nonclassicality_warns_when_budget_runs_out():
    chi = characteristic_matrix(density_of(polar_cat(6)))
    with pytest.warns(ConvergenceWarning):
        nonclassicality_of(chi, oversample=1, tol=1e-15, max_points=20_000)


@pytest.mark.parametrize("n", [2, 5, 8])
@pytest.mark.parametrize("beta_deg", [20, 55, 90, 130])
def test_nonpolar_closed_form(n, beta_deg):
    from spincat.states import nonpolar_cat

    beta = math.radians(beta_deg)
    chi = characteristic_matrix(density_of(nonpolar_cat(n, beta)))
    theta = np.linspace(0, np.pi, 11)[:, None]
    phi = np.linspace(0, 2 * np.pi, 9)[None, :]
    assert np.allclose(nonpolar_cat_wigner(n, beta, theta, phi), wigner_at(chi, theta, phi), atol=1e-12)


def test_nonpolar_closed_form_degenerate():
    with pytest.raises(DomainError):
        nonpolar_cat_wigner(3, math.pi, 0.1, 0.2)
