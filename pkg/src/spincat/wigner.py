"""Spherical Wigner functions of spin-j states.

The operator basis is the spherical tensor set T_KQ (K = 0..2j); a
density matrix maps to its characteristic matrix rho_KQ = Tr(rho T_KQ^+)
and then to

    W(theta, phi) = sqrt((2j+1)/4pi) sum_KQ rho_KQ Y_KQ(theta, phi).

Sphere integrals use a product rule: Gauss-Legendre in cos(theta) times
a uniform periodic rule in phi.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from spincat import kernels
from spincat.errors import (
    DimensionError,
    DomainError,
    GridMismatchError,
    PreconditionError,
    ResolutionError,
)
from spincat.specfun import ln_factorial, wigner3j, wigner3j_range
from spincat.states import DensityMatrix, _check_atoms

NU_ZERO_THRESHOLD = 1e-9
IMAG_RESIDUE_TOL = 1e-10


class ConvergenceWarning(UserWarning):
    """Oversampled quadrature did not settle within the requested tolerance."""


# ---------------------------------------------------------------------------
# tensor operators and characteristic matrices


@functools.lru_cache(maxsize=32)
def _tensor_table(n_atoms: int) -> np.ndarray:
    """table[Q + N, i, K] = sqrt(2K+1) (-1)^(j-m) (j K j; -m Q m-Q), m = i - j."""
    n = n_atoms
    j = n / 2
    table = np.zeros((2 * n + 1, n + 1, n + 1))
    root = np.sqrt(2 * np.arange(n + 1) + 1.0)
    for q in range(-n, n + 1):
        for i in range(n + 1):
            k = i - q
            if not 0 <= k <= n:
                continue
            m = i - j
            # cyclic permutation: (j K j; -m Q m-Q) = (K j j; Q m-Q -m)
            lmin, col = wigner3j_range(j, j, m - q, -m)
            lo = int(round(lmin))
            sign = -1.0 if (n - i) % 2 else 1.0  # (-1)^(j-m), j - m = N - i
            table[q + n, i, lo:lo + col.size] = sign * root[lo:lo + col.size] * col
    table.setflags(write=False)
    return table


def tensor_operator(n_atoms, K: int, Q: int) -> np.ndarray:
    """Matrix of T_KQ in the Dicke basis (row index m + j)."""
    n = _check_atoms(n_atoms)
    if not (0 <= K <= n) or abs(Q) > K:
        raise DomainError(f"need 0 <= K <= 2j = {n} and |Q| <= K, got K={K}, Q={Q}")
    table = _tensor_table(n)
    mat = np.zeros((n + 1, n + 1), dtype=complex)
    for i in range(n + 1):
        k = i - Q
        if 0 <= k <= n:
            mat[i, k] = table[Q + n, i, K]
    return mat


@dataclass(frozen=True, eq=False)
class CharacteristicMatrix:
    """Coefficients rho_KQ stored as coeffs[K, Q + N] (zero for |Q| > K)."""

    n_atoms: int
    coeffs: np.ndarray

    def __post_init__(self):
        n = self.n_atoms
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (n + 1, 2 * n + 1):
            raise DimensionError(f"expected coeffs of shape {(n + 1, 2 * n + 1)}, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def j(self) -> float:
        return self.n_atoms / 2

    def __getitem__(self, kq):
        K, Q = kq
        if not (0 <= K <= self.n_atoms) or abs(Q) > K:
            raise DomainError(f"no coefficient ({K}, {Q})")
        return self.coeffs[K, Q + self.n_atoms]


def _as_matrix(rho):
    if isinstance(rho, DensityMatrix):
        return rho.n_atoms, rho.elements
    a = np.asarray(rho, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise DimensionError(f"expected a square matrix of size N+1 >= 2, got shape {a.shape}")
    return a.shape[0] - 1, a


def characteristic_matrix(rho) -> CharacteristicMatrix:
    """rho_KQ = sqrt(2K+1) sum_m (-1)^(j-m) (j K j; -m Q m-Q) rho_{m, m-Q}.

    Accepts a :class:`DensityMatrix` or any (N+1)x(N+1) operator.
    """
    n, mat = _as_matrix(rho)
    table = _tensor_table(n)
    coeffs = np.zeros((n + 1, 2 * n + 1), dtype=complex)
    for q in range(-n, n + 1):
        # rho_{m, m-Q} for i = m + j running over valid rows
        lo, hi = max(0, q), min(n, n + q)
        rows = np.arange(lo, hi + 1)
        elems = mat[rows, rows - q]
        coeffs[:, q + n] = table[q + n, lo:hi + 1, :].T @ elems
    return CharacteristicMatrix(n, coeffs)


@functools.lru_cache(maxsize=32)
def _diag_table(n_atoms: int):
    """Q = 0 block and the two corner coefficients (Q = +-N)."""
    n = n_atoms
    table = _tensor_table(n) if n <= 60 else None
    if table is not None:
        m0 = table[n].T.copy()
        c_plus = table[2 * n, n, n]
        c_minus = table[0, 0, n]
    else:
        j = n / 2
        m0 = np.zeros((n + 1, n + 1))
        root = np.sqrt(2 * np.arange(n + 1) + 1.0)
        for i in range(n + 1):
            m = i - j
            _, col = wigner3j_range(j, j, m, -m)
            sign = -1.0 if (n - i) % 2 else 1.0
            m0[:, i] = sign * root * col
        c_plus = math.sqrt(2 * n + 1) * wigner3j(j, n, j, -j, n, -j)
        c_minus = (-1.0) ** n * math.sqrt(2 * n + 1) * wigner3j(j, n, j, j, -n, j)
    m0.setflags(write=False)
    return m0, float(c_plus), float(c_minus)


def polar_characteristic(n_atoms, diagonal, corner) -> CharacteristicMatrix:
    """Characteristic matrix of a state with only diagonal and corner entries.

    ``corner`` is rho_{-j,j}; this is the structure an evolving polar cat
    keeps for all times.
    """
    n = _check_atoms(n_atoms)
    diagonal = np.asarray(diagonal, dtype=float)
    if diagonal.shape != (n + 1,):
        raise DimensionError(f"expected {n + 1} diagonal entries")
    m0, c_plus, c_minus = _diag_table(n)
    coeffs = np.zeros((n + 1, 2 * n + 1), dtype=complex)
    coeffs[:, n] = m0 @ diagonal
    coeffs[n, 2 * n] += c_plus * np.conj(corner)  # rho_{j,-j}
    coeffs[n, 0] += c_minus * corner  # rho_{-j,j}
    return CharacteristicMatrix(n, coeffs)


# ---------------------------------------------------------------------------
# grids and fields


@dataclass(frozen=True, eq=False)
class SphereGrid:
    theta: np.ndarray
    phi: np.ndarray
    theta_weights: np.ndarray
    phi_weight: float

    @property
    def n_theta(self) -> int:
        return self.theta.size

    @property
    def n_phi(self) -> int:
        return self.phi.size

    @property
    def weights(self) -> np.ndarray:
        return np.outer(self.theta_weights, np.full(self.n_phi, self.phi_weight))

    def same_as(self, other: "SphereGrid") -> bool:
        return (
            self is other
            or (self.n_theta == other.n_theta and self.n_phi == other.n_phi
                and np.array_equal(self.theta, other.theta) and np.array_equal(self.phi, other.phi))
        )


def sphere_grid(n_theta: int, n_phi: int) -> SphereGrid:
    """Gauss-Legendre nodes in cos(theta) times n_phi uniform azimuths.

    Integrates Y_KQ conj(Y_K'Q') exactly for K + K' <= min(2 n_theta - 1, n_phi - 1).
    """
    if n_theta < 1 or n_phi < 1:
        raise DomainError("grid sizes must be positive")
    x, w = np.polynomial.legendre.leggauss(int(n_theta))
    # theta ascending: x descending
    x = x[::-1]
    w = w[::-1]
    theta = np.arccos(np.clip(x, -1.0, 1.0))
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    for arr in (theta, phi, w):
        arr.setflags(write=False)
    return SphereGrid(theta=theta, phi=phi, theta_weights=w, phi_weight=2 * np.pi / n_phi)


def default_grid(n_atoms, oversample: int = 1) -> SphereGrid:
    """Grid exact for products of two Wigner functions of N atoms."""
    n = _check_atoms(n_atoms)
    return sphere_grid((n + 1) * oversample, (2 * n + 1) * oversample)


@dataclass(frozen=True, eq=False)
class SphereField:
    grid: SphereGrid
    values: np.ndarray
    n_atoms: int | None = None

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    @property
    def real(self) -> "SphereField":
        return SphereField(self.grid, np.real(self.values).copy(), self.n_atoms)

    @property
    def imag(self) -> "SphereField":
        return SphereField(self.grid, np.imag(self.values).copy(), self.n_atoms)

    def integral(self):
        total = np.sum(self.grid.weights * self.values)
        return total if self.is_complex else float(total)


def _azimuthal_profiles(chi: CharacteristicMatrix, x):
    """f_Q(x) = sum_K rho_KQ P_KQ(x) for every Q; shape (2N+1, len(x))."""
    n = chi.n_atoms
    out = np.zeros((2 * n + 1, x.size), dtype=complex)
    c = chi.coeffs
    for q in range(0, n + 1):
        for sq in ((q,) if q == 0 else (q, -q)):
            col = c[q:, sq + n]
            if not np.any(col):
                continue
            sign = -1.0 if (sq < 0 and q % 2) else 1.0
            re = kernels.legendre_sum(np.ascontiguousarray(col.real), q, x)
            im = kernels.legendre_sum(np.ascontiguousarray(col.imag), q, x)
            out[sq + n] = sign * (re + 1j * im)
    return out


def _wigner_complex(chi: CharacteristicMatrix, theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta, phi = np.broadcast_arrays(theta, phi)
    n = chi.n_atoms
    flat_t = theta.ravel()
    prof = _azimuthal_profiles(chi, np.cos(flat_t))
    qs = np.arange(-n, n + 1)
    phase = np.exp(1j * np.outer(qs, phi.ravel()))
    vals = np.sum(prof * phase, axis=0) * math.sqrt((n + 1) / (4 * np.pi))
    return vals.reshape(theta.shape)


def wigner_at(chi: CharacteristicMatrix, theta, phi):
    """Evaluate the (real) Wigner function at arbitrary points."""
    vals = _wigner_complex(chi, theta, phi)
    scale = max(1.0, float(np.max(np.abs(vals)))) if vals.size else 1.0
    if vals.size and np.max(np.abs(vals.imag)) > IMAG_RESIDUE_TOL * scale:
        raise DomainError("Wigner function has an imaginary part; input is not Hermitian")
    out = vals.real
    return out[()] if out.ndim == 0 else out


def _grid_values(chi: CharacteristicMatrix, grid: SphereGrid):
    n = chi.n_atoms
    prof = _azimuthal_profiles(chi, np.cos(grid.theta))
    qs = np.arange(-n, n + 1)
    phase = np.exp(1j * np.outer(qs, grid.phi))
    return (prof.T @ phase) * math.sqrt((n + 1) / (4 * np.pi))


def _check_resolution(n, grid, degree_factor):
    # degree_factor 1: field itself; 2: product of two fields
    need_theta = math.ceil(degree_factor * n / 2 + 0.5)
    need_phi = degree_factor * n + 1
    if grid.n_theta < need_theta or grid.n_phi < need_phi:
        raise ResolutionError(
            f"grid {grid.n_theta}x{grid.n_phi} too coarse for N={n}; "
            f"need n_theta >= {need_theta}, n_phi >= {need_phi}"
        )


def wigner_field(chi: CharacteristicMatrix, grid: SphereGrid) -> SphereField:
    """Wigner function of a state sampled on ``grid``."""
    _check_resolution(chi.n_atoms, grid, 1)
    vals = _grid_values(chi, grid)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.max(np.abs(vals.imag)) > IMAG_RESIDUE_TOL * scale:
        raise DomainError("Wigner function has an imaginary part; input is not Hermitian")
    return SphereField(grid, vals.real.copy(), chi.n_atoms)


def operator_wigner(operator, grid: SphereGrid) -> SphereField:
    """Wigner symbol W_A of an operator, same map as for states.

    Hermitian operators give a real field. Otherwise the field values are
    complex; use ``.real`` and ``.imag`` for the two parts.
    """
    chi = characteristic_matrix(operator)
    _check_resolution(chi.n_atoms, grid, 1)
    vals = _grid_values(chi, grid)
    a = np.asarray(operator)
    if np.allclose(a, a.conj().T, atol=1e-12, rtol=0):
        return SphereField(grid, vals.real.copy(), chi.n_atoms)
    return SphereField(grid, vals, chi.n_atoms)


def product_rule_expectation(w_rho: SphereField, w_op: SphereField):
    """Tr(rho A) = 4 pi/(2j+1) * integral of W_rho W_A over the sphere.

    With W_A built by the same normalised map as W_rho, the prefactor is
    4 pi/(2j+1) (A = identity gives W_I = (2j+1)/4 pi).
    """
    if not w_rho.grid.same_as(w_op.grid):
        raise GridMismatchError("fields are sampled on different grids")
    n = w_rho.n_atoms if w_rho.n_atoms is not None else w_op.n_atoms
    if n is None:
        raise DomainError("number of atoms unknown for product rule")
    if w_op.n_atoms is not None and w_op.n_atoms != n:
        raise DimensionError("fields belong to different numbers of atoms")
    _check_resolution(n, w_rho.grid, 2)
    total = np.sum(w_rho.grid.weights * w_rho.values * w_op.values)
    value = 4 * np.pi / (n + 1) * total
    return complex(value) if np.iscomplexobj(value) else float(value)


# ---------------------------------------------------------------------------
# closed forms


def polar_cat_wigner(n_atoms, theta, phi):
    """Wigner function of (|j,j> + |j,-j>)/sqrt(2) in closed form."""
    n = _check_atoms(n_atoms)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta, phi = np.broadcast_arrays(theta, phi)
    x = np.cos(theta.ravel())
    ls = np.arange(n + 1)
    log_c = np.array([ln_factorial(n) - 0.5 * (ln_factorial(n - l) + ln_factorial(n + l + 1)) for l in ls])
    coef = np.sqrt(2 * ls + 1.0) * np.exp(log_c)
    # Y_l0(pi - theta) = (-1)^l Y_l0(theta)
    lobes = kernels.legendre_sum(coef * (1 + (-1.0) ** ls), 0, x)
    log_amp = 0.5 * (ln_factorial(2 * n + 1) - math.log(4 * np.pi)) - n * math.log(2) - ln_factorial(n)
    sin_t = np.sin(theta.ravel())
    with np.errstate(divide="ignore"):
        interf = 2 * np.exp(log_amp + n * np.log(sin_t)) * np.cos(n * phi.ravel())
    vals = 0.5 * math.sqrt((n + 1) / (4 * np.pi)) * (lobes + interf)
    vals = vals.reshape(theta.shape)
    return vals[()] if vals.ndim == 0 else vals


@functools.lru_cache(maxsize=64)
def _nonpolar_coefficients(n: int, beta: float) -> np.ndarray:
    """C[K, Q + N] multiplying Y_KQ in the closed-form nonpolar-cat Wigner function."""
    tj = n  # 2j
    j = n / 2
    s = math.sin(beta / 2)
    c = math.cos(beta / 2)
    norm = 2 * (1 + math.cos(beta) ** tj)
    coeffs = np.zeros((n + 1, 2 * n + 1))
    lf = ln_factorial
    for K in range(n + 1):
        for Q in range(-K, K + 1):
            total = 0.0
            for i in range(n + 1):  # i = j + m
                ip = i + Q  # j + m + Q
                if not 0 <= ip <= n:
                    continue
                # exponents of -1 as integers: j-Q-m, 3j+m, 2j, 2j-Q
                sgn = ((-1) ** ((n - i) - Q) + (-1) ** (n + i) + (-1) ** n + (-1) ** (n - Q))
                if sgn == 0:
                    continue
                w3 = wigner3j(j, K, j, -(i - j) - Q, Q, i - j)
                if w3 == 0.0:
                    continue
                log_den = 0.5 * (lf(i) + lf(n - i) + lf(ip) + lf(n - ip))
                p_s = 2 * i + Q
                p_c = 2 * (n - i) - Q
                pw = (s ** p_s if p_s else 1.0) * (c ** p_c if p_c else 1.0)
                total += sgn * math.exp(lf(tj) - log_den) * w3 * pw
            coeffs[K, Q + n] = math.sqrt(2 * K + 1) * total / norm
    coeffs.setflags(write=False)
    return coeffs


def nonpolar_cat_wigner(n_atoms, beta, theta, phi):
    """Closed-form Wigner function of ``nonpolar_cat(N, beta)``."""
    n = _check_atoms(n_atoms)
    if not 0.0 <= beta <= math.pi:
        raise DomainError(f"beta must lie in [0, pi], got {beta}")
    if 1 + math.cos(beta) ** n <= 1e-14:
        raise DomainError("the two coherent components cancel at this beta")
    chi = CharacteristicMatrix(n, _nonpolar_coefficients(n, float(beta)).astype(complex))
    return wigner_at(chi, theta, phi)


# ---------------------------------------------------------------------------
# non-classicality


def nonclassicality(field: SphereField) -> float:
    """nu = 2 I_- / (2 I_- + 1), I_- the integrated negative part of W.

    Returns exactly 0 when min W > -1e-9 max|W| on the grid.
    """
    w = np.asarray(field.values)
    if np.iscomplexobj(w):
        raise DomainError("non-classicality needs a real field")
    if w.min() > -NU_ZERO_THRESHOLD * np.abs(w).max():
        return 0.0
    i_minus = float(np.sum(field.grid.weights * np.maximum(-w, 0.0)))
    return 2 * i_minus / (2 * i_minus + 1)


def nonclassicality_of(chi: CharacteristicMatrix, oversample: int = 4, tol: float = 1e-6,
                       max_points: int = 4_000_000) -> float:
    """nu on an oversampled default grid, doubled until two levels agree to ``tol``.

    The integrand has a kink where W changes sign, so quadrature converges
    only algebraically; a :class:`ConvergenceWarning` is issued if the
    point budget runs out first.
    """
    n = chi.n_atoms
    level = max(1, int(oversample))
    nu = nonclassicality(wigner_field(chi, default_grid(n, level)))
    delta = math.inf
    while True:
        nxt = 2 * level
        if (n + 1) * (2 * n + 1) * nxt * nxt > max_points:
            break
        nu_next = nonclassicality(wigner_field(chi, default_grid(n, nxt)))
        delta = abs(nu_next - nu)
        nu, level = nu_next, nxt
        if delta < tol:
            return nu
    warnings.warn(
        f"nu not converged for N={n}: last change {delta:.2e} at oversample {level}",
        ConvergenceWarning,
        stacklevel=2,
    )
    return nu


# ---------------------------------------------------------------------------
# phi = pi/N section of polar-cat-like fields


def _check_polar_sparsity(chi: CharacteristicMatrix):
    n = chi.n_atoms
    mask = np.zeros(chi.coeffs.shape, dtype=bool)
    mask[:, n] = True
    mask[n, 0] = mask[n, 2 * n] = True
    rest = np.abs(chi.coeffs[~mask])
    scale = max(float(np.max(np.abs(chi.coeffs))), 1e-300)
    if rest.size and rest.max() > 1e-12 * scale:
        raise PreconditionError(
            "characteristic matrix has entries outside (K,0) and (N,+-N); use the full-field minimum"
        )


def _section_values(chi: CharacteristicMatrix, theta, phi0):
    n = chi.n_atoms
    x = np.cos(np.atleast_1d(np.asarray(theta, dtype=float)))
    base = kernels.legendre_sum(np.ascontiguousarray(chi.coeffs[:, n].real), 0, x)
    pnn = kernels.legendre_sum(np.array([1.0]), n, x)
    c_p = chi.coeffs[n, 2 * n]
    c_m = chi.coeffs[n, 0]
    sign_m = -1.0 if n % 2 else 1.0
    mod = (c_p * np.exp(1j * n * phi0) + c_m * sign_m * np.exp(-1j * n * phi0)).real
    return math.sqrt((n + 1) / (4 * np.pi)) * (base + mod * pnn)


def section_extrema(chi: CharacteristicMatrix, n_samples: int | None = None):
    """Return (min over theta of W(theta, pi/N), max |W| over the sphere).

    Only valid for characteristic matrices with polar-cat sparsity, where
    W = A(theta) + B(theta) cos(N phi + const) and extremes sit on the
    phi = 0 and phi = pi/N sections.
    """
    _check_polar_sparsity(chi)
    n = chi.n_atoms
    count = n_samples or max(32 * n, 256)
    theta = np.linspace(0.0, np.pi, count + 1)
    phi_min = np.pi / n
    w = _section_values(chi, theta, phi_min)
    w0 = _section_values(chi, theta, 0.0)
    max_abs = float(max(np.abs(w).max(), np.abs(w0).max()))
    i = int(np.argmin(w))
    best = float(w[i])
    if 0 < i < count:
        res = minimize_scalar(
            lambda t: float(_section_values(chi, t, phi_min)[0]),
            bracket=(theta[i - 1], theta[i], theta[i + 1]),
            method="golden",
            tol=1e-12,
        )
        best = min(best, float(res.fun))
    return best, max_abs


def min_section(chi: CharacteristicMatrix, n_atoms=None) -> float:
    """Minimum over theta of W(theta, phi = pi/N) for polar-cat-like states."""
    if n_atoms is not None and n_atoms != chi.n_atoms:
        raise DimensionError("n_atoms does not match the characteristic matrix")
    return section_extrema(chi)[0]


def _polar_profiles(chi: CharacteristicMatrix, x):
    """a(x), b(x) >= 0 with W = a + b cos(N phi + c) on a polar-sparse field."""
    n = chi.n_atoms
    x = np.atleast_1d(np.asarray(x, dtype=float))
    pref = math.sqrt((n + 1) / (4 * np.pi))
    a = pref * kernels.legendre_sum(np.ascontiguousarray(chi.coeffs[:, n].real), 0, x)
    sign_m = -1.0 if n % 2 else 1.0
    amp = abs(chi.coeffs[n, 2 * n] + sign_m * np.conj(chi.coeffs[n, 0]))
    b = pref * amp * np.abs(kernels.legendre_sum(np.array([1.0]), n, x))
    return a, b


def polar_nonclassicality(chi: CharacteristicMatrix, n_samples: int | None = None) -> float:
    """nu for a field with polar-cat sparsity, with the phi integral done exactly.

    The negative part of a + b cos(psi) over one period has a closed form,
    leaving a single adaptive quadrature in cos(theta). The threshold rule
    (min W > -1e-9 max|W| gives exactly 0) uses the true minimum a - b.
    """
    _check_polar_sparsity(chi)
    n = chi.n_atoms
    count = n_samples or max(32 * n, 256)
    x = np.cos(np.linspace(0.0, np.pi, count + 1))
    a, b = _polar_profiles(chi, x)
    lower = a - b
    i = int(np.argmin(lower))
    w_min = float(lower[i])
    if 0 < i < count:
        res = minimize_scalar(
            lambda u: float(np.subtract(*_polar_profiles(chi, u))[0]),
            bounds=(x[i + 1], x[i - 1]),
            method="bounded",
            options={"xatol": 1e-12},
        )
        w_min = min(w_min, float(res.fun))
    w_max = float(np.max(np.abs(a) + b))
    if w_min > -NU_ZERO_THRESHOLD * w_max:
        return 0.0

    def negative_part(u):
        av, bv = (float(v[0]) for v in _polar_profiles(chi, u))
        if av >= bv:
            return 0.0
        if av <= -bv:
            return -2 * np.pi * av
        psi0 = math.acos(-av / bv)
        return -2 * av * (np.pi - psi0) + 2 * bv * math.sin(psi0)

    # sign changes of a -/+ b are kinks; hand the sampled ones to quad
    kinks = []
    for f in (a - b, a + b):
        idx = np.nonzero(np.diff(np.sign(f)))[0]
        kinks.extend(0.5 * (x[idx] + x[idx + 1]))
    i_minus, _ = quad(negative_part, -1.0, 1.0, points=sorted(set(kinks))[:100] or None,
                      limit=500, epsabs=1e-13, epsrel=1e-11)
    return 2 * i_minus / (2 * i_minus + 1)
