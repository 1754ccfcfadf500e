"""Dicke-space states and collective spin operators for N two-level atoms.

Basis ordering: index i = m + j, so entry 0 is |j,-j> (all atoms down)
and entry N is |j,j>.

Coherent states are parametrised by (beta, alpha) with beta measured from
the SOUTH pole: beta = 0 is |j,-j>, beta = pi is |j,j>. The Bloch vector
of ``coherent_state(N, beta, alpha)`` is
``(sin beta cos alpha, sin beta sin alpha, -cos beta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from spincat.errors import DegenerateSuperpositionError, DimensionError, DomainError
from spincat.specfun import ln_factorial

DEGENERACY_THRESHOLD = 1e-14


def _check_atoms(n_atoms):
    if int(n_atoms) != n_atoms or n_atoms < 1:
        raise DomainError(f"number of atoms must be a positive integer, got {n_atoms!r}")
    return int(n_atoms)


@dataclass(frozen=True, eq=False)
class PureState:
    n_atoms: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.n_atoms + 1,):
            raise DimensionError(f"expected {self.n_atoms + 1} amplitudes, got shape {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > 1e-10:
            raise DomainError(f"state is not normalised (norm^2 = {norm})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def j(self) -> float:
        return self.n_atoms / 2

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(self.n_atoms + 1) - self.j


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    n_atoms: int
    elements: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.elements, dtype=complex)
        dim = self.n_atoms + 1
        if rho.shape != (dim, dim):
            raise DimensionError(f"expected a {dim}x{dim} matrix, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise DomainError(f"density matrix trace is {np.trace(rho).real}, not 1")
        rho.setflags(write=False)
        object.__setattr__(self, "elements", rho)

    @property
    def j(self) -> float:
        return self.n_atoms / 2

    def diagonal(self) -> np.ndarray:
        return self.elements.diagonal().real.copy()


@dataclass(frozen=True, eq=False)
class SpinOperators:
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray


def spin_operators(n_atoms) -> SpinOperators:
    """Collective angular-momentum matrices in the Dicke basis."""
    n = _check_atoms(n_atoms)
    j = n / 2
    m = np.arange(n + 1) - j
    # <m+1|J+|m> = sqrt(j(j+1) - m(m+1))
    up = np.sqrt(np.maximum(j * (j + 1) - m[:-1] * (m[:-1] + 1), 0.0))
    jplus = np.diag(up, -1).astype(complex)
    jminus = jplus.conj().T.copy()
    jx = (jplus + jminus) / 2
    jy = (jplus - jminus) / 2j
    jz = np.diag(m).astype(complex)
    for mat in (jx, jy, jz, jplus, jminus):
        mat.setflags(write=False)
    return SpinOperators(jx=jx, jy=jy, jz=jz, jplus=jplus, jminus=jminus)


def _coherent_amplitudes(n, beta, alpha):
    if not 0.0 <= beta <= math.pi:
        raise DomainError(f"beta must lie in [0, pi], got {beta}")
    k = np.arange(n + 1)  # k = j + m
    s = math.sin(beta / 2)
    c = math.cos(beta / 2)
    log_binom = np.array([ln_factorial(n) - ln_factorial(i) - ln_factorial(n - i) for i in k])
    with np.errstate(divide="ignore", invalid="ignore"):
        log_mag = 0.5 * log_binom + k * np.log(s) + (n - k) * np.log(c)
    mag = np.exp(log_mag)
    # 0 ** 0 = 1 at the poles
    if s == 0.0:
        mag = np.zeros(n + 1)
        mag[0] = 1.0
    elif c == 0.0:
        mag = np.zeros(n + 1)
        mag[n] = 1.0
    return mag * np.exp(-1j * k * alpha)


def coherent_state(n_atoms, beta, alpha=0.0) -> PureState:
    """Atomic coherent state; beta from the south pole, alpha the azimuth."""
    n = _check_atoms(n_atoms)
    amps = _coherent_amplitudes(n, float(beta), float(alpha))
    amps /= np.linalg.norm(amps)
    return PureState(n, amps)


def coherent_overlap(n_atoms, beta1, alpha1, beta2, alpha2) -> complex:
    """<beta1, alpha1 | beta2, alpha2> from the single-atom overlap."""
    n = _check_atoms(n_atoms)
    for b in (beta1, beta2):
        if not 0.0 <= b <= math.pi:
            raise DomainError(f"beta must lie in [0, pi], got {b}")
    c1, s1 = math.cos(beta1 / 2), math.sin(beta1 / 2)
    c2, s2 = math.cos(beta2 / 2), math.sin(beta2 / 2)
    single = c1 * c2 + s1 * s2 * complex(math.cos(alpha1 - alpha2), math.sin(alpha1 - alpha2))
    return single**n


def general_cat(n_atoms, beta1, alpha1, beta2, alpha2) -> PureState:
    """Normalised equal-weight superposition of two coherent states."""
    n = _check_atoms(n_atoms)
    a = _coherent_amplitudes(n, float(beta1), float(alpha1))
    b = _coherent_amplitudes(n, float(beta2), float(alpha2))
    norm2 = 2.0 * (1.0 + coherent_overlap(n, beta1, alpha1, beta2, alpha2).real)
    if norm2 <= DEGENERACY_THRESHOLD:
        raise DegenerateSuperpositionError(
            f"superposition norm^2 = {norm2:.3e} is below {DEGENERACY_THRESHOLD:g}"
        )
    amps = (a + b) / math.sqrt(norm2)
    amps /= np.linalg.norm(amps)
    return PureState(n, amps)


def nonpolar_cat(n_atoms, beta) -> PureState:
    """Cat of the coherent states at (beta, 0) and (beta, pi)."""
    return general_cat(n_atoms, beta, 0.0, beta, math.pi)


def polar_cat(n_atoms) -> PureState:
    """(|j,j> + |j,-j>)/sqrt(2)."""
    n = _check_atoms(n_atoms)
    amps = np.zeros(n + 1, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return PureState(n, amps)


def density_of(state: PureState) -> DensityMatrix:
    psi = state.amplitudes
    return DensityMatrix(state.n_atoms, np.outer(psi, psi.conj()))


def maximally_mixed(n_atoms) -> DensityMatrix:
    n = _check_atoms(n_atoms)
    return DensityMatrix(n, np.eye(n + 1) / (n + 1))


def expectation(operator, rho: DensityMatrix) -> complex:
    """Tr(rho A)."""
    op = np.asarray(operator)
    if op.shape != rho.elements.shape:
        raise DimensionError(f"operator shape {op.shape} does not match {rho.elements.shape}")
    return complex(np.trace(rho.elements @ op))
