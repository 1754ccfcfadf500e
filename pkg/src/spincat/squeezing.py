"""Dipole variances and squeezing of nonpolar cat states.

For the cat of the coherent states at (beta, 0) and (beta, pi),

    (dJx)^2 = (j/2) (1 + (2j-1) sin^2 b / (1 + cos^{2j} b))
    (dJy)^2 = (j/2) (1 - (2j-1) cos^{2j-2} b sin^2 b / (1 + cos^{2j} b))

and S is defined through (dJy)^2 = j (1 - S) / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from spincat.errors import DomainError, NoSqueezingError
from spincat.states import PureState, _check_atoms, spin_operators


@dataclass(frozen=True)
class SqueezingReport:
    n_atoms: int
    beta: float
    var_jx: float
    var_jy: float
    s_measure: float


def _cos(beta):
    # exact zero at beta = pi/2, where math.cos leaves 6e-17
    return math.sin(math.pi / 2 - beta)


def _cat_norm(n, beta):
    d = 1.0 + _cos(beta) ** n
    if d <= 1e-14:
        raise DomainError(f"cat state is degenerate at beta = {beta} for N = {n}")
    return d


def variance_jx(n_atoms, beta) -> float:
    n = _check_atoms(n_atoms)
    j = n / 2
    if n == 1:
        return j / 2
    return j / 2 * (1 + (n - 1) * math.sin(beta) ** 2 / _cat_norm(n, beta))


def variance_jy(n_atoms, beta) -> float:
    n = _check_atoms(n_atoms)
    j = n / 2
    if n == 1:
        # (2j - 1) = 0 kills the term before cos^{-1} can blow up
        return j / 2
    return j / 2 * (1 - (n - 1) * _cos(beta) ** (n - 2) * math.sin(beta) ** 2 / _cat_norm(n, beta))


def squeezing_measure(n_atoms, beta) -> float:
    n = _check_atoms(n_atoms)
    if n == 1:
        return 0.0
    return (n - 1) * _cos(beta) ** (n - 2) * math.sin(beta) ** 2 / _cat_norm(n, beta)


def squeezing_report(n_atoms, beta) -> SqueezingReport:
    n = _check_atoms(n_atoms)
    return SqueezingReport(n, float(beta), variance_jx(n, beta), variance_jy(n, beta),
                           squeezing_measure(n, beta))


def max_squeezing(n_atoms, n_scan: int = 1000, xtol: float = 1e-8):
    """Maximiser of S over beta in (0, pi/2): coarse scan plus golden section.

    Returns ``(beta_m, s_max)``.
    """
    n = _check_atoms(n_atoms)
    if n == 1:
        raise NoSqueezingError("a single atom is never squeezed (S = 0 for every beta)")
    betas = np.linspace(0.0, math.pi / 2, n_scan + 2)[1:-1]
    vals = np.array([squeezing_measure(n, b) for b in betas])
    i = int(np.argmax(vals))
    neg_s = lambda b: -squeezing_measure(n, b)  # noqa: E731
    if 0 < i < betas.size - 1:
        res = minimize_scalar(neg_s, bracket=(betas[i - 1], betas[i], betas[i + 1]),
                              method="golden", tol=xtol / betas[i])
    else:
        # maximum against an end of the interval (N = 2 peaks at pi/2)
        lo = 0.0 if i == 0 else betas[i - 1]
        hi = math.pi / 2 if i > 0 else betas[1]
        res = minimize_scalar(neg_s, bounds=(lo, hi), method="bounded", options={"xatol": xtol * 1e-2})
    beta_m = float(res.x)
    s_max = squeezing_measure(n, beta_m)
    if s_max < vals[i]:
        beta_m, s_max = float(betas[i]), float(vals[i])
    edge = squeezing_measure(n, math.pi / 2)
    if edge >= s_max:
        beta_m, s_max = math.pi / 2, edge
    return beta_m, s_max


def variance_oracle(state: PureState, axis: str) -> float:
    """<J_a^2> - <J_a>^2 by direct matrix algebra."""
    ops = spin_operators(state.n_atoms)
    try:
        op = {"x": ops.jx, "y": ops.jy, "z": ops.jz}[axis]
    except KeyError:
        raise DomainError(f"axis must be 'x', 'y' or 'z', got {axis!r}") from None
    psi = state.amplitudes
    v = op @ psi
    mean = np.vdot(psi, v).real
    second = np.vdot(v, v).real
    return float(second - mean * mean)
