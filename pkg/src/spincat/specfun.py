"""Special functions: log-factorials, Wigner 3j symbols, spherical harmonics.

Angular momenta may be half-integers. Internally they are carried as
doubled integers (:class:`HalfInt`) so that parity bookkeeping is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from spincat import kernels
from spincat.errors import DomainError

_EPS = np.finfo(float).eps
_LOG_FACT_MAX = 200
_LOG_FACT = tuple(math.log(math.factorial(n)) for n in range(_LOG_FACT_MAX + 1))


@dataclass(frozen=True, order=True)
class HalfInt:
    """A half-integer stored as ``twice`` = 2 * value."""

    twice: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, (bool, np.bool_)):
            raise DomainError(f"not a half-integer: {value!r}")
        if isinstance(value, (int, np.integer)):
            return cls(2 * int(value))
        if isinstance(value, Fraction):
            doubled = 2 * value
            if doubled.denominator != 1:
                raise DomainError(f"not a half-integer: {value}")
            return cls(int(doubled))
        doubled = 2.0 * float(value)
        if not math.isfinite(doubled) or doubled != round(doubled):
            raise DomainError(f"not a half-integer: {value!r}")
        return cls(int(round(doubled)))

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __float__(self):
        return self.twice / 2

    def __int__(self):
        if self.twice % 2:
            raise DomainError(f"{self} is not an integer")
        return self.twice // 2

    def __str__(self):
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"


def ln_factorial(n) -> float:
    """ln(n!) for a nonnegative integer ``n``."""
    if isinstance(n, (float, np.floating)):
        if n != int(n):
            raise DomainError(f"ln_factorial needs an integer, got {n!r}")
        n = int(n)
    if n < 0:
        raise DomainError(f"ln_factorial of negative number {n}")
    if n < 2:
        return 0.0
    if n <= _LOG_FACT_MAX:
        return _LOG_FACT[n]
    return math.lgamma(n + 1)


def _twice_args(j1, j2, j3, m1, m2, m3):
    tj = [HalfInt.of(v).twice for v in (j1, j2, j3)]
    tm = [HalfInt.of(v).twice for v in (m1, m2, m3)]
    for a, b in zip(tj, tm):
        if a < 0:
            raise DomainError("angular momentum must be nonnegative")
        if (a - b) % 2:
            raise DomainError("j and m must both be integers or both half-integers")
        if abs(b) > a:
            raise DomainError("|m| exceeds j")
    return tj, tm


def _racah_setup(tj, tm):
    """Integer parameters of the Racah sum, or None if the symbol vanishes."""
    tj1, tj2, tj3 = tj
    tm1, tm2, tm3 = tm
    if tm1 + tm2 + tm3 != 0:
        return None
    if (tj1 + tj2 + tj3) % 2:
        return None
    if tj3 > tj1 + tj2 or tj3 < abs(tj1 - tj2):
        return None
    h = lambda v: v // 2  # noqa: E731 -- all combinations below are even
    tri = (h(tj1 + tj2 - tj3), h(tj1 - tj2 + tj3), h(-tj1 + tj2 + tj3))
    big = h(tj1 + tj2 + tj3) + 1
    proj = (h(tj1 + tm1), h(tj1 - tm1), h(tj2 + tm2), h(tj2 - tm2), h(tj3 + tm3), h(tj3 - tm3))
    # denominator factorial arguments: k, c2 + k, c3 + k, c4 - k, c5 - k, c6 - k
    c2 = h(tj3 - tj2 + tm1)
    c3 = h(tj3 - tj1 - tm2)
    c4 = h(tj1 + tj2 - tj3)
    c5 = h(tj1 - tm1)
    c6 = h(tj2 + tm2)
    kmin = max(0, -c2, -c3)
    kmax = min(c4, c5, c6)
    if kmin > kmax:
        return None
    sign_exp = h(tj1 - tj2 - tm3)
    return tri, big, proj, (c2, c3, c4, c5, c6), kmin, kmax, sign_exp


def _term_ratio_parts(k, cs):
    c2, c3, c4, c5, c6 = cs
    num = (c4 - k) * (c5 - k) * (c6 - k)
    den = (k + 1) * (c2 + k + 1) * (c3 + k + 1)
    return num, den


def _wigner3j_float(setup):
    """Log-factorial evaluation; returns (value, estimated absolute error)."""
    tri, big, proj, cs, kmin, kmax, sign_exp = setup
    c2, c3, c4, c5, c6 = cs
    args = list(tri) + list(proj) + [big, kmin, c2 + kmin, c3 + kmin, c4 - kmin, c5 - kmin, c6 - kmin]
    if max(args) > _LOG_FACT_MAX:
        return None, math.inf
    log_pref = 0.5 * (sum(_LOG_FACT[a] for a in tri) + sum(_LOG_FACT[a] for a in proj) - _LOG_FACT[big])
    log_first = -(_LOG_FACT[kmin] + _LOG_FACT[c2 + kmin] + _LOG_FACT[c3 + kmin]
                  + _LOG_FACT[c4 - kmin] + _LOG_FACT[c5 - kmin] + _LOG_FACT[c6 - kmin])
    log_mag = sum(abs(_LOG_FACT[a]) for a in args)
    term = math.exp(log_pref + log_first)
    total = 0.0
    largest = 0.0
    sgn = -1.0 if kmin % 2 else 1.0
    for k in range(kmin, kmax + 1):
        total += sgn * term
        largest = max(largest, term)
        if k < kmax:
            num, den = _term_ratio_parts(k, cs)
            term *= num / den
            sgn = -sgn
    if sign_exp % 2:
        total = -total
    err = 4 * _EPS * largest * (kmax - kmin + 1 + log_mag)
    return total, err


def _wigner3j_bigint(setup):
    """Exact integer Racah sum, rounded once at the end."""
    tri, big, proj, cs, kmin, kmax, sign_exp = setup
    c2, c3, c4, c5, c6 = cs
    fact = math.factorial
    denom = (fact(kmax) * fact(c2 + kmax) * fact(c3 + kmax)
             * fact(c4 - kmin) * fact(c5 - kmin) * fact(c6 - kmin))
    first_den = (fact(kmin) * fact(c2 + kmin) * fact(c3 + kmin)
                 * fact(c4 - kmin) * fact(c5 - kmin) * fact(c6 - kmin))
    term = denom // first_den
    total = 0
    for k in range(kmin, kmax + 1):
        total += -term if k % 2 else term
        if k < kmax:
            num, den = _term_ratio_parts(k, cs)
            term = term * num // den
    if total == 0:
        return 0.0
    pref_num = math.prod(fact(a) for a in tri) * math.prod(fact(a) for a in proj)
    pref_den = fact(big)
    log_val = 0.5 * (math.log(pref_num) - math.log(pref_den)) + math.log(abs(total)) - math.log(denom)
    sign = -1.0 if (total < 0) ^ bool(sign_exp % 2) else 1.0
    return sign * math.exp(log_val)


def wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol (j1 j2 j3; m1 m2 m3).

    Arguments may be ints, half-integer floats, Fractions or HalfInt.
    Returns 0 when a selection rule fails. The floating Racah sum is used
    when its rounding estimate is below 1e-13; otherwise the sum is done
    in exact integer arithmetic.
    """
    tj, tm = _twice_args(j1, j2, j3, m1, m2, m3)
    setup = _racah_setup(tj, tm)
    if setup is None:
        return 0.0
    value, err = _wigner3j_float(setup)
    if err < 1e-13:
        return value
    return _wigner3j_bigint(setup)


def wigner3j_exact(j1, j2, j3, m1, m2, m3) -> tuple[int, Fraction]:
    """Exact 3j symbol as ``(sign, value**2)`` with rational ``value**2``.

    Direct transcription of the Racah formula in Fraction arithmetic;
    slow, intended as a reference.
    """
    tj, tm = _twice_args(j1, j2, j3, m1, m2, m3)
    setup = _racah_setup(tj, tm)
    if setup is None:
        return 0, Fraction(0)
    tri, big, proj, cs, kmin, kmax, sign_exp = setup
    c2, c3, c4, c5, c6 = cs
    f = math.factorial
    s = Fraction(0)
    for k in range(kmin, kmax + 1):
        d = f(k) * f(c2 + k) * f(c3 + k) * f(c4 - k) * f(c5 - k) * f(c6 - k)
        s += Fraction((-1) ** k, d)
    if s == 0:
        return 0, Fraction(0)
    pref = Fraction(math.prod(f(a) for a in tri) * math.prod(f(a) for a in proj), f(big))
    sign = (-1) ** sign_exp * (1 if s > 0 else -1)
    return sign, pref * s * s


def wigner3j_range(j2, j3, m2, m3):
    """All symbols (l j2 j3; -m2-m3 m2 m3) over the allowed range of l.

    Returns ``(lmin, values)`` with ``lmin`` a float and ``values[i]`` the
    symbol at l = lmin + i. Uses a two-sided three-term recursion, so the
    cost is linear in the number of l values.
    """
    hj2, hj3, hm2, hm3 = (HalfInt.of(v) for v in (j2, j3, m2, m3))
    for a, b in ((hj2, hm2), (hj3, hm3)):
        if a.twice < 0 or (a.twice - b.twice) % 2 or abs(b.twice) > a.twice:
            raise DomainError("invalid (j, m) pair in 3j range")
    hm1 = -(hm2 + hm3)
    tl_min = max(abs(hj2.twice - hj3.twice), abs(hm1.twice))
    tl_max = hj2.twice + hj3.twice
    if tl_min > tl_max:
        return tl_min / 2, np.zeros(0)
    lmin = HalfInt(tl_min)
    lmax = HalfInt(tl_max)
    ratio1 = 0.0
    if tl_min == 0:
        x0 = wigner3j(0, hj2, hj3, 0, hm2, hm3)
        x1 = wigner3j(1, hj2, hj3, 0, hm2, hm3) if tl_max >= 2 else 0.0
        ratio1 = x1 / x0
    vals = kernels.threej_recursion(float(hj2), float(hj3), float(hm2), float(hm3), ratio1)
    top = wigner3j(lmax, hj2, hj3, hm1, hm2, hm3)
    if top < 0:
        vals = -vals
    return float(lmin), np.asarray(vals)


def _check_harmonic(K, Q):
    if K < 0 or int(K) != K or int(Q) != Q:
        raise DomainError("spherical harmonic needs integer K >= 0 and integer Q")
    if abs(Q) > K:
        raise DomainError(f"|Q| = {abs(Q)} exceeds K = {K}")


def sph_legendre(K: int, Q: int, x):
    """Orthonormal P_KQ(x) such that Y_KQ(theta, phi) = P_KQ(cos theta) e^{iQphi}.

    Negative Q follows Y_{K,-Q} = (-1)^Q conj(Y_KQ).
    """
    _check_harmonic(K, Q)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    q = abs(int(Q))
    vals = kernels.legendre_table(q, int(K), x.ravel())[-1].reshape(x.shape)
    if Q < 0 and q % 2:
        vals = -vals
    return vals


def spherical_harmonic(K: int, Q: int, theta, phi):
    """Orthonormal Y_KQ(theta, phi) with the Condon-Shortley phase."""
    _check_harmonic(K, Q)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(theta < 0) or np.any(theta > np.pi):
        raise DomainError("theta must lie in [0, pi]")
    theta, phi = np.broadcast_arrays(theta, phi)
    vals = sph_legendre(K, Q, np.cos(theta).ravel()).reshape(theta.shape) * np.exp(1j * Q * phi)
    return vals[()] if vals.ndim == 0 else vals
