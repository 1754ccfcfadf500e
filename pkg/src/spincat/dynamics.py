"""Dissipative dynamics of N two-level atoms in a thermal bath.

Time is measured in units of 1/gamma and energies in units of hbar*omega_a.
The master equation couples rho_{m,l} only to rho_{m-1,l-1} and
rho_{m+1,l+1}, so each diagonal d = m - l is an independent tridiagonal
linear system. That is what the integrator kernel works on.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import eigvalsh_tridiagonal
from scipy.optimize import brentq
from scipy.signal import lfilter

from spincat import kernels
from spincat.errors import (
    DimensionError,
    DomainError,
    InsufficientHorizonError,
    NumericalError,
    PreconditionError,
    StiffnessError,
)
from spincat.states import DensityMatrix, _check_atoms
from spincat.wigner import (
    NU_ZERO_THRESHOLD,
    characteristic_matrix,
    nonclassicality_of,
    polar_characteristic,
    polar_nonclassicality,
    section_extrema,
)

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
MAX_STEPS = 50_000_000


@dataclass(frozen=True)
class BathParams:
    nbar: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        if not (self.nbar >= 0.0 and math.isfinite(self.nbar)):
            raise DomainError(f"nbar must be finite and >= 0, got {self.nbar}")
        if self.gamma != 1.0:
            raise DomainError("gamma is the time unit and is fixed at 1")


def _bath(bath) -> BathParams:
    return bath if isinstance(bath, BathParams) else BathParams(float(bath))


@functools.lru_cache(maxsize=256)
def _coefficients(n: int, nbar: float, d: int):
    j = n / 2
    big_j = j * (j + 1)
    i = np.arange(n + 1 - d)
    m = i - j
    l = i + d - j
    own = -0.5 * (nbar * (2 * big_j - m * (m + 1) - l * (l + 1))
                  + (nbar + 1) * (2 * big_j - m * (m - 1) - l * (l - 1)))
    pump = nbar * np.sqrt(np.maximum(big_j - m * (m - 1), 0.0) * np.maximum(big_j - l * (l - 1), 0.0))
    decay = (nbar + 1) * np.sqrt(np.maximum(big_j - m * (m + 1), 0.0)
                                 * np.maximum(big_j - l * (l + 1), 0.0))
    for arr in (own, pump, decay):
        arr.setflags(write=False)
    return own, pump, decay


def diagonal_coefficients(n_atoms, bath, d: int):
    """Tridiagonal system for the entries rho[i, i+d], i = 0..N-d.

    Returns ``(diag, lower, upper)``: the derivative of entry i is
    ``diag[i]*y[i] + lower[i]*y[i-1] + upper[i]*y[i+1]``.
    """
    n = _check_atoms(n_atoms)
    if not 0 <= d <= n:
        raise DomainError(f"diagonal offset must lie in [0, {n}], got {d}")
    return _coefficients(n, float(_bath(bath).nbar), int(d))


def _as_array(rho):
    if isinstance(rho, DensityMatrix):
        return rho.n_atoms, np.asarray(rho.elements)
    arr = np.asarray(rho)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 2:
        raise DimensionError(f"expected a square (N+1)x(N+1) matrix, got shape {arr.shape}")
    return arr.shape[0] - 1, arr


def master_rhs(rho, bath) -> np.ndarray:
    """d rho / dt for the thermal-bath master equation (gamma = 1)."""
    n, r = _as_array(rho)
    nbar = _bath(bath).nbar
    j = n / 2
    big_j = j * (j + 1)
    m = np.arange(n + 1) - j
    mm = m[:, None]
    ll = m[None, :]
    own = -0.5 * (nbar * (2 * big_j - mm * (mm + 1) - ll * (ll + 1))
                  + (nbar + 1) * (2 * big_j - mm * (mm - 1) - ll * (ll - 1)))
    down = np.maximum(big_j - m * (m - 1), 0.0)  # |<m|J+|m-1>|^2
    up = np.maximum(big_j - m * (m + 1), 0.0)  # |<m|J-|m+1>|^2
    out = own * r
    out[1:, 1:] += nbar * np.sqrt(np.outer(down[1:], down[1:])) * r[:-1, :-1]
    out[:-1, :-1] += (nbar + 1) * np.sqrt(np.outer(up[:-1], up[:-1])) * r[1:, 1:]
    return out


@functools.lru_cache(maxsize=256)
def _slowest_rate(n: int, nbar: float, d: int) -> float:
    """Largest eigenvalue of the tridiagonal block of diagonal ``d``.

    The block is similar to a symmetric one (coupling products are
    non-negative), so its spectrum is real and <= 0.
    """
    diag, lower, upper = _coefficients(n, nbar, d)
    if diag.size == 1:
        return float(diag[0])
    off = np.sqrt(lower[1:] * upper[:-1])
    top = eigvalsh_tridiagonal(diag, off, select="i", select_range=(diag.size - 1, diag.size - 1))
    return min(float(top[0]), 0.0)


def _integrate(n, nbar, d, y0, t0, t_out, rtol, atol):
    """Run the kernel on one diagonal; ``y0`` has shape (ncols, N+1-d).

    The integration variable is exp(-lam t) y with lam the slowest rate of
    the block, so error control stays relative while the diagonal decays.
    The main diagonal has lam = 0 and is integrated as is.
    """
    diag, lower, upper = _coefficients(n, float(nbar), d)
    lam = 0.0 if d == 0 else _slowest_rate(n, float(nbar), d)
    if lam != 0.0:
        diag = diag - lam
    t_out = np.asarray(t_out, dtype=float)
    rate = max(float(np.max(np.abs(diag))), 1e-300)
    h0 = 0.01 / rate
    out, status, _, _, hmin, t_reached, _ = kernels.dopri_tridiag(
        diag, lower, upper, np.ascontiguousarray(y0, dtype=float), float(t0), t_out,
        float(rtol), float(atol), h0, MAX_STEPS,
    )
    if status == kernels.STATUS_UNDERFLOW:
        raise StiffnessError(
            f"step size underflow at t = {t_reached:.6g} (smallest step {hmin:.3e})",
            t_reached, hmin,
        )
    if status == kernels.STATUS_MAX_STEPS:
        raise NumericalError(f"step budget of {MAX_STEPS} exhausted at t = {t_reached:.6g}")
    if lam != 0.0:
        out *= np.exp(lam * (t_out - float(t0)))[:, None, None]
    return out


def _sample_times(horizon, n_samples, extra_times=()):
    if not horizon > 0:
        raise DomainError(f"horizon must be positive, got {horizon}")
    if n_samples < 2:
        raise DomainError("need at least two samples")
    times = np.linspace(0.0, float(horizon), int(n_samples))
    extra = np.asarray(list(extra_times), dtype=float)
    if extra.size:
        if extra.min() < 0:
            raise DomainError("sample times must be >= 0")
        times = np.union1d(times, extra)
    return times


# ---------------------------------------------------------------------------
# analytic results


def coherence_analytic(n_atoms, bath, t):
    """rho_{-j,j}(t) for the polar cat: exp(-j(2 nbar + 1) t) / 2."""
    n = _check_atoms(n_atoms)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be >= 0")
    val = 0.5 * np.exp(-(n / 2) * (2 * _bath(bath).nbar + 1) * t)
    return float(val) if val.ndim == 0 else val


def stationary_state(n_atoms, bath) -> np.ndarray:
    """Boltzmann diagonal q^(m+j) / Z with q = nbar / (nbar + 1)."""
    n = _check_atoms(n_atoms)
    nbar = _bath(bath).nbar
    p = np.zeros(n + 1)
    if nbar == 0:
        p[0] = 1.0
        return p
    log_q = -math.log1p(1 / nbar)
    w = np.exp(np.arange(n + 1) * log_q)
    return w / w.sum()


def stationary_energy(n_atoms, bath) -> float:
    """Closed-form mean energy of the stationary state."""
    n = _check_atoms(n_atoms)
    nbar = _bath(bath).nbar
    j = n / 2
    if nbar == 0:
        return -j
    # <k> of a truncated geometric distribution, k = m + j in 0..N
    x = (n + 1) * math.log1p(1 / nbar)
    tail = 0.0 if x > 700 else (n + 1) / math.expm1(x)
    return nbar - tail - j


def energy(diagonals) -> np.ndarray | float:
    """E = sum_m m rho_mm over the last axis."""
    p = np.asarray(diagonals, dtype=float)
    n = p.shape[-1] - 1
    if n < 1:
        raise DimensionError("need at least two diagonal entries")
    m = np.arange(n + 1) - n / 2
    e = p @ m
    return float(e) if np.ndim(e) == 0 else e


def t_dec(n_atoms, bath) -> float:
    """Decoherence time 2 / (N (2 nbar + 1))."""
    n = _check_atoms(n_atoms)
    return 2.0 / (n * (2 * _bath(bath).nbar + 1))


# ---------------------------------------------------------------------------
# zero-temperature cascade by panel-wise quadrature

_CHEB_P = 20


@functools.lru_cache(maxsize=4)
def _cheb_tools(p: int):
    # Chebyshev points of the second kind on [-1, 1], ascending
    x = -np.cos(np.pi * np.arange(p) / (p - 1))
    vander = np.polynomial.chebyshev.chebvander(x, p - 1)
    inv = np.linalg.inv(vander)
    # node values -> cumulative integral from -1 at the nodes
    integ = np.zeros((p, p))
    for k in range(p):
        c = np.zeros(p)
        c[k] = 1.0
        ci = np.polynomial.chebyshev.chebint(c, lbnd=-1)
        integ[:, k] = np.polynomial.chebyshev.chebval(x, ci)
    return x, inv, integ @ inv


def zero_temp_cascade(n_atoms, t, panel_scale: float = 1.0, tail_tol: float = 1e-13):
    """Polar-cat diagonal at nbar = 0 from the recursive integral solution.

    rho_mm(t) = rho_mm(0) e^{-b_m t} + b_{m+1} int_0^t e^{-b_m (t-s)} rho_{m+1,m+1}(s) ds
    with b_m = j(j+1) - m(m-1), evaluated from m = j downward. Every level
    is represented by Chebyshev interpolants on a common set of panels of
    width <= 1/max(b), so each inner integral is a spectral cumulative
    quadrature and repeated rates need no special treatment. Panels are
    halved until the trailing Chebyshev coefficients fall below
    ``tail_tol``.

    Returns an array of shape (len(t), N+1) (or (N+1,) for scalar t).
    """
    n = _check_atoms(n_atoms)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0):
        raise DomainError("time must be >= 0")
    j = n / 2
    m = np.arange(n + 1) - j
    b = j * (j + 1) - m * (m - 1)
    t_max = float(t_arr.max())
    x, inv, cum = _cheb_tools(_CHEB_P)
    scale = panel_scale
    while True:
        result, tail = _cascade_on_panels(n, b, t_arr, t_max, scale, x, inv, cum)
        if tail <= tail_tol or scale < 1e-3:
            break
        scale /= 2
    return result[0] if np.ndim(t) == 0 else result


def _cascade_on_panels(n, b, t_arr, t_max, scale, x, inv, cum):
    b_max = float(b.max())
    n_panels = max(1, math.ceil(t_max * b_max / scale)) if t_max > 0 else 1
    h = t_max / n_panels if t_max > 0 else 1.0
    starts = np.arange(n_panels) * h
    s_local = (x + 1) * (h / 2)  # offsets from the panel start
    vals = np.empty((n + 1, n_panels, x.size))
    tail = 0.0
    upper = None
    for i in range(n, -1, -1):
        rate = b[i]
        rho0 = 0.5 if i in (0, n) else 0.0
        if n == 0:
            rho0 = 1.0
        grow = np.exp(rate * s_local)
        decay = np.exp(-rate * s_local)
        if upper is None:
            partial = np.zeros((n_panels, x.size))
        else:
            g = grow * upper * b[i + 1]
            partial = (g @ cum.T) * (h / 2)
        # carry across panels: rho(t_{k+1}) = e^{-b h} (rho(t_k) + I_k)
        incr = partial[:, -1]
        a = math.exp(-rate * h)
        ends = lfilter([a], [1.0, -a], incr, zi=[a * rho0])[0]
        start_vals = np.concatenate(([rho0], ends[:-1]))
        level = decay * (start_vals[:, None] + partial)
        vals[i] = level
        coef = level @ inv.T
        peak = np.max(np.abs(coef))
        if peak > 0:
            tail = max(tail, float(np.max(np.abs(coef[:, -3:])) / max(peak, 1e-300)))
        upper = level
    # evaluate the interpolants at the requested times
    k = np.minimum((t_arr / h).astype(int), n_panels - 1)
    u = 2 * (t_arr - starts[k]) / h - 1
    basis = np.polynomial.chebyshev.chebvander(u, x.size - 1)  # (nt, p)
    coeffs = np.einsum("ikp,qp->ikq", vals, inv)  # (N+1, panels, p)
    out = np.einsum("tq,itq->ti", basis, coeffs[:, k, :])
    return out, tail


# ---------------------------------------------------------------------------
# evolution traces


@dataclass(frozen=True, eq=False)
class EvolutionTrace:
    """Sampled evolution: main diagonal, corner rho_{-j,j} and energy.

    ``matrices`` holds full density matrices when requested from
    :func:`evolve`; ``nu`` is filled by :func:`with_nonclassicality`.
    """

    times: np.ndarray
    diagonals: np.ndarray
    corner: np.ndarray
    energy: np.ndarray
    n_atoms: int
    bath: BathParams
    nu: np.ndarray | None = None
    matrices: np.ndarray | None = None
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    corner_analytic: bool = field(default=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 1 or np.any(np.diff(t) <= 0):
            raise DomainError("times must be a strictly increasing 1-d array")
        diag = np.asarray(self.diagonals, dtype=float)
        if diag.shape != (t.size, self.n_atoms + 1):
            raise DimensionError(f"diagonals must have shape {(t.size, self.n_atoms + 1)}")
        traces = diag.sum(axis=1)
        if np.max(np.abs(traces - 1.0)) > 1e-9:
            raise NumericalError(f"trace drifted by {np.max(np.abs(traces - 1.0)):.2e}")
        if diag.min() < -1e-10:
            raise NumericalError(f"diagonal element went negative ({diag.min():.2e})")
        if np.max(np.abs(self.corner)) > 0.5 + 1e-12:
            raise NumericalError("corner coherence exceeds 1/2")
        for name in ("times", "diagonals", "corner", "energy"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    def _restart_index(self, t):
        if t < 0:
            raise DomainError("time must be >= 0")
        return max(int(np.searchsorted(self.times, t, side="right")) - 1, 0)

    def diagonal_at(self, t) -> np.ndarray:
        """Main diagonal at any time, re-integrated from the previous sample."""
        t = float(t)
        k = self._restart_index(t)
        t0 = float(self.times[k])
        if t == t0:
            return np.array(self.diagonals[k])
        out = _integrate(self.n_atoms, self.bath.nbar, 0, self.diagonals[k][None, :], t0, [t],
                         self.rtol, self.atol)
        return out[0, 0]

    def corner_at(self, t) -> complex:
        """rho_{-j,j}(t); the corner is an uncoupled exponential."""
        t = float(t)
        k = self._restart_index(t)
        rate = (self.n_atoms / 2) * (2 * self.bath.nbar + 1)
        return complex(self.corner[k] * math.exp(-rate * (t - float(self.times[k]))))

    def energy_at(self, t) -> float:
        return energy(self.diagonal_at(t))

    def characteristic_at(self, t):
        """Characteristic matrix of the diagonal-plus-corner state at ``t``."""
        return polar_characteristic(self.n_atoms, self.diagonal_at(t), self.corner_at(t))

    def caption_energy(self) -> np.ndarray:
        """1 + E/(-j), the normalised energy quoted for display purposes."""
        return 1.0 + self.energy / (-self.n_atoms / 2)


def evolve(rho0, bath, horizon, n_samples: int = 201, rtol: float = DEFAULT_RTOL,
           atol: float = DEFAULT_ATOL, extra_times=(), keep_matrices: bool = False) -> EvolutionTrace:
    """Integrate the master equation diagonal by diagonal.

    Only the main diagonal and the corner are needed for the trace; with
    ``keep_matrices`` every diagonal is integrated and full density
    matrices are stored at the sample times.
    """
    if not isinstance(rho0, DensityMatrix):
        raise DomainError("evolve expects a DensityMatrix")
    bath = _bath(bath)
    n = rho0.n_atoms
    r0 = rho0.elements
    times = _sample_times(horizon, n_samples, extra_times)
    offsets = range(n + 1) if keep_matrices else sorted({0, n})
    mats = np.zeros((times.size, n + 1, n + 1), dtype=complex) if keep_matrices else None
    diag_out = corner_out = None
    for d in offsets:
        entries = np.diagonal(r0, offset=d)
        y0 = np.stack([entries.real, entries.imag])
        out = _integrate(n, bath.nbar, d, y0, 0.0, times, rtol, atol)
        vals = out[:, 0, :] + 1j * out[:, 1, :]
        if d == 0:
            diag_out = out[:, 0, :]
        if d == n:
            corner_out = vals[:, 0]
        if mats is not None:
            idx = np.arange(n + 1 - d)
            mats[:, idx, idx + d] = vals
            if d:
                mats[:, idx + d, idx] = vals.conj()
    return EvolutionTrace(times, diag_out, corner_out, energy(diag_out), n, bath, matrices=mats,
                          rtol=rtol, atol=atol)


def _polar_segment(n, nbar, diag0, t0, times, rtol, atol):
    out = _integrate(n, nbar, 0, np.asarray(diag0)[None, :], t0, times, rtol, atol)
    return out[:, 0, :]


def evolve_polar_cat(n_atoms, bath, horizon, n_samples: int = 201, rtol: float = DEFAULT_RTOL,
                     atol: float = DEFAULT_ATOL, extra_times=()) -> EvolutionTrace:
    """Polar cat evolution: main diagonal numerically, corner in closed form."""
    n = _check_atoms(n_atoms)
    bath = _bath(bath)
    times = _sample_times(horizon, n_samples, extra_times)
    diag0 = np.zeros(n + 1)
    diag0[0] += 0.5
    diag0[n] += 0.5
    diags = _polar_segment(n, bath.nbar, diag0, 0.0, times, rtol, atol)
    corner = coherence_analytic(n, bath, times).astype(complex)
    return EvolutionTrace(times, diags, corner, energy(diags), n, bath, rtol=rtol, atol=atol,
                          corner_analytic=True)


def extend_trace(trace: EvolutionTrace, horizon, n_samples: int = 201) -> EvolutionTrace:
    """Continue a trace to a later horizon without recomputing earlier samples."""
    if trace.matrices is not None:
        raise PreconditionError("traces holding full matrices cannot be extended")
    if not horizon > trace.horizon:
        raise DomainError("new horizon must exceed the current one")
    new_t = np.linspace(trace.horizon, float(horizon), int(n_samples))[1:]
    diags = _polar_segment(trace.n_atoms, trace.bath.nbar, trace.diagonals[-1], trace.horizon,
                           new_t, trace.rtol, trace.atol)
    rate = (trace.n_atoms / 2) * (2 * trace.bath.nbar + 1)
    corner = trace.corner[-1] * np.exp(-rate * (new_t - trace.horizon))
    return EvolutionTrace(
        np.concatenate([trace.times, new_t]),
        np.concatenate([trace.diagonals, diags]),
        np.concatenate([trace.corner, corner]),
        np.concatenate([trace.energy, energy(diags)]),
        trace.n_atoms, trace.bath, rtol=trace.rtol, atol=trace.atol,
        corner_analytic=trace.corner_analytic,
    )


def with_nonclassicality(trace: EvolutionTrace) -> EvolutionTrace:
    """Attach nu(t) at every sample.

    Traces with full matrices use grid quadrature; diagonal-plus-corner
    traces use the exact azimuthal integral for polar-sparse fields.
    """
    if trace.matrices is not None:
        nu = [nonclassicality_of(characteristic_matrix(m)) for m in trace.matrices]
    else:
        nu = [polar_nonclassicality(polar_characteristic(trace.n_atoms, d, c))
              for d, c in zip(trace.diagonals, trace.corner)]
    arr = np.asarray(nu, dtype=float)
    arr.setflags(write=False)
    return replace(trace, nu=arr)


# ---------------------------------------------------------------------------
# characteristic times


def _energy_gap_fn(trace: EvolutionTrace):
    e_inf = stationary_energy(trace.n_atoms, trace.bath)
    gap0 = abs(float(trace.energy[0]) - e_inf)
    if gap0 == 0.0:
        raise DomainError("the initial state already has the stationary energy")
    target = gap0 / math.e
    return e_inf, target


def t_diss(trace: EvolutionTrace, rtol: float = 1e-8) -> float:
    """First t with |E(t) - E(inf)| = |E(0) - E(inf)| / e.

    The crossing is bracketed on the samples, estimated from a local cubic
    and then located by root finding on re-integrated energies.
    """
    e_inf, target = _energy_gap_fn(trace)
    g = np.abs(trace.energy - e_inf) - target
    below = np.nonzero(g <= 0)[0]
    if below.size == 0:
        raise InsufficientHorizonError(
            f"energy gap has not relaxed by 1/e within the horizon t = {trace.horizon:.6g}; "
            "extend the evolution"
        )
    k = int(below[0])
    if g[k] == 0.0 or k == 0:
        return float(trace.times[k])
    lo, hi = float(trace.times[k - 1]), float(trace.times[k])

    def gap(t):
        return abs(trace.energy_at(t) - e_inf) - target

    sl = slice(max(k - 2, 0), min(k + 2, trace.times.size))
    if sl.stop - sl.start >= 3:
        spline = CubicSpline(trace.times[sl], g[sl])
        guess = brentq(spline, lo, hi) if spline(lo) * spline(hi) < 0 else 0.5 * (lo + hi)
        delta = 1e-4 * (hi - lo)
        a, b = max(lo, guess - delta), min(hi, guess + delta)
        ga, gb = gap(a), gap(b)
        if ga > 0 >= gb:
            lo, hi = a, b
    return float(brentq(gap, lo, hi, xtol=rtol * hi * 1e-2, rtol=1e-14))


def _is_classical(chi, evaluator):
    w_min, w_max = evaluator(chi)
    return w_min >= -NU_ZERO_THRESHOLD * w_max


def t_ncl(trace: EvolutionTrace, evaluator=section_extrema, rtol: float = 1e-4):
    """First time the Wigner function becomes non-negative everywhere.

    ``evaluator(chi)`` returns ``(min W, max |W|)``; the default uses the
    phi = pi/N section, valid for polar-cat traces. Returns None at zero
    temperature and when the state stays non-classical over the horizon.
    """
    if trace.bath.nbar == 0:
        return None
    prev = 0.0
    hit = None
    for t, d, c in zip(trace.times, trace.diagonals, trace.corner):
        if _is_classical(polar_characteristic(trace.n_atoms, d, c), evaluator):
            hit = float(t)
            break
        prev = float(t)
    if hit is None:
        return None
    if hit == trace.times[0]:
        return hit
    lo, hi = prev, hit
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if _is_classical(trace.characteristic_at(mid), evaluator):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CharacteristicTimes:
    n_atoms: int
    nbar: float
    t_dec: float
    t_diss: float
    t_ncl: float | None
    ratio_r: float


def characteristic_times(n_atoms, bath, n_samples: int = 201, with_ncl: bool = True,
                         return_trace: bool = False):
    """t_dec, t_diss, t_ncl and r = t_diss/t_dec for the polar cat.

    The evolution starts on a horizon of 10 t_dec and is doubled (by
    continuation) until the dissipation crossing lies inside it.
    """
    n = _check_atoms(n_atoms)
    bath = _bath(bath)
    td = t_dec(n, bath)
    trace = evolve_polar_cat(n, bath, 10 * td, n_samples)
    while True:
        try:
            tdiss = t_diss(trace)
            break
        except InsufficientHorizonError:
            trace = extend_trace(trace, 2 * trace.horizon, n_samples)
    tncl = None
    if with_ncl and bath.nbar > 0:
        tncl = t_ncl(trace)
        while tncl is None and trace.horizon < 10 * tdiss:
            trace = extend_trace(trace, 2 * trace.horizon, n_samples)
            tncl = t_ncl(trace)
    times = CharacteristicTimes(n, bath.nbar, td, tdiss, tncl, tdiss / td)
    return (times, trace) if return_trace else times
