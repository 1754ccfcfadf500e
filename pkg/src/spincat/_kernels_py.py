"""Pure Python / NumPy implementations of the hot kernels.

Signatures and return conventions are identical to the compiled
``spincat._kernels`` module; :mod:`spincat.kernels` picks one at import.
"""

import math

import numpy as np

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2


def _tridiag_rhs(diag, lower, upper, y):
    f = diag * y
    f[:, 1:] += lower[1:] * y[:, :-1]
    f[:, :-1] += upper[:-1] * y[:, 1:]
    return f


def dopri_tridiag(diag, lower, upper, y0, t0, t_out, rtol, atol, h0, max_steps):
    """Integrate ``y' = diag*y + lower*y[i-1] + upper*y[i+1]`` column-wise.

    ``y0`` has shape (ncols, n); every column shares the same coefficients.
    The integrator lands exactly on every time in ``t_out`` (ascending,
    all >= t0).

    Returns ``(out, status, nsteps, nrejected, hmin, t_reached, h_last)``
    where ``out`` has shape (len(t_out), ncols, n).
    """
    diag = np.asarray(diag, dtype=np.float64)
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    y = np.array(y0, dtype=np.float64, copy=True)
    t_out = np.asarray(t_out, dtype=np.float64)
    out = np.empty((t_out.size,) + y.shape)

    t = float(t0)
    h = float(h0)
    hmin = math.inf
    nsteps = 0
    nrej = 0
    idx = 0
    while idx < t_out.size and t_out[idx] <= t:
        out[idx] = y
        idx += 1
    if idx == t_out.size:
        return out, STATUS_OK, 0, 0, hmin, t, h

    k1 = _tridiag_rhs(diag, lower, upper, y)
    ks = [k1, None, None, None, None, None, None]
    while idx < t_out.size:
        if nsteps + nrej >= max_steps:
            return out, STATUS_MAX_STEPS, nsteps, nrej, hmin, t, h
        t_target = t_out[idx]
        step = min(h, t_target - t)
        landing = step >= t_target - t
        if step <= 16 * np.finfo(float).eps * max(abs(t), 1.0) and not landing:
            return out, STATUS_UNDERFLOW, nsteps, nrej, min(hmin, step), t, h
        for s in range(1, 7):
            acc = y.copy()
            for r, a in enumerate(_A[s]):
                if a != 0.0:
                    acc += (step * a) * ks[r]
            ks[s] = _tridiag_rhs(diag, lower, upper, acc)
            if s == 6:
                y_new = acc
        err = np.zeros_like(y)
        for r, e in enumerate(_E):
            if e != 0.0:
                err += (step * e) * ks[r]
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = math.sqrt(float(np.mean((err / scale) ** 2)))
        hmin = min(hmin, step)
        if err_norm <= 1.0:
            nsteps += 1
            t = t_target if landing else t + step
            y = y_new
            ks[0] = ks[6]
            while idx < t_out.size and t_out[idx] <= t:
                out[idx] = y
                idx += 1
            fac = 10.0 if err_norm == 0.0 else min(10.0, 0.9 * err_norm ** -0.2)
            if not landing or step >= h:
                h = step * max(fac, 0.2)
        else:
            nrej += 1
            h = step * max(0.2, 0.9 * err_norm ** -0.2)
    return out, STATUS_OK, nsteps, nrej, hmin, t, h


def _threej_a(l, j2, j3, m1):
    v = (l * l - (j2 - j3) ** 2) * ((j2 + j3 + 1) ** 2 - l * l) * (l * l - m1 * m1)
    return math.sqrt(v) if v > 0.0 else 0.0


def _threej_b(l, j2, j3, m1, m2, m3):
    return -(2 * l + 1) * (j2 * (j2 + 1) * m1 - j3 * (j3 + 1) * m1 - l * (l + 1) * (m3 - m2))


def threej_recursion(j2, j3, m2, m3, ratio1):
    """3j symbols (l j2 j3; -m2-m3 m2 m3) for every allowed l.

    Three-term recursion in the first angular momentum, run forward from
    the lower end and backward from the upper end, matched where the
    forward sequence first stops growing. Output is normalised so that
    sum (2l+1) X_l^2 = 1 with X at the largest l positive; the caller
    fixes the overall sign.

    ``ratio1`` is X(lmin+1)/X(lmin); it is only consulted when lmin = 0,
    where the recursion itself is silent about that ratio.
    """
    m1 = -(m2 + m3)
    lmin = max(abs(j2 - j3), abs(m1))
    lmax = j2 + j3
    n = int(round(lmax - lmin)) + 1
    x = [0.0] * n
    if n == 1:
        x[0] = 1.0 / math.sqrt(2 * lmin + 1)
        return np.array(x)

    big = 1e150
    # forward sweep
    x[0] = 1.0
    start = 1
    imatch = n - 1
    if lmin == 0:
        x[1] = ratio1
        start = 2
        if abs(x[1]) < abs(x[0]):
            imatch = 0
            start = n
    for i in range(start, n):
        l = lmin + i - 1
        prev2 = x[i - 2] if i >= 2 else 0.0
        x[i] = -(_threej_b(l, j2, j3, m1, m2, m3) * x[i - 1]
                 + (l + 1) * _threej_a(l, j2, j3, m1) * prev2) / (l * _threej_a(l + 1, j2, j3, m1))
        if abs(x[i]) > big:
            for k in range(i + 1):
                x[k] /= big
        if abs(x[i]) < abs(x[i - 1]):
            imatch = i - 1
            break

    if imatch < n - 1:
        # backward sweep down to imatch - 1 (or imatch)
        lo = max(imatch - 1, 0)
        xb = [0.0] * n
        xb[n - 1] = 1.0
        for i in range(n - 1, lo, -1):
            l = lmin + i
            nxt = xb[i + 1] if i + 1 < n else 0.0
            xb[i - 1] = -(l * _threej_a(l + 1, j2, j3, m1) * nxt
                          + _threej_b(l, j2, j3, m1, m2, m3) * xb[i]) / ((l + 1) * _threej_a(l, j2, j3, m1))
            if abs(xb[i - 1]) > big:
                for k in range(i - 1, n):
                    xb[k] /= big
        num = 0.0
        den = 0.0
        for k in range(lo, imatch + 1):
            num += x[k] * xb[k]
            den += xb[k] * xb[k]
        scale = num / den
        for k in range(imatch + 1, n):
            x[k] = scale * xb[k]

    xmax = max(abs(v) for v in x)
    norm = 0.0
    for i in range(n):
        x[i] /= xmax
        norm += (2 * (lmin + i) + 1) * x[i] * x[i]
    norm = math.sqrt(norm)
    if x[n - 1] < 0.0:
        norm = -norm
    return np.array([v / norm for v in x])


def _start_log(m):
    # log of sqrt((2m+1)/(4 pi) * prod_{k<=m} (2k-1)/(2k))
    s = math.log(2 * m + 1) - math.log(4 * math.pi)
    for k in range(1, m + 1):
        s += math.log((2 * k - 1) / (2 * k))
    return 0.5 * s


def legendre_table(m, lmax, x):
    """Orthonormal associated Legendre values P_lm(x), l = m..lmax.

    Includes the Condon-Shortley phase and the 1/sqrt(4 pi) factor, so
    Y_lm(theta, phi) = P_lm(cos theta) exp(i m phi). Shape (lmax-m+1, len(x)).
    """
    x = np.asarray(x, dtype=np.float64)
    nl = lmax - m + 1
    out = np.zeros((nl, x.size))
    if nl <= 0:
        return out
    with np.errstate(divide="ignore"):
        log_sin = 0.5 * np.log1p(-x * x) if m else np.zeros_like(x)
    pmm = np.exp(_start_log(m) + m * log_sin)
    if m % 2:
        pmm = -pmm
    out[0] = pmm
    if nl > 1:
        out[1] = x * math.sqrt(2 * m + 3) * pmm
    a_prev = math.sqrt(2 * m + 3)
    for i in range(2, nl):
        l = m + i
        a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
        out[i] = a * (x * out[i - 1] - out[i - 2] / a_prev)
        a_prev = a
    return out


def legendre_sum(coeffs, m, x):
    """Return sum_l coeffs[l-m] * P_lm(x) without storing the full table."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    nl = coeffs.size
    if nl == 0:
        return np.zeros(x.size)
    with np.errstate(divide="ignore"):
        log_sin = 0.5 * np.log1p(-x * x) if m else np.zeros_like(x)
    p2 = np.exp(_start_log(m) + m * log_sin)
    if m % 2:
        p2 = -p2
    total = coeffs[0] * p2
    if nl == 1:
        return total
    p1 = x * math.sqrt(2 * m + 3) * p2
    total = total + coeffs[1] * p1
    a_prev = math.sqrt(2 * m + 3)
    for i in range(2, nl):
        l = m + i
        a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
        p = a * (x * p1 - p2 / a_prev)
        total += coeffs[i] * p
        p2, p1 = p1, p
        a_prev = a
    return total
