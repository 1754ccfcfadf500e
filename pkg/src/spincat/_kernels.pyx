# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; same signatures and results as ``spincat._kernels_py``."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, log, log1p, sqrt, INFINITY, M_PI

cnp.import_array()

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2

cdef double EPS = np.finfo(np.float64).eps

# Dormand-Prince 5(4) tableau
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176
cdef double A65 = -5103.0 / 18656
cdef double A71 = 35.0 / 384, A73 = 500.0 / 1113, A74 = 125.0 / 192, A75 = -2187.0 / 6784
cdef double A76 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200
cdef double E6 = 22.0 / 525, E7 = -1.0 / 40


cdef inline void _rhs(const double[::1] diag, const double[::1] lower, const double[::1] upper,
                      const double[:, ::1] y, double[:, ::1] f) noexcept nogil:
    cdef Py_ssize_t c, i, n = y.shape[1]
    for c in range(y.shape[0]):
        for i in range(n):
            f[c, i] = diag[i] * y[c, i]
        for i in range(1, n):
            f[c, i] += lower[i] * y[c, i - 1]
        for i in range(n - 1):
            f[c, i] += upper[i] * y[c, i + 1]


def dopri_tridiag(diag, lower, upper, y0, double t0, t_out, double rtol, double atol,
                  double h0, long max_steps):
    """Integrate ``y' = diag*y + lower*y[i-1] + upper*y[i+1]`` column-wise.

    Returns ``(out, status, nsteps, nrejected, hmin, t_reached, h_last)``
    where ``out`` has shape (len(t_out), ncols, n).
    """
    cdef const double[::1] d = np.ascontiguousarray(diag, dtype=np.float64)
    cdef const double[::1] lo = np.ascontiguousarray(lower, dtype=np.float64)
    cdef const double[::1] up = np.ascontiguousarray(upper, dtype=np.float64)
    y_arr = np.array(y0, dtype=np.float64, copy=True, order="C")
    cdef double[:, ::1] y = y_arr
    cdef const double[::1] ts = np.ascontiguousarray(t_out, dtype=np.float64)
    cdef Py_ssize_t nt = ts.shape[0], ncols = y.shape[0], n = y.shape[1]
    out_arr = np.empty((nt, ncols, n))
    cdef double[:, :, ::1] out = out_arr

    cdef double[:, ::1] k1 = np.empty((ncols, n)), k2 = np.empty((ncols, n))
    cdef double[:, ::1] k3 = np.empty((ncols, n)), k4 = np.empty((ncols, n))
    cdef double[:, ::1] k5 = np.empty((ncols, n)), k6 = np.empty((ncols, n))
    cdef double[:, ::1] k7 = np.empty((ncols, n)), acc = np.empty((ncols, n))
    cdef double[:, ::1] ynew = np.empty((ncols, n))
    cdef double[:, ::1] tmp

    cdef double t = t0, h = h0, hmin = INFINITY, step, t_target, err, sc, e, err_norm, fac
    cdef long nsteps = 0, nrej = 0
    cdef Py_ssize_t idx = 0, c, i
    cdef bint landing
    cdef double total = <double>(ncols * n)

    while idx < nt and ts[idx] <= t:
        out[idx, :, :] = y
        idx += 1
    if idx == nt:
        return out_arr, STATUS_OK, 0, 0, hmin, t, h

    with nogil:
        _rhs(d, lo, up, y, k1)
        while idx < nt:
            if nsteps + nrej >= max_steps:
                with gil:
                    return out_arr, STATUS_MAX_STEPS, nsteps, nrej, hmin, t, h
            t_target = ts[idx]
            step = h if h < t_target - t else t_target - t
            landing = step >= t_target - t
            if step <= 16 * EPS * (fabs(t) if fabs(t) > 1.0 else 1.0) and not landing:
                if step < hmin:
                    hmin = step
                with gil:
                    return out_arr, STATUS_UNDERFLOW, nsteps, nrej, hmin, t, h
            for c in range(ncols):
                for i in range(n):
                    acc[c, i] = y[c, i] + step * A21 * k1[c, i]
            _rhs(d, lo, up, acc, k2)
            for c in range(ncols):
                for i in range(n):
                    acc[c, i] = y[c, i] + step * (A31 * k1[c, i] + A32 * k2[c, i])
            _rhs(d, lo, up, acc, k3)
            for c in range(ncols):
                for i in range(n):
                    acc[c, i] = y[c, i] + step * (A41 * k1[c, i] + A42 * k2[c, i] + A43 * k3[c, i])
            _rhs(d, lo, up, acc, k4)
            for c in range(ncols):
                for i in range(n):
                    acc[c, i] = y[c, i] + step * (A51 * k1[c, i] + A52 * k2[c, i] + A53 * k3[c, i]
                                                  + A54 * k4[c, i])
            _rhs(d, lo, up, acc, k5)
            for c in range(ncols):
                for i in range(n):
                    acc[c, i] = y[c, i] + step * (A61 * k1[c, i] + A62 * k2[c, i] + A63 * k3[c, i]
                                                  + A64 * k4[c, i] + A65 * k5[c, i])
            _rhs(d, lo, up, acc, k6)
            for c in range(ncols):
                for i in range(n):
                    ynew[c, i] = y[c, i] + step * (A71 * k1[c, i] + A73 * k3[c, i] + A74 * k4[c, i]
                                                   + A75 * k5[c, i] + A76 * k6[c, i])
            _rhs(d, lo, up, ynew, k7)
            err = 0.0
            for c in range(ncols):
                for i in range(n):
                    e = step * (E1 * k1[c, i] + E3 * k3[c, i] + E4 * k4[c, i] + E5 * k5[c, i]
                                + E6 * k6[c, i] + E7 * k7[c, i])
                    sc = fabs(y[c, i])
                    if fabs(ynew[c, i]) > sc:
                        sc = fabs(ynew[c, i])
                    sc = atol + rtol * sc
                    err += (e / sc) * (e / sc)
            err_norm = sqrt(err / total)
            if step < hmin:
                hmin = step
            if err_norm <= 1.0:
                nsteps += 1
                t = t_target if landing else t + step
                tmp = y
                y = ynew
                ynew = tmp
                tmp = k1
                k1 = k7
                k7 = tmp
                while idx < nt and ts[idx] <= t:
                    out[idx, :, :] = y
                    idx += 1
                if err_norm == 0.0:
                    fac = 10.0
                else:
                    fac = 0.9 * exp(-0.2 * log(err_norm))
                    if fac > 10.0:
                        fac = 10.0
                if not landing or step >= h:
                    h = step * (fac if fac > 0.2 else 0.2)
            else:
                nrej += 1
                fac = 0.9 * exp(-0.2 * log(err_norm))
                h = step * (fac if fac > 0.2 else 0.2)
    return out_arr, STATUS_OK, nsteps, nrej, hmin, t, h


cdef inline double _a(double l, double j2, double j3, double m1) noexcept nogil:
    cdef double v = (l * l - (j2 - j3) * (j2 - j3)) * ((j2 + j3 + 1) * (j2 + j3 + 1) - l * l) \
        * (l * l - m1 * m1)
    return sqrt(v) if v > 0.0 else 0.0


cdef inline double _b(double l, double j2, double j3, double m1, double m2, double m3) noexcept nogil:
    return -(2 * l + 1) * (j2 * (j2 + 1) * m1 - j3 * (j3 + 1) * m1 - l * (l + 1) * (m3 - m2))


def threej_recursion(double j2, double j3, double m2, double m3, double ratio1):
    """3j symbols (l j2 j3; -m2-m3 m2 m3) for every allowed l, normalised with X(lmax) > 0."""
    cdef double m1 = -(m2 + m3)
    cdef double lmin = fabs(j2 - j3) if fabs(j2 - j3) > fabs(m1) else fabs(m1)
    cdef double lmax = j2 + j3
    cdef Py_ssize_t n = <Py_ssize_t>(lmax - lmin + 0.5) + 1
    x_arr = np.zeros(n)
    cdef double[::1] x = x_arr
    if n == 1:
        x[0] = 1.0 / sqrt(2 * lmin + 1)
        return x_arr
    xb_arr = np.zeros(n)
    cdef double[::1] xb = xb_arr
    cdef double big = 1e150, l, prev2, nxt, num, den, scale, xmax, norm
    cdef Py_ssize_t i, k, start = 1, imatch = n - 1, lo_i

    x[0] = 1.0
    if lmin == 0:
        x[1] = ratio1
        start = 2
        if fabs(x[1]) < fabs(x[0]):
            imatch = 0
            start = n
    for i in range(start, n):
        l = lmin + i - 1
        prev2 = x[i - 2] if i >= 2 else 0.0
        x[i] = -(_b(l, j2, j3, m1, m2, m3) * x[i - 1] + (l + 1) * _a(l, j2, j3, m1) * prev2) \
            / (l * _a(l + 1, j2, j3, m1))
        if fabs(x[i]) > big:
            for k in range(i + 1):
                x[k] /= big
        if fabs(x[i]) < fabs(x[i - 1]):
            imatch = i - 1
            break

    if imatch < n - 1:
        lo_i = imatch - 1 if imatch >= 1 else 0
        xb[n - 1] = 1.0
        i = n - 1
        while i > lo_i:
            l = lmin + i
            nxt = xb[i + 1] if i + 1 < n else 0.0
            xb[i - 1] = -(l * _a(l + 1, j2, j3, m1) * nxt + _b(l, j2, j3, m1, m2, m3) * xb[i]) \
                / ((l + 1) * _a(l, j2, j3, m1))
            if fabs(xb[i - 1]) > big:
                for k in range(i - 1, n):
                    xb[k] /= big
            i -= 1
        num = 0.0
        den = 0.0
        for k in range(lo_i, imatch + 1):
            num += x[k] * xb[k]
            den += xb[k] * xb[k]
        scale = num / den
        for k in range(imatch + 1, n):
            x[k] = scale * xb[k]

    xmax = 0.0
    for i in range(n):
        if fabs(x[i]) > xmax:
            xmax = fabs(x[i])
    norm = 0.0
    for i in range(n):
        x[i] /= xmax
        norm += (2 * (lmin + i) + 1) * x[i] * x[i]
    norm = sqrt(norm)
    if x[n - 1] < 0.0:
        norm = -norm
    for i in range(n):
        x[i] /= norm
    return x_arr


cdef double _start_log(long m) noexcept nogil:
    cdef double s = log(2.0 * m + 1) - log(4 * M_PI)
    cdef long k
    for k in range(1, m + 1):
        s += log((2.0 * k - 1) / (2.0 * k))
    return 0.5 * s


def legendre_table(long m, long lmax, x):
    """Orthonormal associated Legendre values P_lm(x), l = m..lmax; shape (lmax-m+1, len(x))."""
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t nl = lmax - m + 1, nx = xv.shape[0], i, p
    out_arr = np.zeros((nl if nl > 0 else 0, nx))
    if nl <= 0:
        return out_arr
    cdef double[:, ::1] out = out_arr
    cdef double start = _start_log(m), a, a_prev, l, pmm, xx
    cdef double sgn = -1.0 if m % 2 else 1.0
    with nogil:
        for p in range(nx):
            xx = xv[p]
            if m:
                pmm = sgn * exp(start + m * 0.5 * log1p(-xx * xx))
            else:
                pmm = exp(start)
            out[0, p] = pmm
            if nl > 1:
                out[1, p] = xx * sqrt(2.0 * m + 3) * pmm
            a_prev = sqrt(2.0 * m + 3)
            for i in range(2, nl):
                l = m + i
                a = sqrt((4 * l * l - 1) / (l * l - <double>(m * m)))
                out[i, p] = a * (xx * out[i - 1, p] - out[i - 2, p] / a_prev)
                a_prev = a
    return out_arr


def legendre_sum(coeffs, long m, x):
    """Return sum_l coeffs[l-m] * P_lm(x) without storing the full table."""
    cdef const double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t nl = c.shape[0], nx = xv.shape[0], i, p
    total_arr = np.zeros(nx)
    if nl == 0:
        return total_arr
    cdef double[::1] total = total_arr
    cdef double start = _start_log(m), a, a_prev, l, p0, p1, p2, xx, s
    cdef double sgn = -1.0 if m % 2 else 1.0
    with nogil:
        for p in range(nx):
            xx = xv[p]
            if m:
                p2 = sgn * exp(start + m * 0.5 * log1p(-xx * xx))
            else:
                p2 = exp(start)
            s = c[0] * p2
            if nl > 1:
                p1 = xx * sqrt(2.0 * m + 3) * p2
                s += c[1] * p1
                a_prev = sqrt(2.0 * m + 3)
                for i in range(2, nl):
                    l = m + i
                    a = sqrt((4 * l * l - 1) / (l * l - <double>(m * m)))
                    p0 = a * (xx * p1 - p2 / a_prev)
                    s += c[i] * p0
                    p2 = p1
                    p1 = p0
                    a_prev = a
            total[p] = s
    return total_arr
