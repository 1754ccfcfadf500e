"""Acceptance criteria, each at its stated tolerance and time budget.

Every test prints one PASS/FAIL line; the lines are repeated in the
terminal summary. Run just this file with ``pytest tests/test_acceptance.py``
and add ``-m 'not slow'`` to skip the N=1000, nbar=100 run.
"""

import math
import time

import numpy as np
import pytest

from conftest import random_pure_state
from spincat import dynamics as dy
from spincat.squeezing import (
    max_squeezing,
    squeezing_measure,
    variance_jx,
    variance_jy,
    variance_oracle,
)
from spincat.states import density_of, nonpolar_cat, polar_cat, spin_operators
from spincat.wigner import (
    characteristic_matrix,
    default_grid,
    nonpolar_cat_wigner,
    operator_wigner,
    polar_cat_wigner,
    product_rule_expectation,
    section_extrema,
    wigner_at,
    wigner_field,
)


def test_01_normalization(rng, acceptance_log):
    start = time.perf_counter()
    worst = 0.0
    for n in range(1, 11):
        grid = default_grid(n)
        for _ in range(10):
            chi = characteristic_matrix(density_of(random_pure_state(n, rng)))
            worst = max(worst, abs(wigner_field(chi, grid).integral() - 1.0))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-10 and elapsed < 10
    acceptance_log(1, "normalization", ok,
                   f"max |int W - 1| = {worst:.1e} (tol 1e-10), 100 states N=1..10, {elapsed:.2f} s (< 10 s)")
    assert ok


def test_02_product_rule(rng, acceptance_log):
    start = time.perf_counter()
    worst = 0.0
    cache = {}
    for k in range(100):
        n = 1 + k % 8
        if n not in cache:
            ops = spin_operators(n)
            grid = default_grid(n)
            mats = [ops.jx, ops.jy, ops.jz, ops.jz @ ops.jz]
            cache[n] = grid, [(a, operator_wigner(a, grid)) for a in mats]
        grid, symbols = cache[n]
        rho = density_of(random_pure_state(n, rng))
        w_rho = wigner_field(characteristic_matrix(rho), grid)
        for a, w_a in symbols:
            exact = np.trace(rho.elements @ a).real
            worst = max(worst, abs(product_rule_expectation(w_rho, w_a) - exact))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 30
    acceptance_log(2, "product rule", ok,
                   f"max |quadrature - trace| = {worst:.1e} (tol 1e-9), A in Jx,Jy,Jz,Jz^2, "
                   f"100 states N<=8, {elapsed:.2f} s (< 30 s)")
    assert ok


def test_03_closed_forms(acceptance_log):
    theta = np.linspace(0, np.pi, 37)[:, None]
    phi = np.linspace(0, 2 * np.pi, 73)[None, :]
    worst_polar = 0.0
    for n in range(1, 9):
        chi = characteristic_matrix(density_of(polar_cat(n)))
        worst_polar = max(worst_polar, np.max(np.abs(polar_cat_wigner(n, theta, phi) - wigner_at(chi, theta, phi))))
    worst_np = 0.0
    for beta_deg in (20, 45, 55, 70):
        beta = math.radians(beta_deg)
        chi = characteristic_matrix(density_of(nonpolar_cat(5, beta)))
        worst_np = max(worst_np, np.max(np.abs(nonpolar_cat_wigner(5, beta, theta, phi)
                                               - wigner_at(chi, theta, phi))))
    ok = worst_polar < 1e-9 and worst_np < 1e-9
    acceptance_log(3, "closed forms", ok,
                   f"polar cat N<=8 max dev {worst_polar:.1e}, nonpolar N=5 beta=20/45/55/70 deg "
                   f"max dev {worst_np:.1e} (tol 1e-9)")
    assert ok


def test_04_squeezing_formulas(acceptance_log):
    worst = 0.0
    skipped = 0
    for n in range(1, 31):
        for beta_deg in range(181):
            beta = math.radians(beta_deg)
            if n % 2 and beta_deg == 180:
                skipped += 1  # the two components cancel: no state to compare
                continue
            psi = nonpolar_cat(n, beta)
            worst = max(worst, abs(variance_jx(n, beta) - variance_oracle(psi, "x")),
                        abs(variance_jy(n, beta) - variance_oracle(psi, "y")))
    special = [squeezing_measure(1, b) for b in np.linspace(0, math.pi / 2, 19)]
    special += [squeezing_measure(n, 0.0) for n in range(1, 31)]
    special += [squeezing_measure(n, math.pi / 2) for n in range(3, 31)]
    exact_zero = all(s == 0.0 for s in special)
    ok = worst < 1e-10 and exact_zero
    acceptance_log(4, "squeezing formulas", ok,
                   f"max |closed form - oracle| = {worst:.1e} (tol 1e-10) over N<=30 x 181 beta "
                   f"({skipped} degenerate points skipped); S == 0 exactly at N=1, beta=0, "
                   f"beta=pi/2 (N>=3): {exact_zero}")
    assert ok


def test_05_squeezing_asymptotics(acceptance_log):
    start = time.perf_counter()
    parts = []
    ok = True
    for n in (50, 200, 1000):
        beta_m, s_max = max_squeezing(n)
        target = 1.6 / math.sqrt(n)
        good = abs(s_max - 0.56) <= 0.01 and abs(beta_m - target) <= 0.1 * target
        ok &= good
        parts.append(f"N={n}: S_max={s_max:.4f}, beta_m/(1.6/sqrt N)={beta_m / target:.3f}")
    beta5 = math.degrees(max_squeezing(5)[0])
    ok &= abs(beta5 - 43) <= 1
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10
    acceptance_log(5, "squeezing asymptotics", ok,
                   "; ".join(parts) + f"; N=5 beta_m={beta5:.2f} deg (43 +- 1); {elapsed:.2f} s (< 10 s)")
    assert ok


def test_06_coherence_decay(acceptance_log):
    worst = 0.0
    for n in (5, 50):
        for nbar in (0.0, 1.0, 10.0):
            horizon = 5 * dy.characteristic_times(n, nbar, with_ncl=False).t_diss
            tr = dy.evolve(density_of(polar_cat(n)), nbar, horizon, 101)
            exact = dy.coherence_analytic(n, nbar, tr.times)
            mask = exact > 0
            worst = max(worst, np.max(np.abs(tr.corner[mask] / exact[mask] - 1)))
    ok = worst < 1e-10
    acceptance_log(6, "coherence decay", ok,
                   f"max relative dev of rho(-j,j) from closed form = {worst:.1e} (tol 1e-10), "
                   "N=5,50, nbar=0,1,10 over [0, 5 t_diss]")
    assert ok


def test_07_stationarity(acceptance_log):
    worst = 0.0
    worst_rhs = 0.0
    for n in (5, 50):
        for nbar in (1.0, 10.0):
            t_diss = dy.characteristic_times(n, nbar, with_ncl=False).t_diss
            tr = dy.evolve_polar_cat(n, nbar, 10 * t_diss, 11)
            stat = dy.stationary_state(n, nbar)
            worst = max(worst, np.max(np.abs(tr.diagonals[-1] - stat)))
            worst_rhs = max(worst_rhs, np.max(np.abs(dy.master_rhs(np.diag(stat), nbar))))
    ok = worst < 1e-6 and worst_rhs < 1e-12
    acceptance_log(7, "stationarity", ok,
                   f"L_inf dev at 10 t_diss = {worst:.1e} (tol 1e-6); max |master_rhs| on Boltzmann "
                   f"state = {worst_rhs:.1e} (tol 1e-12)")
    assert ok


def test_08_zero_temperature_cascade(acceptance_log):
    worst = 0.0
    t = np.linspace(0, 5, 51)
    for n in range(1, 11):
        cas = dy.zero_temp_cascade(n, t)
        ode = dy.evolve_polar_cat(n, 0.0, 5.0, 51).diagonals
        worst = max(worst, np.max(np.abs(cas - ode)))
    ok = worst < 1e-8
    acceptance_log(8, "zero-T cascade", ok,
                   f"max |quadrature recursion - ODE| = {worst:.1e} (tol 1e-8), N=1..10, t in [0, 5]")
    assert ok


def test_09_characteristic_times(acceptance_log):
    td50 = dy.t_dec(5, 0.0)
    c0 = dy.characteristic_times(5, 0.0)
    c10 = dy.characteristic_times(5, 10.0)
    checks = [
        td50 == 0.4,
        abs(c0.t_diss - 0.506) <= 0.005,
        abs(c10.t_dec - 0.019) <= 0.001,
        c10.t_ncl is not None and abs(c10.t_ncl - 0.031) <= 0.002,
        abs(c10.t_diss - 0.058) <= 0.003,
    ]
    ok = all(checks)
    acceptance_log(9, "characteristic times", ok,
                   f"t_dec(5,0)={td50}, t_diss(5,0)={c0.t_diss:.4f}; (t_dec, t_ncl, t_diss)(5,10) = "
                   f"({c10.t_dec:.4f}, {c10.t_ncl:.4f}, {c10.t_diss:.4f})")
    assert ok


def test_10_headline_ratio(acceptance_log):
    start = time.perf_counter()
    ct = dy.characteristic_times(1000, 0.0, with_ncl=False)
    elapsed = time.perf_counter() - start
    ok = abs(ct.ratio_r - 4.04) <= 0.05 and elapsed < 60
    acceptance_log(10, "headline ratio", ok, f"r(1000, 0) = {ct.ratio_r:.4f} (4.04 +- 0.05), {elapsed:.2f} s (< 60 s)")
    assert ok


@pytest.mark.slow
def test_10_headline_ratio_hot_bath(acceptance_log):
    start = time.perf_counter()
    ct = dy.characteristic_times(1000, 100.0, with_ncl=False)
    elapsed = time.perf_counter() - start
    ok = abs(ct.ratio_r - 350) <= 35 and elapsed < 600
    acceptance_log(10, "headline ratio, slow extension", ok,
                   f"r(1000, 100) = {ct.ratio_r:.1f} (350 +- 10%), {elapsed:.1f} s (< 600 s)")
    assert ok


def test_11_symmetry_during_evolution(acceptance_log):
    worst_sym = 0.0
    misplaced = 0
    for n in (3, 5):
        nbar = 1.0
        horizon = 2 * dy.characteristic_times(n, nbar, with_ncl=False).t_diss
        tr = dy.evolve(density_of(polar_cat(n)), nbar, horizon, 10, keep_matrices=True)
        theta = np.linspace(0, np.pi, 181)[:, None]
        phi = np.linspace(0, 2 * np.pi, 24 * n, endpoint=False)[None, :]
        for mat in tr.matrices:
            chi = characteristic_matrix(mat)
            w = wigner_at(chi, theta, phi)
            w_rot = wigner_at(chi, theta, phi + 2 * np.pi / n)
            worst_sym = max(worst_sym, np.max(np.abs(w - w_rot)))
            # minimum over the sphere must sit on a phi = pi/N (mod 2pi/N) section
            sec_min, _ = section_extrema(chi)
            if sec_min > w.min() + 1e-12:
                misplaced += 1
            row, col = np.unravel_index(np.argmin(w), w.shape)
            if np.ptp(w[row]) < 1e-12:
                continue  # minimum at a pole, which lies on every section
            offset = (phi[0, col] - np.pi / n) % (2 * np.pi / n)
            if min(offset, 2 * np.pi / n - offset) > 1e-9:
                misplaced += 1
    ok = worst_sym < 1e-10 and misplaced == 0
    acceptance_log(11, "C_N symmetry", ok,
                   f"max |W(phi + 2pi/N) - W(phi)| = {worst_sym:.1e} (tol 1e-10); minimum off the "
                   f"phi = pi/N section in {misplaced} of 20 fields (N=3,5, 10 times each)")
    assert ok


def test_12_t_ncl_bracketing(acceptance_log):
    n, nbar = 5, 10.0
    t_star = dy.characteristic_times(n, nbar).t_ncl
    grid = np.linspace(0, 2 * t_star, 20)
    tr = dy.with_nonclassicality(dy.evolve_polar_cat(n, nbar, grid[-1], 2, extra_times=grid))
    nu = np.array([tr.nu[np.searchsorted(tr.times, t)] for t in grid])
    before = nu[grid < t_star]
    after = nu[grid > t_star]
    cold = dy.characteristic_times(n, 0.0).t_ncl
    ok = bool(np.all(before > 0) and np.all(after == 0) and cold is None)
    acceptance_log(12, "t_ncl bracketing", ok,
                   f"t_ncl={t_star:.5f}; nu>0 at {np.count_nonzero(before > 0)}/{before.size} earlier "
                   f"grid points, nu==0 at {np.count_nonzero(after == 0)}/{after.size} later ones; "
                   f"t_ncl at nbar=0 is {cold}")
    assert ok
