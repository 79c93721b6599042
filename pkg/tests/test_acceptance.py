"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line.  Tolerances are pinned here and nowhere else."""

import contextlib
import math
import time

import numpy as np
import pytest

from wallgas import (
    EnsembleParams,
    a_crit,
    b_crit,
    density_for,
    energy,
    energy_alpha0_closed,
    energy_fullline,
    equilibrium_check,
    l1_distance,
    left_rate,
    log_potential_quad,
    min_eigenvalue_samples,
    normalize_check,
    potential_for,
    right_rate,
    robin_constant,
    run_and_histogram,
    tail_coefficient,
    theta,
)
from wallgas.audit import run_audit
from wallgas.density import reflect_negative
from wallgas.orthopoly import build_basis, convergence_study, density_mass
from wallgas.potential import external_potential, robin_constant_closed

SQRT2 = math.sqrt(2.0)

PARAM_GRID = [
    (a, s)
    for a in (0.0, 0.1, 0.5, 2.0)
    for s in (-2.0, -1.0, 0.0, 0.3, 1.0, 2.0)
    if a == 0.0 or s >= 0.0
]


@contextlib.contextmanager
def criterion(num, name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num:2d} {name}: FAIL")
        raise
    print(f"ACCEPTANCE {num:2d} {name}: PASS")


def test_01_critical_edges():
    with criterion(1, "critical edges"):
        assert a_crit(2.0) == pytest.approx(0.618, abs=1e-3)
        assert b_crit(2.0) == pytest.approx(2.562, abs=1e-3)
        assert a_crit(0.1) == pytest.approx(0.00796, abs=1e-4)
        assert b_crit(0.1) == pytest.approx(1.71004, abs=1e-4)
        a_crit(2.0)  # warm
        t0 = time.perf_counter()
        for _ in range(100):
            a_crit(2.0)
            b_crit(0.1)
        per_call = (time.perf_counter() - t0) / 200.0
        assert per_call < 1e-3, f"{per_call * 1e3:.3f} ms per call"


def test_02_universal_constant():
    with criterion(2, "theta(0) = log(3)/4 via full pipeline"):
        theta(0.0)  # warm the solver/jit-free path before timing
        t0 = time.perf_counter()
        val = theta(0.0)
        dt = time.perf_counter() - t0
        assert val == pytest.approx(math.log(3.0) / 4.0, abs=1e-8)
        assert dt < 1.0, f"{dt:.3f} s"


def test_03_robin_constant():
    with criterion(3, "Robin constant, dual paths on the grid"):
        d0 = density_for(EnsembleParams(0.0, sigma=0.0))
        target = 0.5 + 0.5 * math.log(2.0) + 0.5 * math.log(3.0)
        closed = robin_constant(d0, check=False)
        quad_path = log_potential_quad(0.8, d0) + 0.5 * external_potential(0.8, 0.0)
        assert closed == pytest.approx(target, abs=1e-8)
        assert quad_path == pytest.approx(target, abs=1e-8)
        for alpha, sigma in PARAM_GRID:
            d = density_for(EnsembleParams(alpha, sigma=sigma))
            a, b = d.support
            x0 = a + 0.5 * (b - a)
            c1 = robin_constant(d, check=False)
            c2 = log_potential_quad(x0, d) + 0.5 * external_potential(x0, alpha)
            assert abs(c1 - c2) < 1e-7, (alpha, sigma, c1, c2)


def test_04_energies():
    with criterion(4, "closed-form energies"):
        assert energy(EnsembleParams(0.0, sigma=0.0)).energy == pytest.approx(
            0.75 + 0.5 * math.log(2.0) + 0.5 * math.log(3.0), abs=1e-8
        )
        for s in (-SQRT2, -2.0, -5.0):
            assert energy(EnsembleParams(0.0, sigma=s)).energy == pytest.approx(
                0.75 + 0.5 * math.log(2.0), abs=1e-8
            )
        assert energy_fullline(0.1) == pytest.approx(1.23416, abs=1e-5)
        for s in (-SQRT2, -1.0, 0.0, 1.0, 2.0):
            pipeline = energy(EnsembleParams(0.0, sigma=s)).energy
            assert pipeline == pytest.approx(energy_alpha0_closed(s), abs=1e-7)


def test_05_normalization_and_identity():
    with criterion(5, "density normalization + wall/pinned identity"):
        for alpha, sigma in PARAM_GRID:
            d = density_for(EnsembleParams(alpha, sigma=sigma))
            assert abs(normalize_check(d) - 1.0) < 1e-8, (alpha, sigma)
        for alpha, sigma in ((0.0, -1.0), (0.0, -2.0), (0.5, -0.3), (2.0, -1.0)):
            d = reflect_negative(alpha, sigma)
            assert abs(normalize_check(d) - 1.0) < 1e-8, (alpha, sigma)
        for alpha in (0.1, 0.5, 2.0):
            d = density_for(EnsembleParams(alpha, sigma=0.0))
            a, b = d.support
            xs = np.linspace(a, b, 1002)[1:-1]
            pinned = d.pdf(xs)
            coef = 2.0 * alpha * math.sqrt(a / b)
            wall = np.sqrt((b - xs) / (xs - a)) * (2 * xs + b - a - coef / xs) / (2 * np.pi)
            assert np.max(np.abs(pinned - wall)) < 1e-12, alpha


def test_06_equilibrium_conditions():
    with criterion(6, "Euler-Lagrange conditions on the grid"):
        t0 = time.perf_counter()
        for alpha, sigma in PARAM_GRID:
            rep = equilibrium_check(
                potential_for(density_for(EnsembleParams(alpha, sigma=sigma))), grid_size=30
            )
            assert rep.sup_support_residual < 1e-6, (alpha, sigma, rep)
            assert rep.min_off_support_slack >= -1e-8, (alpha, sigma, rep)
        dt = time.perf_counter() - t0
        assert dt < 30.0, f"{dt:.1f} s"


def test_07_rate_function_tails():
    with criterion(7, "rate-function tails"):
        eps = 1e-3
        cube = right_rate(-SQRT2 + eps, 0.0) / eps**3
        assert cube == pytest.approx(SQRT2 / 6.0, rel=0.02)
        assert tail_coefficient(0.0) == 2.0**2.75 / 3.0
        for alpha in (0.0, 0.1, 2.0):
            ac = a_crit(alpha) if alpha > 0 else -SQRT2
            scale = ac if alpha > 0 else 1.0
            e = 1e-4 * scale
            fit = left_rate(ac - e, alpha) / e**1.5
            assert fit == pytest.approx(tail_coefficient(alpha), rel=0.01), alpha


MC_CASES = [
    (0.0, -10.0, -SQRT2),
    (0.0, 0.0, 0.0),
    (0.5, 0.0, None),  # edge = a_c(0.5), resolved at runtime
    (2.0, 0.0, None),
]


def test_08_monte_carlo():
    with criterion(8, "Monte Carlo vs analytic (n=32, 2e5 sweeps)"):
        t0 = time.perf_counter()
        for alpha, sigma, edge in MC_CASES:
            params = EnsembleParams(alpha, beta=2.0, sigma=sigma)
            hist = run_and_histogram(params, 32, 200_000, seed=12345)
            d = density_for(params)
            l1 = l1_distance(hist, d)
            assert l1 < 0.10, (alpha, sigma, l1)
            predicted = edge if edge is not None else a_crit(alpha)
            series = min_eigenvalue_samples(params, 32, replicas=1, sweeps=30_000, seed=777)
            mean_min = float(np.mean(series[0]))
            assert abs(mean_min - predicted) < 0.15, (alpha, sigma, mean_min, predicted)
        dt = time.perf_counter() - t0
        assert dt < 300.0, f"{dt:.0f} s"


def test_09_finite_n_approximation():
    with criterion(9, "finite-n orthopolynomial densities"):
        b7 = build_basis(7, 0.0)
        b5 = build_basis(5, 2.5)
        assert density_mass(b7) == pytest.approx(1.0, abs=1e-8)
        assert density_mass(b5) == pytest.approx(1.0, abs=1e-8)
        # qualitative overlay agreement on the trimmed bulk
        from wallgas.orthopoly import finite_n_grid

        for basis, alpha in ((b7, 0.0), (b5, 0.5)):
            d = density_for(EnsembleParams(alpha, sigma=0.0))
            lo, hi = d.support
            th = hi - lo
            xs = np.linspace(lo + 0.1 * th, hi - 0.1 * th, 80)
            l1 = float(np.trapezoid(np.abs(finite_n_grid(basis, xs) - d.pdf(xs)), xs))
            assert l1 < 0.08, (alpha, l1)
        rows = convergence_study(0.0, [7, 15])
        assert rows[1].l1_trimmed < rows[0].l1_trimmed
        for r in rows:
            assert r.mass == pytest.approx(1.0, abs=1e-8)


def test_10_discrepancy_report():
    with criterion(10, "published-vs-computed discrepancy report"):
        entries = {e.key: e for e in run_audit()}
        required = {"small-alpha-slope", "critical-energy-closed-form", "density-linear-coefficient"}
        assert required <= set(entries)
        slope = entries["small-alpha-slope"]
        assert slope.quoted["intro_constant"] == 0.3482
        assert slope.quoted["expansion_constant"] == 0.6045
        assert slope.computed["theta_prime_zero"] == pytest.approx(math.log(3.0) / 2.0, abs=1e-6)
        ce = entries["critical-energy-closed-form"]
        assert ce.quoted["closed_form_alpha1e-3"] == pytest.approx(-0.25, abs=1e-2)
        assert ce.computed["pipeline_alpha1e-3"] == pytest.approx(1.6459, abs=5e-3)
        dc = entries["density-linear-coefficient"]
        assert dc.quoted["mass_with_alpha_coefficient"] == pytest.approx(
            dc.computed["predicted_alpha_variant_mass"], abs=1e-9
        )
        assert dc.computed["mass_with_2alpha_coefficient"] == pytest.approx(1.0, abs=1e-8)
