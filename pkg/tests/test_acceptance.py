"""Acceptance criteria; each test prints one ``[acceptance]`` line with its verdict."""

import math
import time
import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from coulomb_crossover import checks
from coulomb_crossover.crossover1d import (
    Crossover1DParams,
    c_zero_density,
    crossover_density,
    density_gauss_log,
    gaussian_density_closed_form,
    riccati_residual,
)
from coulomb_crossover.errors import Collapsed, OutsideValidity
from coulomb_crossover.estimators import bin_average_radial, estimate_radial_density
from coulomb_crossover.free_energy import minimize_free_energy_radial
from coulomb_crossover.potentials import PotentialSpec
from coulomb_crossover.radial import (
    RadialProblem,
    limit_density,
    ode_integral_identity,
    small_r_expansion,
    solve_radial,
)
from coulomb_crossover.sampler import GasConfig, burn_in, run_chain

FIGURE_C = (200.0, 10.0, 1.0, 0.1, -1.0, -1.9)


@pytest.fixture(scope="module")
def figure_solutions():
    """{(alpha, c): (density, seconds)} for the radial figure matrix."""
    out = {}
    for alpha in (1.0, 2.0):
        for c in FIGURE_C:
            start = time.perf_counter()
            density = solve_radial(RadialProblem(PotentialSpec.radial_monomial(alpha), c))
            out[alpha, c] = density, time.perf_counter() - start
    return out


def _bulk_sup(density, alpha, c):
    """sup |g - g_inf| on [0.1 b, 0.9 b] relative to sup g_inf there."""
    envelope = limit_density(density.problem, "c_infinity").values
    b = (2 * c / alpha) ** (1 / (2 * alpha))
    bulk = (density.grid >= 0.1 * b) & (density.grid <= 0.9 * b)
    return np.max(np.abs(density.values[bulk] - envelope[bulk])) / np.max(envelope[bulk])


def _slowest(solutions, alpha):
    return max(t for (a, _), (_, t) in solutions.items() if a == alpha)


def test_criterion_1_large_c_plateau(figure_solutions, acceptance):
    err = _bulk_sup(figure_solutions[1.0, 200.0][0], 1.0, 200.0)
    slowest = _slowest(figure_solutions, 1.0)
    ok = err < 0.05 and slowest < 10.0
    assert acceptance("1(i) alpha=1, c=200 plateau", ok,
                      f"bulk sup error {err:.3%} (< 5%), slowest solve {slowest:.2f} s (< 10 s)")


def test_criterion_1_small_c_gaussian(figure_solutions, acceptance):
    density = figure_solutions[1.0, 0.1][0]
    envelope = limit_density(density.problem, "c_zero").values
    err = np.max(np.abs(density.values - envelope)) / np.max(envelope)
    assert acceptance("1(ii) alpha=1, c=0.1 near e^{-r^2/2}/(2 pi)", err < 0.05,
                      f"sup error {err:.3%} (< 5%)")


def test_criterion_1_dirac_approach(figure_solutions, acceptance):
    g0 = figure_solutions[1.0, -1.9][0].g0
    peak = 1 / (2 * math.pi)
    assert acceptance("1(iii) alpha=1, c=-1.9 peak", g0 > 10 * peak,
                      f"g(0) = {g0:.4g} vs 10 x c=0 peak = {10 * peak:.4g}")


def test_criterion_2_parabola(figure_solutions, acceptance):
    err = _bulk_sup(figure_solutions[2.0, 200.0][0], 2.0, 200.0)
    slowest = _slowest(figure_solutions, 2.0)
    ok = err < 0.05 and slowest < 10.0
    assert acceptance("2 alpha=2, c=200 parabola envelope", ok,
                      f"bulk sup error {err:.3%} (< 5%), slowest solve {slowest:.2f} s (< 10 s)")


def test_criterion_3_normalization(figure_solutions, acceptance):
    mass = max(d.normalization_residual for d, _ in figure_solutions.values())
    ident = max(abs(ode_integral_identity(d) - c) / abs(c) for (_, c), (d, _) in figure_solutions.items())
    ok = mass < 1e-6 and ident < 0.02
    assert acceptance("3 normalization and ODE identity", ok,
                      f"max |mass - 1| = {mass:.2e} (< 1e-6), max identity error {ident:.2e} (< 2%)")


def test_criterion_4_oracle_agreement(acceptance):
    start = time.perf_counter()
    worst = 0.0
    pot = PotentialSpec.radial_monomial(1.0)
    for c in (0.5, 1.0, 5.0):
        solved = solve_radial(RadialProblem(pot, c))
        minimized = minimize_free_energy_radial(pot, c)
        bulk = solved.values > 1e-3 * solved.values.max()
        err = np.max(np.abs(minimized.values[bulk] - solved.values[bulk])) / solved.values.max()
        worst = max(worst, err)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-3 and elapsed < 60.0
    assert acceptance("4 solver vs free-energy minimizer", ok,
                      f"max bulk sup error {worst:.2e} (< 1e-3), {elapsed:.1f} s (< 60 s)")


@pytest.mark.slow
def test_criterion_5_monte_carlo(acceptance):
    start = time.perf_counter()
    pot = PotentialSpec.radial_monomial(1.0)
    config = GasConfig(2, pot, 1000, c=1.0, seed=5, burn_in=10_000)
    ensemble, _ = burn_in(config)
    edges = np.linspace(0.0, 3.5, 36)
    est = estimate_radial_density(run_chain(config, ensemble, sweeps=200_000, thin=5), edges)
    theory = bin_average_radial(solve_radial(RadialProblem(pot, 1.0)), edges)
    z = np.abs(est.normalized_density - theory) / est.std_error
    frac = float(np.mean(z < 3.0))
    elapsed = time.perf_counter() - start
    ok = frac >= 0.95 and elapsed < 600.0
    assert acceptance("5 Monte Carlo N=1000 vs mean field", ok,
                      f"{frac:.1%} of {z.size} bins within 3 errors (>= 95%), {elapsed:.0f} s (< 600 s)")


def test_criterion_6_line_densities(acceptance):
    worst_mass = worst_even = worst_pcf = worst_c0 = slowest = 0.0
    collapsed = []
    for a in (0.5, 0.0, -0.5):
        for c in (10.0, 1.0, 0.0, -0.5, -0.9):
            params = Crossover1DParams(c, a)
            start = time.perf_counter()
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", OutsideValidity)
                    d = crossover_density(params)
            except Collapsed:
                collapsed.append(f"(a={a:g}, c={c:g})")
                continue
            slowest = max(slowest, time.perf_counter() - start)
            f = lambda x: density_gauss_log(params, x) / d.z_norm  # noqa: E731,B023
            mass = 2 * quad(f, 0, d.grid[-1], points=[0.5, 1, 2, 4], limit=400, epsabs=1e-13)[0]
            worst_mass = max(worst_mass, abs(mass - 1))
            worst_even = max(worst_even, np.max(np.abs(d.values - d.values[::-1])) / np.max(d.values))
            if a == 0.0:
                pcf = gaussian_density_closed_form(c, d.grid)
                worst_pcf = max(worst_pcf, np.max(np.abs(d.values / pcf - 1)))
            if c == 0.0:
                keep = d.grid != 0
                exact = c_zero_density(a, d.grid[keep])
                worst_c0 = max(worst_c0, np.max(np.abs(d.values[keep] / exact - 1)))
    ok = (not collapsed and worst_mass < 1e-8 and worst_even < 1e-12 and worst_pcf < 1e-9
          and worst_c0 < 1e-12 and slowest < 5)
    assert acceptance(
        "6 line densities", ok,
        f"not normalizable: {', '.join(collapsed) or 'none'}; mass {worst_mass:.1e}, "
        f"evenness {worst_even:.1e}, parabolic cylinder {worst_pcf:.1e} (< 1e-9), c=0 closed form {worst_c0:.1e} (< 1e-12), slowest {slowest:.2f} s (< 5 s)",
    )


def test_criterion_7_riccati(acceptance):
    points = [complex(x, y) for x, y in
              [(0.5, 0.7), (1.0, 1.0), (-2.0, 0.5), (0.3, -2.0), (0.0, 1.2),
               (3.0, 2.0), (-1.0, -1.0), (4.0, -0.5), (-0.4, 3.0), (1.5, -0.3)]]
    worst = 0.0
    for c in (-0.5, 1.0, 5.0):
        for a in (-0.4, 0.0, 0.5):
            d = crossover_density(Crossover1DParams(c, a))
            worst = max(worst, max(riccati_residual(d, z) for z in points))
    assert acceptance("7 Riccati residual", worst < 1e-4, f"max over 3x3x10 = {worst:.2e} (< 1e-4)")


def test_criterion_8_ward_suite(acceptance):
    report = checks.run_checks(["ward", "loop"])
    ward = [e for e in report.entries if e.name.startswith("ward[")]
    controls = [e for e in report.entries if e.name.startswith("ward_control")]
    loop = [e for e in report.entries if e.name.startswith("loop")]
    worst = max(e.value for e in ward)
    ok = report.all_passed and len(ward) == 54 and len(controls) == 6
    assert acceptance(
        "8 Ward identity suite", ok,
        f"{sum(e.passed for e in ward)}/{len(ward)} within 3 errors (worst {worst:.2f}), "
        f"{sum(e.passed for e in controls)}/{len(controls)} mutation controls detected, "
        f"loop equation {'ok' if all(e.passed for e in loop) else 'FAIL'}",
    )


def test_criterion_9_small_r(acceptance):
    worst = 0.0
    for alpha in (1.0, 2.0):
        density = solve_radial(RadialProblem(PotentialSpec.radial_monomial(alpha), 1.0))
        near = density.grid <= 0.3
        coef = np.polynomial.polynomial.polyfit(density.grid[near] ** 2, np.log(density.values[near]), 4)
        expected = small_r_expansion(density.problem, density.g0, 2)
        worst = max(worst, np.max(np.abs(coef[1:3] / expected - 1)))
    assert acceptance("9 small-r coefficients", worst < 1e-3, f"max relative error {worst:.2e} (< 1e-3)")


def test_criterion_10_specfun(acceptance):
    start = time.perf_counter()
    results = checks.specfun_checks()
    elapsed = time.perf_counter() - start
    failed = [n for n, v, tol in results if not ((v == 0.0) if tol == 0.0 else (v < tol))]
    ok = not failed and elapsed < 5.0
    assert acceptance("10 special-function suite", ok,
                      f"{len(results) - len(failed)}/{len(results)} properties, {elapsed:.2f} s (< 5 s)")
