"""Free energy of crossover densities and a grid minimiser for it.

The functional is

    F_c[rho] = int Q rho dA - c iint log|z - w| rho(z) rho(w) dA dA
               + int rho log rho dA

with dA the Lebesgue measure divided by pi, so that rho = pi g for the
radial density g used elsewhere. On the line dA is replaced by d lambda.
For radial densities the angular average of log|z - w| is log max(r, r').
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, simpson
from scipy.signal import fftconvolve

from .crossover1d import Density1D
from .errors import NoConvergence
from .potentials import PotentialSpec, eval_1d, radial_parameters
from .radial import RadialDensity, RadialProblem, default_r_max

__all__ = [
    "FreeEnergyValue",
    "free_energy",
    "minimize_free_energy_radial",
    "angular_log_average",
    "check_log_kernel",
]


@dataclass(frozen=True)
class FreeEnergyValue:
    energy_term: float
    interaction_term: float
    entropy_term: float

    @property
    def total(self) -> float:
        return self.energy_term + self.interaction_term + self.entropy_term


def angular_log_average(r: float, rp: float, n: int = 4096) -> float:
    """(1/2 pi) int_0^{2 pi} log|r - rp e^{i theta}| d theta by the trapezoid rule."""
    theta = 2.0 * math.pi * np.arange(n) / n
    return float(np.mean(np.log(np.abs(r - rp * np.exp(1j * theta)))))


def check_log_kernel(samples: int = 20, seed: int = 0, tol: float = 1e-10) -> float:
    """Compare the angular average of log|z - w| with log max(r, r').

    Returns the largest discrepancy over random radius pairs and raises
    ``AssertionError`` if it exceeds ``tol``.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        r, rp = rng.uniform(0.05, 5.0, size=2)
        if abs(r - rp) < 0.05:
            continue
        worst = max(worst, abs(angular_log_average(r, rp) - math.log(max(r, rp))))
    if worst > tol:
        raise AssertionError(f"radial log-kernel identity violated by {worst:.3g}")
    return worst


def _radial_free_energy(density: RadialDensity, c: float) -> FreeEnergyValue:
    r = density.grid
    g = density.values
    problem = density.problem
    weight = 2.0 * math.pi * r * g  # d mu / dr, total mass one
    energy = simpson(problem.f(r) * weight, x=r)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_rho = np.where(g > 0, np.log(math.pi * g), 0.0)
        log_r = np.where(r > 0, np.log(r), 0.0)
    entropy = simpson(weight * log_rho, x=r)
    # iint log max(r, r') d mu d mu = 2 int log r m(r) d mu(r)
    mass = cumulative_simpson(weight, x=r, initial=0.0)
    interaction = -c * 2.0 * simpson(log_r * mass * weight, x=r)
    return FreeEnergyValue(float(energy), float(interaction), float(entropy))


def _cell_log_kernel(n: np.ndarray) -> np.ndarray:
    """Average of log|n + s - t| over s, t uniform on [0, 1]."""

    def antider(x):
        x = np.abs(np.asarray(x, dtype=float))
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(x > 0, 0.5 * x * x * np.log(x), 0.0) - 0.75 * x * x

    return antider(n + 1) - 2.0 * antider(n) + antider(n - 1)


def _line_free_energy(density: Density1D, c: float, cells: int = 8000) -> FreeEnergyValue:
    # Resample on a uniform cell grid; cell averages avoid lambda = 0.
    lo, hi = density.grid[0], density.grid[-1]
    h = (hi - lo) / cells
    mid = lo + h * (np.arange(cells) + 0.5)
    rho = np.interp(mid, density.grid, density.values)
    q = rho * h
    q /= q.sum()
    rho = q / h
    spec = PotentialSpec.gaussian_log_1d(density.params.a)
    value, _ = eval_1d(spec, mid)
    energy = float(np.sum(value * q))
    with np.errstate(divide="ignore", invalid="ignore"):
        entropy = float(np.sum(np.where(q > 0, q * np.log(rho), 0.0)))
    offsets = np.arange(-(cells - 1), cells)
    kernel = math.log(h) + _cell_log_kernel(offsets.astype(float))
    pot = fftconvolve(q, kernel, mode="valid")
    interaction = -c * float(np.sum(q * pot))
    return FreeEnergyValue(energy, interaction, entropy)


def free_energy(density, c: float) -> FreeEnergyValue:
    """Evaluate the three terms of F_c for a normalised density.

    Args:
        density: A :class:`RadialDensity` (planar, area measure dA) or a
            :class:`Density1D` (line, Lebesgue measure).
        c: Coupling of the logarithmic interaction.

    Returns:
        Energy, interaction and entropy terms; ``total`` is their sum.
        For the planar Gaussian e^(-r^2)/pi at c = 0 the terms are 1, 0, -1.
    """
    if isinstance(density, RadialDensity):
        return _radial_free_energy(density, c)
    if isinstance(density, Density1D):
        return _line_free_energy(density, c)
    raise TypeError(f"unsupported density type {type(density).__name__}")


class _RadialCells:
    """Dual-cell discretisation of a radial density on a uniform node grid."""

    def __init__(self, problem: RadialProblem):
        r = problem.grid
        self.r = r
        faces = np.concatenate(([0.0], 0.5 * (r[:-1] + r[1:]), [r[-1]]))
        self.area = 0.5 * (faces[1:] ** 2 - faces[:-1] ** 2)  # int r dr per cell
        self.f = problem.f(r)
        log_r = np.empty_like(r)
        log_r[1:] = np.log(r[1:])
        # mean of log max(r, r') for two points of the disc of radius h/2
        log_r[0] = math.log(faces[1]) - 0.25
        self.log_r = log_r

    def potential(self, q: np.ndarray) -> np.ndarray:
        """U_i = sum_j q_j log max(r_i, r_j) in O(M)."""
        inside = np.cumsum(q)
        outside = np.cumsum((q * self.log_r)[::-1])[::-1]
        outside = np.append(outside[1:], 0.0)
        return self.log_r * inside + outside

    def log_rho(self, log_q: np.ndarray) -> np.ndarray:
        return log_q - np.log(2.0 * self.area)

    def energy(self, log_q: np.ndarray, c: float) -> float:
        q = np.exp(log_q)
        return float(
            np.sum(q * self.f) - c * np.sum(q * self.potential(q)) + np.sum(q * self.log_rho(log_q))
        )


def _normalise_log(log_q: np.ndarray) -> np.ndarray:
    shift = log_q.max()
    return log_q - shift - math.log(np.sum(np.exp(log_q - shift)))


def minimize_free_energy_radial(
    potential: PotentialSpec,
    c: float,
    grid=None,
    *,
    tol: float = 1e-11,
    max_iter: int = 20000,
    debug: bool = False,
) -> RadialDensity:
    """Minimise the discretised radial free energy by entropic mirror descent.

    Each node of a uniform grid owns the annulus between neighbouring
    midpoints and carries mass q_i. The update
    log q <- (1 - eta) log q + eta (log(2 A_i) - f + 2 c U(q)) + const
    is a mirror-descent step on the probability simplex; eta starts at one
    and is halved whenever the discrete free energy (c > 0) or the
    stationarity residual (c <= 0) fails to decrease. For c < 0 a literal
    ascent diverges, so the same damped iteration is used to locate the
    stationary point.

    Args:
        potential: A radial family.
        c: Coupling, c > -2.
        grid: Uniform node radii from 0; defaults to 4001 nodes up to
            :func:`default_r_max`.
        tol: Target for the spread of the discrete gradient over the support.
        max_iter: Iteration cap.
        debug: Verify the radial log-kernel identity before starting.

    Returns:
        RadialDensity with ``method == "minimizer"``; ``info`` holds the
        final stationarity residual and the iteration count.

    Raises:
        NoConvergence: If ``tol`` is not reached within ``max_iter``.
    """
    radial_parameters(potential)
    if debug:
        check_log_kernel()
    if grid is None:
        grid = np.linspace(0.0, default_r_max(potential, c), 4001)
    problem = RadialProblem(potential, c, None, np.asarray(grid, dtype=float))
    cells = _RadialCells(problem)
    base = np.log(2.0 * cells.area) - cells.f  # log q of the c = 0 solution
    log_q = _normalise_log(base)

    def gradient(lq):
        q = np.exp(lq)
        return cells.f - 2.0 * c * cells.potential(q) + cells.log_rho(lq) + 1.0

    def stationarity(lq):
        q = np.exp(lq)
        grad = gradient(lq)
        support = q > 1e-12 * q.max()
        mean = np.sum(q * grad)
        return float(np.max(np.abs(grad[support] - mean)))

    eta = 1.0
    value = cells.energy(log_q, c)
    resid = stationarity(log_q)
    for iteration in range(max_iter):
        if resid < tol:
            break
        target = base + 2.0 * c * cells.potential(np.exp(log_q))
        while True:
            trial = _normalise_log((1.0 - eta) * log_q + eta * target)
            trial_resid = stationarity(trial)
            trial_value = cells.energy(trial, c)
            if c > 0:
                accept = trial_value <= value + 1e-15 * abs(value)
            else:
                accept = trial_resid < resid
            if accept or eta < 1e-6:
                break
            eta *= 0.5
        log_q, value, resid = trial, trial_value, trial_resid
        eta = min(1.0, 1.5 * eta)
    else:
        raise NoConvergence(f"free-energy descent stalled at residual {resid:.3g}")
    q = np.exp(log_q)
    g = q / (2.0 * math.pi * cells.area)
    # mass by the cell rule the functional was discretised with
    mass = 2.0 * math.pi * float(np.sum(cells.area * g))
    density = RadialDensity(problem, g, float(g[0]), abs(mass - 1.0), method="minimizer")
    density.info = {"stationarity": resid, "iterations": iteration, "free_energy": value}
    return density
