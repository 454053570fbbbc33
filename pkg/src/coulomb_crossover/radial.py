"""Radial crossover densities of planar Coulomb gases.

For a radial potential Q(z) = f(|z|) = s r^(2 alpha) the crossover density
g = rho / pi solves

    4 pi c g = f'' + f'/r + (log g)'' + (log g)'/r,

with g regular at the origin and decaying at infinity. Writing
psi = log g and m(r) = 2 pi int_0^r t g(t) dt, this is the first-order
system

    psi' = (2 c m - r f') / r,        m' = 2 pi r e^psi,

and the decaying solution is the one with m(inf) = 1. Two solvers are
provided: shooting on g(0) (the default) and a finite-volume Newton
relaxation with the Robin condition r psi' = 2c - r f' at the outer radius.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson, solve_ivp
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded
from scipy.optimize import brentq

from .errors import BlowUp, NoBracket, NoConvergence, RangeError, UnsupportedOrder
from .potentials import PotentialSpec, radial_parameters

__all__ = [
    "RadialProblem",
    "RadialDensity",
    "solve_radial",
    "small_r_expansion",
    "limit_density",
    "ode_integral_identity",
    "mean_field_residual",
    "default_r_max",
]

R_START = 1e-4  # shooting starts from the small-r series at this radius
DEFAULT_POINTS = 4001
# Largest drop of log g below its bulk value kept on the default grid.
MAX_LOG_DROP = 600.0
NORMALIZATION_TOL = 1e-6
IDENTITY_RTOL = 0.02


def _c_zero_height(alpha: float, s: float) -> float:
    return s ** (1.0 / alpha) / (math.pi * math.gamma(1.0 + 1.0 / alpha))


def _edge_radius(alpha: float, s: float, c: float) -> float:
    return (c / (s * alpha)) ** (1.0 / (2.0 * alpha))


def default_r_max(potential: PotentialSpec, c: float) -> float:
    """Outer radius where both limiting envelopes are below 1e-12, doubled.

    The radius is reduced if the large-r law r^(2c) e^(-f) would otherwise
    fall more than ``MAX_LOG_DROP`` below the bulk, so that g stays
    representable in double precision.
    """
    alpha, s = radial_parameters(potential)
    k = _c_zero_height(alpha, s)
    r0 = (math.log(k / 1e-12) / s) ** (1.0 / (2.0 * alpha))
    b = _edge_radius(alpha, s, c) if c > 0 else 0.0
    r_max = 2.0 * max(r0, b)

    start = max(b, 1.0)
    log_start = 2.0 * c * math.log(start) - s * start ** (2 * alpha)

    def drop(r):
        return 2.0 * c * math.log(r) - s * r ** (2 * alpha) - log_start + MAX_LOG_DROP

    if r_max > start and drop(r_max) < 0:
        r_max = brentq(drop, start, r_max)
    return r_max


@dataclass(frozen=True)
class RadialProblem:
    """A radial mean-field problem.

    Attributes:
        potential: A radial family (``radial_monomial`` or ``gaussian_2d``).
        c: Crossover parameter, c > -2.
        r_max: Outer radius; defaults to :func:`default_r_max`.
        grid: Increasing radii from 0 to ``r_max``; defaults to a uniform
            grid of ``DEFAULT_POINTS`` points.
    """

    potential: PotentialSpec
    c: float
    r_max: float | None = None
    grid: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        radial_parameters(self.potential)  # raises for non-radial families
        if not self.c > -2.0:
            raise RangeError(f"c must exceed -2 in two dimensions, got {self.c}")
        r_max = self.r_max
        if self.grid is not None:
            grid = np.asarray(self.grid, dtype=float)
            if grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
                raise ValueError("grid must start at 0 and increase strictly")
            if r_max is not None and not math.isclose(grid[-1], r_max):
                raise ValueError("grid must end at r_max")
            r_max = float(grid[-1])
        else:
            if r_max is None:
                r_max = default_r_max(self.potential, self.c)
            grid = np.linspace(0.0, r_max, DEFAULT_POINTS)
        object.__setattr__(self, "r_max", float(r_max))
        object.__setattr__(self, "grid", grid)

    @property
    def alpha(self) -> float:
        return radial_parameters(self.potential)[0]

    @property
    def strength(self) -> float:
        return radial_parameters(self.potential)[1]

    def f(self, r):
        return self.strength * np.asarray(r, dtype=float) ** (2.0 * self.alpha)

    def df(self, r):
        alpha = self.alpha
        return 2.0 * alpha * self.strength * np.asarray(r, dtype=float) ** (2.0 * alpha - 1.0)

    def lap4(self, r):
        """f'' + f'/r, i.e. four times the Laplacian of Q."""
        alpha = self.alpha
        return 4.0 * self.strength * alpha * alpha * np.asarray(r, dtype=float) ** (2.0 * alpha - 2.0)

    def with_grid(self, grid) -> "RadialProblem":
        return RadialProblem(self.potential, self.c, None, np.asarray(grid, dtype=float))


@dataclass
class RadialDensity:
    """Radial density g(r) = rho / pi on the grid of its problem.

    Attributes:
        problem: The problem that was solved.
        values: g at each grid radius.
        g0: g(0).
        normalization_residual: |2 pi int r g dr - 1| by Simpson quadrature.
        method: Which solver produced the values.
        ode_residual: Largest relative mean-field residual on the interior
            (NaN when not computed).
        log_slope_error: Relative mismatch of r (log g)' at r_max against
            the large-r law 2c - r f'.
        candidates: Every g(0) found to give a decaying solution.
        info: Solver-specific diagnostics.
    """

    problem: RadialProblem
    values: np.ndarray
    g0: float
    normalization_residual: float
    method: str = "shooting"
    ode_residual: float = float("nan")
    log_slope_error: float = float("nan")
    candidates: tuple = ()
    info: dict = field(default_factory=dict)

    @property
    def grid(self) -> np.ndarray:
        return self.problem.grid

    @property
    def c(self) -> float:
        return self.problem.c

    @property
    def multiple_solutions(self) -> bool:
        return len(self.candidates) > 1


def _mass(r: np.ndarray, g: np.ndarray) -> float:
    return 2.0 * math.pi * simpson(r * g, x=r)


def small_r_expansion(problem: RadialProblem, g0: float, order: int = 2) -> np.ndarray:
    """Coefficients a_j of log g(r) = log g0 + sum_j a_j r^(2j) near r = 0.

    Closed forms exist for alpha in {1, 2}. With p = pi c g0 and strength s:
    alpha = 1 gives a_1 = p - s, a_2 = p a_1 / 4; alpha = 2 gives a_1 = p,
    a_2 = p a_1 / 4 - s. For s = 1/2 these are the familiar
    a_1 = p - 1/2, a_2 = p^2/4 - p/8 and a_1 = p, a_2 = p^2/4 - 1/2.

    Raises:
        UnsupportedOrder: If ``order`` is not 1 or 2, or alpha is not 1 or 2.
    """
    alpha, s = problem.alpha, problem.strength
    if order not in (1, 2) or alpha not in (1.0, 2.0):
        raise UnsupportedOrder(f"no closed form for alpha={alpha}, order={order}")
    p = math.pi * problem.c * g0
    if alpha == 1.0:
        a1 = p - s
        a2 = 0.25 * p * a1
    else:
        a1 = p
        a2 = 0.25 * p * a1 - s
    return np.array([a1, a2][:order])


def _start_state(problem: RadialProblem, log_g0: float, r1: float):
    """psi and m at r1 from the leading small-r behaviour."""
    g0 = math.exp(log_g0)
    p = math.pi * problem.c * g0
    psi = log_g0 + p * r1 * r1 - problem.strength * r1 ** (2.0 * problem.alpha)
    mass = math.pi * g0 * r1 * r1 * (1.0 + 0.5 * p * r1 * r1)
    return psi, mass


def _shoot(problem: RadialProblem, log_g0: float, rtol: float, dense: bool = False):
    c = problem.c
    two_alpha_s = 2.0 * problem.alpha * problem.strength
    power = 2.0 * problem.alpha - 1.0
    two_pi = 2.0 * math.pi

    def rhs(r, y):
        psi, mass = y
        return [(2.0 * c * mass) / r - two_alpha_s * r**power, two_pi * r * math.exp(min(psi, 700.0))]

    def overshoot(r, y):
        return y[1] - 1.5

    def explode(r, y):
        return y[0] - 700.0

    overshoot.terminal = explode.terminal = True
    overshoot.direction = explode.direction = 1.0
    y0 = _start_state(problem, log_g0, R_START)
    sol = solve_ivp(
        rhs,
        (R_START, problem.r_max),
        y0,
        method="DOP853",
        rtol=rtol,
        atol=[1e-12, 1e-15],
        events=(overshoot, explode),
        dense_output=dense,
    )
    return sol


def _miss(problem: RadialProblem, log_g0: float, rtol: float) -> float:
    sol = _shoot(problem, log_g0, rtol)
    return min(sol.y[1, -1] - 1.0, 0.5)


def _initial_log_g0(problem: RadialProblem) -> float:
    alpha, s = problem.alpha, problem.strength
    guess = _c_zero_height(alpha, s)
    if problem.c > 1.0:
        # bulk height of the large-c envelope at its mean radius
        b = _edge_radius(alpha, s, problem.c)
        guess = min(guess, s * alpha * alpha * (0.5 * b) ** (2 * alpha - 2) / (math.pi * problem.c))
    return math.log(guess)


def _bracket(problem: RadialProblem, rtol: float):
    """Find [lo, hi] in log g0 with miss(lo) < 0 < miss(hi)."""
    x = _initial_log_g0(problem)
    fx = _miss(problem, x, rtol)
    step = 1.0 if fx < 0 else -1.0
    for _ in range(60):
        x_new = x + step
        f_new = _miss(problem, x_new, rtol)
        if (f_new > 0) != (fx > 0):
            return (x, x_new) if step > 0 else (x_new, x)
        x, fx = x_new, f_new
    raise NoBracket(f"no sign change of the shooting miss for c={problem.c}")


def _scan_candidates(problem: RadialProblem, lo: float, hi: float, rtol: float):
    """Coarse scan around the bracket for further sign changes (c < 0)."""
    xs = np.arange(lo - 6.0, hi + 12.0, 0.5)
    fs = np.array([_miss(problem, x, rtol) for x in xs])
    changes = np.flatnonzero(np.diff(np.sign(fs)) != 0)
    return [(xs[i], xs[i + 1]) for i in changes]


def _solve_shooting(problem: RadialProblem):
    # the bracket uses the refining tolerance: for |c| near 0 the first guess
    # is itself almost the root and the sign of its miss depends on rtol
    lo, hi = _bracket(problem, 1e-12)
    brackets = [(lo, hi)]
    if problem.c < 0:
        found = _scan_candidates(problem, lo, hi, 1e-12)
        if found:
            brackets = found
    roots = [
        brentq(lambda x: _miss(problem, x, 1e-12), a, b, xtol=1e-14, rtol=1e-15)
        for a, b in brackets
    ]
    if len(roots) > 1:
        warnings.warn(
            f"several decaying solutions found for c={problem.c}; using the first",
            RuntimeWarning,
            stacklevel=3,
        )
    log_g0 = roots[0]
    sol = _shoot(problem, log_g0, 1e-12, dense=True)
    if sol.status == 1 or sol.t[-1] < problem.r_max:
        raise BlowUp(
            f"shooting trajectory diverged at r={sol.t[-1]:.4g} for c={problem.c}",
            radius=float(sol.t[-1]),
        )
    r = problem.grid
    psi = np.empty_like(r)
    inner = r < R_START
    ri = r[inner]
    if problem.alpha in (1.0, 2.0):
        a1, a2 = small_r_expansion(problem, math.exp(log_g0), 2)
        psi[inner] = log_g0 + a1 * ri**2 + a2 * ri**4
    else:
        psi[inner] = log_g0 + math.pi * problem.c * math.exp(log_g0) * ri**2 - problem.f(ri)
    psi[~inner] = sol.sol(r[~inner])[0]
    return psi, tuple(math.exp(x) for x in roots)


def _initial_psi(problem: RadialProblem, r: np.ndarray) -> np.ndarray:
    alpha, s, c = problem.alpha, problem.strength, problem.c
    if c <= 1.0:
        return math.log(_c_zero_height(alpha, s)) - problem.f(r)
    b = _edge_radius(alpha, s, c)
    rb = np.maximum(r, 1e-300)
    bulk = np.log(s * alpha * alpha / (math.pi * c)) + (2 * alpha - 2) * np.log(np.maximum(rb, 0.3 * b))
    height = math.log(s * alpha * alpha / (math.pi * c)) + (2 * alpha - 2) * math.log(b)
    tail = height + 2 * c * np.log(rb / b) - (problem.f(r) - problem.f(b))
    return np.where(r < b, bulk, tail)


def _relax_once(problem: RadialProblem, n_cells: int, psi_init, max_iter: int = 200):
    """Finite-volume Newton solve on a uniform grid with n_cells + 1 nodes."""
    c = problem.c
    r = np.linspace(0.0, problem.r_max, n_cells + 1)
    h = r[1] - r[0]
    faces = np.concatenate(([0.0], 0.5 * (r[:-1] + r[1:]), [problem.r_max]))
    area = 0.5 * (faces[1:] ** 2 - faces[:-1] ** 2)
    rfp = faces * problem.df(faces)
    pot = rfp[1:] - rfp[:-1]
    outer_flux = 2.0 * c - rfp[-1]
    kin_up = faces[1:-1] / h  # coupling between node i and i+1
    four_pi_c = 4.0 * math.pi * c

    def residual(psi):
        flux = np.empty(n_cells + 2)
        flux[0] = 0.0
        flux[1:-1] = kin_up * (psi[1:] - psi[:-1])
        flux[-1] = outer_flux
        return flux[1:] - flux[:-1] - four_pi_c * np.exp(psi) * area + pot

    psi = np.array(psi_init(r), dtype=float)
    res = residual(psi)
    norm = np.linalg.norm(res)
    for _ in range(max_iter):
        source = four_pi_c * np.exp(psi) * area
        bands = np.zeros((3, n_cells + 1))
        bands[0, 1:] = kin_up
        bands[2, :-1] = kin_up
        bands[1] = -source
        bands[1, :-1] -= kin_up
        bands[1, 1:] -= kin_up
        step = solve_banded((1, 1), bands, -res)
        damping = 1.0
        while True:
            trial = psi + damping * step
            trial_res = residual(trial)
            trial_norm = np.linalg.norm(trial_res)
            if np.isfinite(trial_norm) and (trial_norm < norm or damping < 1e-4):
                break
            damping *= 0.5
        psi, res, norm = trial, trial_res, trial_norm
        if np.max(np.abs(damping * step)) < 1e-11 * (1.0 + np.max(np.abs(psi))):
            return r, psi
    raise NoConvergence(f"relaxation did not converge for c={problem.c} (residual {norm:.3g})")


def _solve_relaxation(problem: RadialProblem, psi_guess=None, n_cells: int = 40000):
    if psi_guess is None:
        psi_guess = lambda r: _initial_psi(problem, r)  # noqa: E731
    r_coarse, psi_coarse = _relax_once(problem, n_cells, psi_guess)
    spline = CubicSpline(r_coarse, psi_coarse)
    r_fine, psi_fine = _relax_once(problem, 2 * n_cells, spline)
    # Richardson extrapolation of the second-order scheme on shared nodes
    psi_rich = (4.0 * psi_fine[::2] - psi_coarse) / 3.0
    spline = CubicSpline(r_coarse, psi_rich, bc_type=((1, 0.0), "not-a-knot"))
    psi = spline(problem.grid)
    return psi, (math.exp(psi_rich[0]),)


def mean_field_residual(density: RadialDensity) -> tuple[np.ndarray, np.ndarray]:
    """Relative residual of the radial mean-field equation on the grid.

    Derivatives of log g use fourth-order central differences (the grid
    must be uniform); the residual at each interior node is
    |4 pi c g - L f - L log g| / (|4 pi c g| + |L f| + |L log g|) with
    L = d^2/dr^2 + (1/r) d/dr.

    Returns:
        Radii and residuals, excluding two nodes at each end and r = 0.
    """
    r = density.grid
    h = np.diff(r)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0.0):
        raise ValueError("mean_field_residual needs a uniform grid")
    h = h[0]
    psi = np.log(density.values)
    d1 = (psi[:-4] - 8 * psi[1:-3] + 8 * psi[3:-1] - psi[4:]) / (12 * h)
    d2 = (-psi[:-4] + 16 * psi[1:-3] - 30 * psi[2:-2] + 16 * psi[3:-1] - psi[4:]) / (12 * h * h)
    rr = r[2:-2]
    problem = density.problem
    lap_psi = d2 + d1 / rr
    lap_f = problem.lap4(rr)
    source = 4.0 * math.pi * problem.c * density.values[2:-2]
    res = np.abs(source - lap_f - lap_psi) / (np.abs(source) + np.abs(lap_f) + np.abs(lap_psi))
    return rr, res


def _finish(problem: RadialProblem, psi: np.ndarray, method: str, candidates) -> RadialDensity:
    g = np.exp(psi)
    r = problem.grid
    density = RadialDensity(
        problem=problem,
        values=g,
        g0=float(g[0]),
        normalization_residual=abs(_mass(r, g) - 1.0),
        method=method,
        candidates=tuple(candidates),
    )
    slope = np.gradient(psi, r, edge_order=2)[-1] * r[-1]
    expected = 2.0 * problem.c - r[-1] * problem.df(r[-1])
    density.log_slope_error = float(abs(slope - expected) / abs(expected))
    try:
        rr, res = mean_field_residual(density)
    except ValueError:
        return density
    interior = (rr >= 10 * R_START) & (rr <= 0.95 * r[-1])
    density.ode_residual = float(res[interior].max()) if np.any(interior) else float("nan")
    return density


def solve_radial(problem: RadialProblem, tol: float = 1e-6, method: str = "auto") -> RadialDensity:
    """Solve the radial mean-field equation for the crossover density.

    Args:
        problem: The radial problem.
        tol: Accepted relative mean-field residual on the interior.
        method: ``"shooting"`` (bisection on log g(0) with an adaptive
            eighth-order Runge-Kutta integrator), ``"relaxation"`` (damped
            Newton on a finite-volume discretisation, Richardson
            extrapolated), or ``"auto"``, which shoots first and falls back
            to relaxation when the shooting problem is too ill-conditioned
            to meet the normalisation or residual targets. Large c is such
            a case: perturbations of g(0) grow like I_0(sqrt(2) r) across
            the bulk of radius sqrt(2c).

    Returns:
        The density on ``problem.grid``.

    Raises:
        NoBracket: Shooting found no decaying solution.
        BlowUp: The accepted shooting trajectory diverged.
        NoConvergence: Relaxation did not converge.
    """
    if method not in ("auto", "shooting", "relaxation"):
        raise ValueError(f"unknown method {method!r}")
    if problem.c == 0.0:
        alpha, s = problem.alpha, problem.strength
        psi = math.log(_c_zero_height(alpha, s)) - problem.f(problem.grid)
        return _finish(problem, psi, "closed_form", (math.exp(psi[0]),))
    if method in ("auto", "shooting"):
        try:
            psi, cands = _solve_shooting(problem)
            density = _finish(problem, psi, "shooting", cands)
            good = density.normalization_residual < NORMALIZATION_TOL and not (
                density.ode_residual > tol
            )
            if good or method == "shooting":
                return density
        except (BlowUp, NoBracket):
            if method == "shooting":
                raise
    psi, cands = _solve_relaxation(problem)
    return _finish(problem, psi, "relaxation", cands)


def limit_density(problem: RadialProblem, which: str) -> RadialDensity:
    """Closed-form limiting densities on the problem grid.

    ``"c_zero"`` gives the Boltzmann law s^(1/alpha) e^(-s r^(2 alpha)) /
    (pi Gamma(1 + 1/alpha)); ``"c_infinity"`` gives the equilibrium law
    s alpha^2 r^(2 alpha - 2) / (pi c) on the disc of radius
    (c / (s alpha))^(1 / (2 alpha)), which needs c > 0. With s = 1/2 they
    reduce to e^(-r^(2 alpha)/2) / (pi 2^(1/alpha) Gamma(1 + 1/alpha)) and
    alpha^2 r^(2 alpha - 2) / (2 pi c) on [0, (2c/alpha)^(1/(2 alpha))].
    """
    alpha, s = problem.alpha, problem.strength
    r = problem.grid
    if which == "c_zero":
        k = _c_zero_height(alpha, s)
        g = k * np.exp(-problem.f(r))
        exact_mass = 1.0 - math.exp(-s * problem.r_max ** (2 * alpha)) if alpha == 1.0 else None
    elif which == "c_infinity":
        c = problem.c
        if not c > 0:
            raise RangeError("the c -> infinity envelope needs c > 0")
        b = _edge_radius(alpha, s, c)
        g = np.where(r <= b, s * alpha * alpha * r ** (2 * alpha - 2) / (math.pi * c), 0.0)
        exact_mass = min(problem.r_max / b, 1.0) ** (2 * alpha)
    else:
        raise ValueError(f"unknown limit {which!r}")
    residual = abs(exact_mass - 1.0) if exact_mass is not None else abs(_mass(r, g) - 1.0)
    return RadialDensity(problem, g, float(g[0]), residual, method=which)


def ode_integral_identity(density: RadialDensity) -> float:
    """Half the bracket [r f' + r (log g)'] between 0 and r_max.

    For the decaying solution this equals c. Both terms vanish at r = 0, so
    only the outer end contributes; (log g)' is a second-order one-sided
    difference on the grid.
    """
    r = density.grid
    psi = np.log(density.values)
    slope = np.gradient(psi, r, edge_order=2)[-1]
    r_end = r[-1]
    return 0.5 * float(r_end * density.problem.df(r_end) + r_end * slope)
