"""Crossover densities of the one-dimensional log-gas.

For V_a(x) = x^2/2 - a log|x| the crossover density is

    rho_{c,a}(lambda) = e^(-lambda^2/2) |lambda|^a
                        |U(c/2, (1-a)/2, -lambda^2/2)|^(-2) / Z(c,a),

where U is Kummer's function evaluated on its branch cut. The limit is
taken with w = -z^2/2 for z = lambda - i0, i.e. from above the cut for
lambda > 0 and from below for lambda < 0. Its resolvent G solves the Riccati
equation 1 + G (z - a/z) + c G^2 + G' = 0 and has the closed form
G(z) = (z/2) U(c/2 + 1, (3-a)/2, w) / U(c/2, (1-a)/2, w) in the lower
half-plane.

For a + c < -1 the closed form still defines a probability density but
no longer satisfies the Riccati equation (its second moment differs from
1 + a + c); :func:`crossover_density` warns in that case.
"""

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from .errors import Collapsed, OnSupport, OutsideValidity, RangeError, SingularPoint, TailTooHeavy
from .specfun import kummer_u, parabolic_cylinder_d

__all__ = [
    "Crossover1DParams",
    "Density1D",
    "density_gauss_log",
    "crossover_density",
    "normalize",
    "resolvent",
    "closed_form_resolvent",
    "riccati_residual",
    "inversion_check",
    "wronskian",
    "gaussian_density_closed_form",
    "c_zero_density",
]

# log-density drop defining the grid extent
EXTENT_DROP = 40.0
ENDPOINT_TOL = 1e-14
COLLAPSE_TOL = 1e-12
_GL_NODES = 16
_BULK_PANEL = 0.25
_GRADING = 0.2
# the innermost panel [0, eps] carries mass ~ eps^(1+a); it is made small
# enough that the non-polynomial corrections there fall below 1e-13
_INNER_MASS = 1e-13


@dataclass(frozen=True)
class Crossover1DParams:
    """Parameters c > -1 and a > -1 of the 1D crossover density."""

    c: float
    a: float = 0.0

    def __post_init__(self):
        if not self.c > -1.0:
            raise RangeError(f"c must exceed -1 on the line, got {self.c}")
        if not self.a > -1.0:
            raise RangeError(f"a must exceed -1, got {self.a}")

    @property
    def kummer_params(self) -> tuple[float, float]:
        return 0.5 * self.c, 0.5 * (1.0 - self.a)


@dataclass
class Density1D:
    """Density values on a symmetric grid.

    Attributes:
        params: Parameters (c, a).
        grid: Increasing points lambda.
        values: Density values; divided by ``z_norm`` once normalised.
        z_norm: Normalisation constant Z(c, a); 1.0 before normalisation.
        normalized: Whether ``values`` integrate to one.
    """

    params: Crossover1DParams
    grid: np.ndarray
    values: np.ndarray
    z_norm: float = 1.0
    normalized: bool = False
    _rule: tuple = field(default=None, repr=False, compare=False)


def _cut_argument(lam: np.ndarray) -> np.ndarray:
    """w = -lambda^2/2 on the cut, signed zero selecting the side."""
    w = np.empty(lam.shape, dtype=complex)
    w.real = -0.5 * lam * lam
    w.imag = np.copysign(0.0, lam)
    return w


def _log_density(params: Crossover1DParams, lam: np.ndarray) -> np.ndarray:
    alpha, gamma = params.kummer_params
    u = kummer_u(alpha, gamma, _cut_argument(lam))
    out = -0.5 * lam * lam - 2.0 * np.log(np.abs(u))
    if params.a != 0.0:
        with np.errstate(divide="ignore"):
            out = out + params.a * np.log(np.abs(lam))
    return out


def density_gauss_log(params: Crossover1DParams, lam):
    """Unnormalised density e^(-lambda^2/2) |lambda|^a |U(c/2, (1-a)/2, -lambda^2/2)|^(-2).

    Raises:
        SingularPoint: At lambda = 0 when a < 0.
    """
    arr = np.asarray(lam, dtype=float)
    if params.a < 0 and np.any(arr == 0.0):
        raise SingularPoint("the density is infinite at 0 for a < 0")
    out = np.exp(_log_density(params, np.atleast_1d(arr))).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def default_extent(params: Crossover1DParams) -> float:
    """Half-width L where the log-density falls EXTENT_DROP below its peak."""
    probe = np.linspace(1e-3, 2.0 * math.sqrt(max(params.c, 0.0)) + 14.0, 2000)
    logd = _log_density(params, probe)
    peak = np.max(logd)
    beyond = np.flatnonzero((logd < peak - EXTENT_DROP) & (probe > probe[np.argmax(logd)]))
    return float(probe[beyond[0]]) if beyond.size else float(probe[-1])


def make_grid(params: Crossover1DParams, n: int = 2001, extent: float | None = None) -> np.ndarray:
    """Symmetric grid clustered quadratically towards 0; 0 is omitted when a < 0."""
    L = default_extent(params) if extent is None else float(extent)
    if params.a < 0 and n % 2 == 1:
        n += 1
    t = np.linspace(-1.0, 1.0, n)
    if params.a == 0.0:
        return L * t
    return L * np.sign(t) * t * t


def _positive_rule(params: Crossover1DParams, L: float):
    """Quadrature nodes and weights on (0, L] for the density's lambda^a cusp.

    Gauss-Jacobi (weight lambda^a) on a tiny panel [0, eps], geometrically
    graded Gauss-Legendre panels up to 0.5, and uniform panels beyond.
    """
    x, w = leggauss(_GL_NODES)
    nodes, weights = [], []
    xj, wj = roots_jacobi(_GL_NODES, 0.0, params.a)
    inner = max(_INNER_MASS ** (1.0 / (1.0 + params.a)), 1e-280)
    inner = min(inner, 1e-20)
    half = 0.5 * inner
    nodes.append(half * (xj + 1.0))
    # the Jacobi weight absorbs lambda^a; divide it back out for uniformity
    weights.append(half ** (1.0 + params.a) * wj / (half * (xj + 1.0)) ** params.a)
    edges = [inner]
    while edges[-1] < 0.5:
        edges.append(min(edges[-1] / _GRADING, 0.5))
    n_bulk = max(1, int(math.ceil((L - 0.5) / _BULK_PANEL)))
    edges.extend(np.linspace(0.5, L, n_bulk + 1)[1:])
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, rad = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes.append(mid + rad * x)
        weights.append(rad * w)
    return np.concatenate(nodes), np.concatenate(weights)


def normalize(density: Density1D) -> Density1D:
    """Divide by Z(c, a) = 2 int_0^L rho(lambda) d lambda.

    Z is computed with a composite Gauss rule graded towards the |lambda|^a
    endpoint behaviour at 0; the same rule serves :func:`resolvent`.

    Raises:
        Collapsed: On the line a + c = -1, where U(c/2, (1-a)/2, w) reduces to
            w^(-c/2) and the density behaves like |lambda|^(c-1) at 0 with
            c < 0; the only solution there is the point mass at 0.
        TailTooHeavy: If the normalised density at the grid ends exceeds 1e-14.
    """
    if density.normalized:
        return density
    params = density.params
    if abs(params.a + params.c + 1.0) <= COLLAPSE_TOL:
        raise Collapsed(f"a + c = -1 (a={params.a:g}, c={params.c:g}): the density is a point mass at 0")
    L = float(max(abs(density.grid[0]), abs(density.grid[-1])))
    nodes, weights = _positive_rule(params, L)
    rho_nodes = np.exp(_log_density(params, nodes))
    z_norm = 2.0 * float(np.dot(weights, rho_nodes))
    values = density.values / z_norm
    ends = values[[0, -1]]
    if np.any(ends > ENDPOINT_TOL):
        raise TailTooHeavy(f"density at the grid ends is {ends.max():.3g} > {ENDPOINT_TOL}")
    return replace(
        density,
        values=values,
        z_norm=z_norm,
        normalized=True,
        _rule=(nodes, weights, rho_nodes / z_norm),
    )


def crossover_density(params: Crossover1DParams, grid=None, n: int = 2001) -> Density1D:
    """Normalised density on ``grid`` (default: :func:`make_grid`)."""
    if params.a + params.c < -1.0:
        warnings.warn(
            f"a + c = {params.a + params.c:g} < -1: the closed form does not solve "
            "the Riccati equation here",
            OutsideValidity,
            stacklevel=2,
        )
    grid = make_grid(params, n) if grid is None else np.asarray(grid, dtype=float)
    values = density_gauss_log(params, grid)
    return normalize(Density1D(params, grid, values))


def resolvent(density: Density1D, z):
    """Stieltjes transform G(z) = int rho(lambda) / (lambda - z) d lambda.

    Uses evenness, G(z) = int_0^inf rho(lambda) 2z / (lambda^2 - z^2) d lambda,
    with the quadrature rule of :func:`normalize`.

    Raises:
        OnSupport: If any ``z`` is real.
    """
    density = normalize(density)
    zz = np.asarray(z, dtype=complex)
    if np.any(zz.imag == 0):
        raise OnSupport("the resolvent is evaluated off the real axis only")
    nodes, weights, rho = density._rule
    flat = zz.ravel()[:, None]
    kernel = 2.0 * flat / (nodes[None, :] ** 2 - flat * flat)
    out = (kernel @ (weights * rho)).reshape(zz.shape)
    return complex(out) if out.ndim == 0 else out


def riccati_residual(density: Density1D, z) -> float:
    """|1 + G (z - a/z) + c G^2 + G'| with G' by a central difference.

    The step is 1e-5 (1 + |z|) along the real direction.
    """
    z = complex(z)
    params = density.params
    h = 1e-5 * (1.0 + abs(z))
    g, g_plus, g_minus = resolvent(density, np.array([z, z + h, z - h]))
    dg = (g_plus - g_minus) / (2.0 * h)
    return abs(1.0 + g * (z - params.a / z) + params.c * g * g + dg)


def closed_form_resolvent(params: Crossover1DParams, z):
    """G(z) = (z/2) U(c/2 + 1, (3-a)/2, w) / U(c/2, (1-a)/2, w), w = -z^2/2.

    Valid in the lower half-plane; the upper half-plane follows from
    G(conj z) = conj G(z).
    """
    zz = np.asarray(z, dtype=complex)
    upper = zz.imag > 0
    zl = np.where(upper, np.conj(zz), zz)
    w = -0.5 * zl * zl
    alpha, gamma = params.kummer_params
    g = 0.5 * zl * kummer_u(alpha + 1.0, gamma + 1.0, w) / kummer_u(alpha, gamma, w)
    g = np.where(upper, np.conj(g), g)
    return complex(g) if g.ndim == 0 else g


def inversion_check(
    params: Crossover1DParams,
    lam: float,
    eps_sequence=(1e-3, 5e-4, 2.5e-4),
) -> float:
    """Density recovered from the resolvent just below the real axis.

    Evaluates -(1/pi) Im G(lambda - i eps) with the closed-form resolvent
    for each eps and extrapolates to eps = 0 with the interpolating
    polynomial through all points. With G = int rho / (lambda - z) the
    limit from below is -pi rho, so the sign is flipped to return the
    (positive) density.
    """
    eps = np.asarray(eps_sequence, dtype=float)
    g = closed_form_resolvent(params, lam - 1j * eps)
    values = -np.imag(g) / math.pi
    # Neville extrapolation to eps = 0
    table = list(values)
    n = len(eps)
    for level in range(1, n):
        for i in range(n - level):
            table[i] = (eps[i + level] * table[i] - eps[i] * table[i + 1]) / (
                eps[i + level] - eps[i]
            )
    return float(table[0])


def wronskian(params: Crossover1DParams, lam) -> np.ndarray:
    """Im y' Re y - Im y Re y' for y(z) = e^(z^2/4) z^(-a/2) u(z) at z = lambda - i0.

    Here u(z) = U(c/2, (1-a)/2, -z^2/2). It is constant on each half-line
    and equals c pi / Z(c, a) in absolute value.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if np.any(lam == 0):
        raise SingularPoint("the Wronskian is evaluated away from 0")
    alpha, gamma = params.kummer_params
    w = _cut_argument(lam)
    z = lam - 0j
    z.imag = -0.0
    u = kummer_u(alpha, gamma, w)
    du = params.c * 0.5 * z * kummer_u(alpha + 1.0, gamma + 1.0, w)
    pref = np.exp(0.25 * z * z - 0.5 * params.a * np.log(z))
    y = pref * u
    dy = pref * (du + (0.5 * z - 0.5 * params.a / z) * u)
    return dy.imag * y.real - y.imag * dy.real


def gaussian_density_closed_form(c: float, lam) -> np.ndarray:
    """The a = 0 density |D_(-c)(i lambda)|^(-2) / (sqrt(2 pi) Gamma(1 + c))."""
    lam = np.asarray(lam, dtype=float)
    d = parabolic_cylinder_d(-c, 1j * lam)
    return 1.0 / (math.sqrt(2.0 * math.pi) * math.gamma(1.0 + c) * np.abs(d) ** 2)


def c_zero_density(a: float, lam) -> np.ndarray:
    """The c = 0 density e^(-lambda^2/2) |lambda|^a / (2^((1+a)/2) Gamma((1+a)/2))."""
    lam = np.asarray(lam, dtype=float)
    with np.errstate(divide="ignore"):
        power = a * np.log(np.abs(lam)) if a != 0.0 else 0.0
    norm = 2.0 ** (0.5 * (1.0 + a)) * math.gamma(0.5 * (1.0 + a))
    return np.exp(-0.5 * lam * lam + power) / norm
