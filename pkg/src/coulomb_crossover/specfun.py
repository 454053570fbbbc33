"""Special functions on the complex plane.

Provides the principal branch of log Gamma, Kummer's confluent
hypergeometric functions M and U, and the parabolic cylinder function D.
The functions accept scalar parameters and scalar or array arguments.

Points on the negative real axis (the branch cut of U) are resolved with
the sign of the zero imaginary part: ``complex(-x, +0.0)`` is the limit
from above and ``complex(-x, -0.0)`` the limit from below. ``kummer_u``
also takes an explicit ``side`` argument that overrides the sign.
"""

import cmath
import math
import warnings
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre

from . import _dd
from .errors import ParameterPole, PoleError, PrecisionLoss

__all__ = [
    "log_gamma",
    "gamma",
    "rgamma",
    "kummer_m",
    "kummer_u",
    "parabolic_cylinder_d",
]

# |z| beyond which the asymptotic expansion of U is tried first.
ASYMPTOTIC_RADIUS = 25.0
# Relative size of the smallest asymptotic term required to accept it.
ASYMPTOTIC_TOL = 1e-15
# For real parameters U is evaluated from its Laplace integral by
# Gauss-Laguerre quadrature. The integrand is singular at s = -z; the ray
# of integration is tilted away from it by up to LAPLACE_MAX_TILT, which
# keeps the rule near 1e-13 for |z| >= LAPLACE_ALL_ARG_ABS at every angle
# (the cut included) and for |z| >= LAPLACE_MIN_ABS when |arg z| <=
# LAPLACE_MAX_ARG. Elsewhere the two-term connection formula is used; it
# cancels badly for large |z| in the right half-plane. The Laguerre weight
# s^(a-1) degenerates as a -> 0, hence LAPLACE_MIN_ALPHA.
LAPLACE_MIN_ABS = 1.5
LAPLACE_MAX_ARG = 2.5
LAPLACE_ALL_ARG_ABS = 3.0
LAPLACE_MAX_TILT = math.pi / 3
LAPLACE_MIN_ALPHA = 0.02
# Nodes of the Laguerre rule: many are needed when the singularity is close
# to the ray, but the computed high-order rules lose digits, so large |z|
# uses a short rule.
LAPLACE_NODES = 320
LAPLACE_NODES_FAR = 120
LAPLACE_FAR_ABS = 6.0
# Distance to an integer below which gamma is treated as degenerate; the
# connection formula is then interpolated from gamma = n + k h, k = +-1, +-2.
INTEGER_GAMMA_STEP = 1e-3
# Ratio max|term| / |sum| above which the M series is redone in
# double-double, and above which even that is flagged.
_DD_THRESHOLD = 1e4
_WARN_THRESHOLD = 1e20
_MAX_TERMS = 5000

_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_pole(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _log_gamma_scalar(z: complex) -> complex:
    if _is_pole(z):
        raise PoleError(f"log_gamma has a pole at {z.real:g}")
    # Shift to Re z >= 15 where the Stirling series converges to double
    # precision; summing principal logs keeps the principal branch.
    shift = 0j
    while z.real < 15.0:
        shift += cmath.log(z)
        z += 1.0
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    series = 0j
    power = zinv
    for coef in _STIRLING:
        series += coef * power
        power *= zinv2
    return (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI + series - shift


def log_gamma(z):
    """Principal branch of log Gamma(z).

    Args:
        z: Complex scalar or array.

    Returns:
        Complex value(s) of log Gamma. The imaginary part is the continuous
        branch on C minus the nonpositive real axis.

    Raises:
        PoleError: If any element is a nonpositive integer.
    """
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0:
        return _log_gamma_scalar(complex(arr))
    out = np.array([_log_gamma_scalar(complex(v)) for v in arr.ravel()])
    return out.reshape(arr.shape)


def gamma(z: complex) -> complex:
    """Gamma function of a complex scalar."""
    return cmath.exp(_log_gamma_scalar(complex(z)))


_gamma = gamma  # kummer_u's ``gamma`` parameter shadows the function


def rgamma(z: complex) -> complex:
    """Reciprocal Gamma function, zero at the poles of Gamma."""
    z = complex(z)
    if _is_pole(z):
        return 0j
    return cmath.exp(-_log_gamma_scalar(z))


def _as_complex_array(z):
    arr = np.array(z, dtype=complex, copy=True)
    return arr, arr.ndim == 0


def _neumaier_add(total, comp, term):
    """Compensated complex accumulation, applied to each component."""
    for part in ("real", "imag"):
        s = getattr(total, part)
        c = getattr(comp, part)
        x = getattr(term, part)
        t = s + x
        big = np.abs(s) >= np.abs(x)
        c += np.where(big, (s - t) + x, (x - t) + s)
        s[...] = t


def _m_series(a: complex, b: complex, z: np.ndarray):
    """Sum the 1F1 series; returns (value, max|term|)."""
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    term = np.ones_like(z)
    peak = np.ones(z.shape)
    absz = np.abs(z)
    kmin = abs(a) + abs(b)
    for k in range(_MAX_TERMS):
        ratio = (a + k) / ((b + k) * (k + 1))
        term = term * ratio * z
        _neumaier_add(total, comp, term)
        mag = np.abs(term)
        np.maximum(peak, mag, out=peak)
        if k > kmin and abs(ratio) * absz.max(initial=0.0) < 1.0:
            if np.all(mag <= 1e-17 * np.abs(total + comp)):
                break
    else:
        raise ArithmeticError("kummer_m series did not converge")
    return total + comp, peak


def _m_series_dd(a: complex, b: complex, z: np.ndarray) -> np.ndarray:
    """The 1F1 series accumulated in complex double-double arithmetic."""
    one = np.ones(z.shape)
    zero = np.zeros(z.shape)
    zz = _dd.from_complex(z)
    term = ((one.copy(), zero.copy()), (zero.copy(), zero.copy()))
    total = ((one.copy(), zero.copy()), (zero.copy(), zero.copy()))
    absz = np.abs(z)
    kmin = abs(a) + abs(b)
    for k in range(_MAX_TERMS):
        num = (_dd.two_sum(a.real, float(k)), (a.imag, 0.0))
        den = (_dd.two_sum(b.real, float(k)), (b.imag, 0.0))
        kp1 = (float(k + 1), 0.0)
        den = (_dd.mul(den[0], kp1), _dd.mul(den[1], kp1))
        coef = _dd.cdiv(num, den)
        term = _dd.cmul(_dd.cmul(term, coef), zz)
        total = _dd.cadd(total, term)
        mag = np.hypot(term[0][0], term[1][0])
        ratio = abs(a + k) / abs((b + k) * (k + 1))
        if k > kmin and ratio * absz.max(initial=0.0) < 1.0:
            if np.all(mag <= 1e-33 * np.hypot(total[0][0], total[1][0])):
                break
    return _dd.to_complex(total)


def _m_raw(a: complex, b: complex, z: np.ndarray) -> np.ndarray:
    value, peak = _m_series(a, b, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        cancel = peak / np.abs(value)
    bad = ~(cancel <= _DD_THRESHOLD)
    if np.any(bad):
        value[bad] = _m_series_dd(a, b, z[bad])
        if np.any(~(cancel[bad] <= _WARN_THRESHOLD)):
            warnings.warn(
                "kummer_m: cancellation beyond double-double budget",
                PrecisionLoss,
                stacklevel=3,
            )
    return value


def _m_kernel(a: complex, b: complex, z: np.ndarray) -> np.ndarray:
    """M on a flat array, using Kummer's transformation for Re z < 0."""
    out = np.empty_like(z)
    neg = z.real < 0
    if np.any(neg):
        zn = z[neg]
        out[neg] = np.exp(zn) * _m_raw(b - a, b, -zn)
    if np.any(~neg):
        out[~neg] = _m_raw(a, b, z[~neg])
    return out


def kummer_m(alpha, gamma, z):
    """Kummer's function M(alpha, gamma, z) = 1F1(alpha; gamma; z).

    Summed as a power series with compensated accumulation; elements whose
    terms cancel strongly are re-summed in double-double arithmetic.

    Args:
        alpha: Complex scalar parameter.
        gamma: Complex scalar parameter, not a nonpositive integer.
        z: Complex scalar or array.

    Returns:
        M(alpha, gamma, z) with the shape of ``z``.

    Raises:
        ParameterPole: If ``gamma`` is a nonpositive integer.
    """
    a, b = complex(alpha), complex(gamma)
    if _is_pole(b):
        raise ParameterPole(f"kummer_m: gamma={b.real:g} is a nonpositive integer")
    arr, scalar = _as_complex_array(z)
    out = _m_kernel(a, b, arr.ravel()).reshape(arr.shape)
    return complex(out) if scalar else out


def _log(z: np.ndarray) -> np.ndarray:
    # numpy's complex log honours the sign of a zero imaginary part.
    return np.log(z)


def _u_asymptotic(a: complex, b: complex, z: np.ndarray):
    """Asymptotic series z^-a sum (a)_k (a-b+1)_k / k! (-z)^-k.

    Returns the values and a mask of elements where the smallest term is
    below ``ASYMPTOTIC_TOL`` relative to the sum.
    """
    inv = -1.0 / z
    total = np.ones_like(z)
    term = np.ones_like(z)
    prev = np.ones(z.shape)
    smallest = np.ones(z.shape)
    active = np.ones(z.shape, dtype=bool)
    c = a - b + 1.0
    for k in range(200):
        term = term * ((a + k) * (c + k) / (k + 1)) * inv
        mag = np.abs(term)
        active &= mag <= prev
        total[active] += term[active]
        np.minimum(smallest, np.where(active, mag, smallest), out=smallest)
        prev = mag
        active &= mag > 1e-17 * np.abs(total)
        if not np.any(active):
            break
    accepted = smallest <= ASYMPTOTIC_TOL * np.abs(total)
    return np.exp(-a * _log(z)) * total, accepted


@lru_cache(maxsize=64)
def _laguerre_rule(n: int, alpha: float):
    return roots_genlaguerre(n, alpha)


def _u_laplace(a: float, b: float, z: np.ndarray) -> np.ndarray:
    """U(a,b,z) = z^-a / Gamma(a) * int e^-s s^(a-1) (1+s/z)^(b-a-1) ds over a ray.

    The ray s = y e^(i psi) / cos(psi), y >= 0, turns away from the
    singular point s = -z when |arg z| > pi/2; the factor e^-y is then the
    Laguerre weight and the rest oscillates like e^(-i y tan psi).
    """
    far = np.abs(z) >= LAPLACE_FAR_ABS
    if np.any(far) and not np.all(far):
        out = np.empty_like(z)
        out[far] = _u_laplace(a, b, z[far])
        out[~far] = _u_laplace(a, b, z[~far])
        return out
    nodes, weights = _laguerre_rule(LAPLACE_NODES_FAR if np.all(far) else LAPLACE_NODES, a - 1.0)
    theta = np.angle(z)
    psi = np.sign(theta) * np.clip(np.abs(theta) - 0.5 * math.pi, 0.0, LAPLACE_MAX_TILT)
    rot = np.exp(1j * psi) / np.cos(psi)
    s = rot[:, None] * nodes[None, :]
    log_f = -1j * np.tan(psi)[:, None] * nodes[None, :] + (b - a - 1.0) * np.log(1.0 + s / z[:, None])
    return np.exp(a * (np.log(rot) - _log(z))) * (np.exp(log_f) @ weights) * rgamma(a)


def _u_connection_raw(a: complex, b: complex, z: np.ndarray) -> np.ndarray:
    t1 = gamma(1.0 - b) * rgamma(a - b + 1.0) * _m_kernel(a, b, z)
    coef2 = gamma(b - 1.0) * rgamma(a)
    if coef2 == 0:
        return t1
    t2 = coef2 * np.exp((1.0 - b) * _log(z)) * _m_kernel(a - b + 1.0, 2.0 - b, z)
    value = t1 + t2
    with np.errstate(divide="ignore", invalid="ignore"):
        loss = (np.abs(t1) + np.abs(t2)) / np.abs(value)
    if np.any(~(loss <= 1e6)):
        warnings.warn(
            "kummer_u: connection formula lost more than six digits",
            PrecisionLoss,
            stacklevel=4,
        )
    return value


def _u_connection(a: complex, b: complex, z: np.ndarray) -> np.ndarray:
    n = round(b.real)
    if b.imag == 0.0 and abs(b.real - n) < INTEGER_GAMMA_STEP:
        # Degenerate gamma: four-point Lagrange interpolation in gamma avoids
        # the logarithmic case; the error is O(h^4) plus cancellation O(eps/h).
        h = INTEGER_GAMMA_STEP
        nodes = np.array([-2.0, -1.0, 1.0, 2.0])
        t = (b.real - n) / h
        out = np.zeros_like(z)
        for k, xk in enumerate(nodes):
            others = np.delete(nodes, k)
            weight = np.prod((t - others) / (xk - others))
            out += weight * _u_connection_raw(a, complex(n + xk * h), z)
        return out
    return _u_connection_raw(a, b, z)


def _u_kernel(a: complex, b: complex, z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    todo = np.ones(z.shape, dtype=bool)

    far = np.abs(z) >= ASYMPTOTIC_RADIUS
    if np.any(far):
        idx = np.flatnonzero(far)
        values, ok = _u_asymptotic(a, b, z[idx])
        out[idx[ok]] = values[ok]
        todo[idx[ok]] = False

    real_params = a.imag == 0.0 and b.imag == 0.0
    mod = np.abs(z)
    right = todo & (
        (mod >= LAPLACE_ALL_ARG_ABS)
        | ((mod >= LAPLACE_MIN_ABS) & (np.abs(np.angle(z)) <= LAPLACE_MAX_ARG))
    )
    if real_params and np.any(right):
        ar, br = a.real, b.real
        if ar >= LAPLACE_MIN_ALPHA:
            out[right] = _u_laplace(ar, br, z[right])
            todo &= ~right
        elif ar - br + 1.0 >= LAPLACE_MIN_ALPHA:
            # Kummer's transformation U(a,b,z) = z^(1-b) U(a-b+1, 2-b, z).
            zr = z[right]
            out[right] = np.exp((1.0 - br) * _log(zr)) * _u_laplace(
                ar - br + 1.0, 2.0 - br, zr
            )
            todo &= ~right

    if np.any(todo):
        out[todo] = _u_connection(a, b, z[todo])
    return out


def kummer_u(alpha, gamma, z, side=None):
    """Kummer's function U(alpha, gamma, z), the solution decaying like z^-alpha.

    Uses the large-|z| asymptotic expansion when it converges to double
    precision, a Gauss-Laguerre evaluation of the Laplace integral for
    real parameters and |z| not too small, and otherwise the two-term
    connection formula through :func:`kummer_m`.

    Args:
        alpha: Complex scalar parameter.
        gamma: Complex scalar parameter. Integer values are handled by
            interpolation in gamma over +-2e-3 (accuracy about 1e-11).
        z: Complex scalar or array.
        side: ``"above"`` or ``"below"`` selects the limit for arguments on
            the negative real axis. ``None`` keeps the sign of the zero
            imaginary part of ``z`` (``+0.0`` means above).

    Returns:
        U(alpha, gamma, z) with the shape of ``z``. ``alpha == 0`` returns
        exactly one.

    Raises:
        ParameterPole: If ``z == 0`` and ``Re gamma >= 1``.
    """
    a, b = complex(alpha), complex(gamma)
    arr, scalar = _as_complex_array(z)
    if side is not None:
        if side not in ("above", "below"):
            raise ValueError("side must be 'above' or 'below'")
        cut = (arr.imag == 0.0) & (arr.real < 0.0)
        arr.imag[cut] = 0.0 if side == "above" else -0.0
    if a == 0:
        out = np.ones(arr.shape, dtype=complex)
        return complex(out) if scalar else out
    flat = arr.ravel()
    out = np.empty_like(flat)
    at_zero = flat == 0
    if np.any(at_zero):
        if b.real >= 1.0:
            raise ParameterPole("kummer_u is singular at z=0 for Re gamma >= 1")
        out[at_zero] = _gamma(1.0 - b) * rgamma(a - b + 1.0)
    if np.any(~at_zero):
        out[~at_zero] = _u_kernel(a, b, flat[~at_zero])
    out = out.reshape(arr.shape)
    return complex(out) if scalar else out


def _pcd_principal(nu: float, z: np.ndarray) -> np.ndarray:
    """D_nu(z) for Re z >= 0 via U(-nu/2, 1/2, z^2/2)."""
    w = 0.5 * z * z
    cut = w.imag == 0.0
    w.imag[cut] = np.where(z.imag[cut] < 0, -0.0, 0.0)
    u = kummer_u(-0.5 * nu, 0.5, w)
    return 2.0 ** (0.5 * nu) * np.exp(-0.25 * z * z) * u


def parabolic_cylinder_d(nu: float, z):
    """Parabolic cylinder function D_nu(z) (Whittaker's notation).

    For Re z >= 0 the function is built from
    D_nu(z) = 2^(nu/2) e^(-z^2/4) U(-nu/2, 1/2, z^2/2); purely imaginary
    ``z = i y`` lands on the cut of U and is taken from above for y > 0 and
    from below for y < 0. The left half-plane is reached through the
    connection formula relating D_nu(z), D_nu(-z) and D_(-nu-1)(-/+ i z).

    Args:
        nu: Real order.
        z: Complex scalar or array.

    Returns:
        D_nu(z) with the shape of ``z``.
    """
    nu = float(nu)
    arr, scalar = _as_complex_array(z)
    flat = arr.ravel()
    out = np.empty_like(flat)
    right = flat.real >= 0
    if np.any(right):
        out[right] = _pcd_principal(nu, flat[right])
    left = ~right
    if np.any(left):
        zl = flat[left]
        upper = zl.imag >= 0
        sign = np.where(upper, 1.0, -1.0)
        rot = -1j * sign * zl
        first = np.exp(1j * np.pi * nu * sign) * _pcd_principal(nu, -zl)
        coef = math.sqrt(2.0 * math.pi) * rgamma(-nu)
        if coef != 0:
            second = (
                coef
                * np.exp(0.5j * np.pi * (nu + 1.0) * sign)
                * _pcd_principal(-nu - 1.0, rot)
            )
            first = first + second
        out[left] = first
    out = out.reshape(arr.shape)
    return complex(out) if scalar else out
