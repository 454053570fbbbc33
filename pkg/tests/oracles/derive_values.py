"""Independent oracles for the frozen reference values in the test suite.

Nothing here imports the package. Run ``python3 tests/oracles/derive_values.py``
to regenerate the numbers; the tests hold copies of the printed values.
"""

import math

import mpmath as mp
import numpy as np
from scipy import integrate, special

mp.mp.dps = 40


def kummer_m_series(a, b, z, terms=400):
    """Brute-force power series of M(a, b, z) in 40-digit arithmetic."""
    a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
    total, term = mp.mpf(1), mp.mpf(1)
    for n in range(terms):
        term *= (a + n) / (b + n) * z / (n + 1)
        total += term
    return total


def kummer_u_quadrature(a, b, z):
    """U(a, b, z) = int_0^inf e^(-zt) t^(a-1) (1+t)^(b-a-1) dt / Gamma(a)."""
    a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
    f = lambda t: mp.exp(-z * t) * t ** (a - 1) * (1 + t) ** (b - a - 1)
    return mp.quad(f, [0, 1, mp.inf]) / mp.gamma(a)


def u_asymptotic(a, b, w, terms=60):
    """U ~ w^(-a) sum (a)_n (a-b+1)_n / n! (-w)^(-n), principal powers."""
    a, b, w = mp.mpf(a), mp.mpf(b), mp.mpc(w)
    total, term = mp.mpc(1), mp.mpc(1)
    for n in range(terms):
        term *= (a + n) * (a - b + 1 + n) / (n + 1) / (-w)
        if abs(term) < mp.mpf(10) ** -35:
            break
        total += term
    return w ** (-a) * total


def u_ode_continuation(a, b, w_end, w_start):
    """Integrate w f'' + (b - w) f' - a f = 0 on the segment w_start -> w_end.

    Initial data come from the asymptotic series at |w_start| = O(60),
    with U' = -a U(a+1, b+1, w).
    """
    f0 = complex(u_asymptotic(a, b, w_start))
    df0 = complex(-a * u_asymptotic(a + 1, b + 1, w_start))
    delta = w_end - w_start

    def rhs(t, y):
        w = w_start + t * delta
        f, df = y
        d2f = ((w - b) * df + a * f) / w
        return [df * delta, d2f * delta]

    sol = integrate.solve_ivp(rhs, (0.0, 1.0), [f0, df0], method="DOP853", rtol=1e-13, atol=1e-18)
    return sol.y[0, -1]


def density_ode_continuation(c, a, lam, depth=12.0):
    """Unnormalised e^(-lam^2/2) |lam|^a / |u(lam - i0)|^2 with u from the z-ODE.

    u(z) = U(c/2, (1-a)/2, -z^2/2) solves u'' + (z - a/z) u' + c u = 0. It is
    recessive for z far down the imaginary direction, where its asymptotic
    series is accurate; integration up the line Re z = lam is then stable.
    """
    al, be = c / 2, (1 - a) / 2
    z0 = complex(lam, -depth)
    w0 = -z0 * z0 / 2
    u0 = complex(u_asymptotic(al, be, w0))
    du0 = complex(-al * u_asymptotic(al + 1, be + 1, w0)) * (-z0)
    delta = complex(lam, 0.0) - z0

    def rhs(t, y):
        z = z0 + t * delta
        u, du = y
        return [du * delta, (-(z - a / z) * du - c * u) * delta]

    sol = integrate.solve_ivp(rhs, (0.0, 1.0), [u0, du0], method="DOP853", rtol=1e-13, atol=1e-20)
    u = sol.y[0, -1]
    return math.exp(-lam * lam / 2) * abs(lam) ** a / abs(u) ** 2


def gaussian_c1_density(lam):
    """The a = 0, c = 1 density from D_{-1}(i x) = e^(-x^2/4) sqrt(pi/2) erfc(i x / sqrt 2).

    |erfc(i y)|^2 = 1 + erfi(y)^2 and erfi(y) = 2 e^(y^2) dawsn(y) / sqrt(pi).
    """
    y = lam / math.sqrt(2.0)
    daw = special.dawsn(y)
    with np.errstate(over="ignore"):  # the far tail underflows to zero density
        denom = np.exp(-lam * lam / 2) + (4.0 / math.pi) * np.exp(lam * lam / 2) * daw * daw
    return 1.0 / (math.sqrt(2 * math.pi) * (math.pi / 2) * denom)


def resolvent_riemann(z, points=1_000_000, half_width=40.0):
    lam = np.linspace(-half_width, half_width, points)
    h = lam[1] - lam[0]
    rho = gaussian_c1_density(lam)
    return complex(np.sum(rho / (lam - z)) * h), float(np.sum(rho) * h)


def two_particle_gap_moment():
    """E (l1 - l2)^2 under |l1 - l2|^2 e^(-(l1^2 + l2^2)/2)."""
    w = lambda y, x: (x - y) ** 2 * math.exp(-(x * x + y * y) / 2)
    num = integrate.dblquad(lambda y, x: (x - y) ** 2 * w(y, x), -12, 12, -12, 12, epsabs=1e-12)[0]
    den = integrate.dblquad(w, -12, 12, -12, 12, epsabs=1e-12)[0]
    return num / den


if __name__ == "__main__":
    print("M(0.25, 0.75, -2) =", mp.nstr(kummer_m_series(0.25, 0.75, -2.0), 20))
    print("U(1.3, 0.25, 10) =", mp.nstr(kummer_u_quadrature(1.3, 0.25, 10.0), 20))
    below = u_ode_continuation(0.5, 0.5, -2.0 - 0.0j, -2.0 - 60.0j)
    above = u_ode_continuation(0.5, 0.5, -2.0 + 0.0j, -2.0 + 60.0j)
    print("U(0.5, 0.5, -2 - i0) =", repr(below))
    print("U(0.5, 0.5, -2 + i0) =", repr(above))
    print("mpmath hyperu(0.5, 0.5, -2 - 1e-30 i) =", mp.hyperu(0.5, 0.5, mp.mpc(-2, -1e-30)))
    print("D_{-1}(0) =", integrate.quad(lambda t: math.exp(-t * t / 2), 0, np.inf, epsabs=1e-14)[0])
    print("D_{-0.7}(1.3i) =", mp.pcfd(-0.7, 1.3j))
    print("density(c=1, a=0.5, lambda=1), unnormalised =", repr(density_ode_continuation(1.0, 0.5, 1.0)))
    print("density(c=1, a=0.5, lambda=-1), unnormalised =", repr(density_ode_continuation(1.0, 0.5, -1.0)))
    g, mass = resolvent_riemann(2j)
    print("G(2i), c=1, a=0, 1e6-point Riemann sum =", repr(g), " mass", mass)
    print("E (l1-l2)^2, N=2, beta=2 =", repr(two_particle_gap_moment()))
