"""
Kummer functions and parabolic cylinder functions
=================================================

Complex-argument M(a, b, z) and U(a, b, z), the parabolic cylinder
function D_nu, and the identities the package checks them against.
"""

import cmath

import numpy as np

from coulomb_crossover import gamma, kummer_m, kummer_u, parabolic_cylinder_d
from coulomb_crossover.checks import specfun_checks

# %%
# U decays like z^-a away from the negative real axis.
for z in (10.0, 100.0, 100j, -100.0 + 1e-3j):
    print(f"z = {z}: z^a U(0.5, 0.5, z) = {complex(z**0.5 * kummer_u(0.5, 0.5, z)):.6f}")

# %%
# Wronskian M U' - M' U = -Gamma(b)/Gamma(a) z^-b e^z.
a, b, z = 0.7, 1.3, 2.0 - 1.0j
m, u = kummer_m(a, b, z), kummer_u(a, b, z)
w = m * (-a * kummer_u(a + 1, b + 1, z)) - a / b * kummer_m(a + 1, b + 1, z) * u
print("Wronskian ratio:", w / (-gamma(b) / gamma(a) * cmath.exp(-b * cmath.log(z) + z)))

# %%
# D_nu at a few points, and the full property suite.
print("D_{-0.5}(x):", np.round(parabolic_cylinder_d(-0.5, np.array([0.0, 1.0, 2.0])).real, 8))
for name, value, tol in specfun_checks():
    print(f"{name:28s} {value:.2e}  (tolerance {tol:g})")
