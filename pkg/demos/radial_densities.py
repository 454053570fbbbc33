"""
Radial crossover densities in the plane
=======================================

Solve the mean-field equation for the Gaussian and the quartic potential
and watch the density move from the Boltzmann law (small c) to the
equilibrium measure (large c), and collapse towards the origin as c
approaches -2.
"""

import math

import numpy as np

from coulomb_crossover import PotentialSpec, RadialProblem, limit_density, solve_radial

# %%
# Q = |z|^2 / 2. At c = 200 the density is flat on a disc of radius
# sqrt(2c); at small c it is close to e^{-r^2/2} / (2 pi).
for alpha in (1.0, 2.0):
    pot = PotentialSpec.radial_monomial(alpha)
    print(f"alpha = {alpha:g}")
    for c in (200.0, 10.0, 1.0, 0.1, -1.0, -1.9):
        d = solve_radial(RadialProblem(pot, c))
        print(f"  c = {c:6g}: g(0) = {d.g0:.6g}, method = {d.method}, |mass - 1| = {d.normalization_residual:.1e}")

# %%
# The large-c envelope at alpha = 1 and c = 200, compared on the bulk.
c = 200.0
d = solve_radial(RadialProblem(PotentialSpec.radial_monomial(1.0), c))
envelope = limit_density(d.problem, "c_infinity").values
b = math.sqrt(2 * c)
bulk = (d.grid >= 0.1 * b) & (d.grid <= 0.9 * b)
print("plateau 1/(2 pi c) =", 1 / (2 * math.pi * c))
print("largest relative deviation on the bulk:", np.max(np.abs(d.values[bulk] / envelope[bulk] - 1)))

# %%
# Peak growth as c decreases towards -2: the density concentrates at 0.
for c in (-1.0, -1.5, -1.8, -1.9):
    g0 = solve_radial(RadialProblem(PotentialSpec.radial_monomial(1.0), c)).g0
    print(f"c = {c:5g}: g(0) / g_c0(0) = {g0 * 2 * math.pi:.3g}")
