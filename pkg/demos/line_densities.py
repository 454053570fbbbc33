"""
Crossover densities on the line
===============================

The density for V = x^2/2 - a log|x| in closed form through Kummer's U,
its normalisation, and the Riccati equation satisfied by its Stieltjes
transform.
"""

import warnings

import numpy as np

from coulomb_crossover import (
    Crossover1DParams,
    crossover_density,
    gaussian_density_closed_form,
    resolvent,
    riccati_residual,
)
from coulomb_crossover.errors import Collapsed, OutsideValidity

# %%
# Families of curves for three values of a.
for a in (0.5, 0.0, -0.5):
    print(f"a = {a:g}")
    for c in (10.0, 1.0, 0.0, -0.5, -0.9):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", OutsideValidity)
                d = crossover_density(Crossover1DParams(c, a))
        except Collapsed as exc:
            print(f"  c = {c:5g}: {exc}")
            continue
        rho1 = np.interp(1.0, d.grid, d.values)
        print(f"  c = {c:5g}: Z = {d.z_norm:.6g}, rho(1) = {rho1:.4g}, support to |lambda| = {d.grid[-1]:.3g}")

# %%
# For a = 0 the density is a ratio of parabolic cylinder functions.
d = crossover_density(Crossover1DParams(1.0, 0.0))
print("max relative gap to the parabolic-cylinder form:",
      np.max(np.abs(d.values / gaussian_density_closed_form(1.0, d.grid) - 1)))

# %%
# The resolvent G(z) = int rho / (lambda - z) solves
# 1 + G (z - a/z) + c G^2 + G' = 0.
d = crossover_density(Crossover1DParams(1.0, 0.5))
for z in (0.5 + 0.7j, -2.0 + 0.5j, 3j):
    print(f"G({z}) = {complex(resolvent(d, z)):.6f}, residual {riccati_residual(d, z):.1e}")
