"""
Free energy and an independent minimiser
========================================

Two routes to the same radial density: the shooting/relaxation solver of
the mean-field ODE, and entropic mirror descent on the discretised free
energy. Their agreement is the oracle pairing used by the test suite.
"""

import numpy as np

from coulomb_crossover import (
    PotentialSpec,
    RadialProblem,
    free_energy,
    limit_density,
    minimize_free_energy_radial,
    solve_radial,
)

pot = PotentialSpec.radial_monomial(1.0)

# %%
for c in (0.5, 1.0, 5.0):
    solved = solve_radial(RadialProblem(pot, c))
    minimised = minimize_free_energy_radial(pot, c)
    bulk = solved.values > 1e-3 * solved.values.max()
    gap = np.max(np.abs(minimised.values[bulk] - solved.values[bulk])) / solved.values.max()
    fe = free_energy(solved, c)
    print(f"c = {c:g}: sup gap {gap:.1e}, F = {fe.total:.6f} "
          f"(energy {fe.energy_term:.4f}, interaction {fe.interaction_term:.4f}, entropy {fe.entropy_term:.4f})")

# %%
# The solution has lower free energy than either envelope density.
c = 1.0
solved = solve_radial(RadialProblem(pot, c))
print("F[solved]      =", free_energy(solved, c).total)
for which in ("c_zero", "c_infinity"):
    print(f"F[{which:10s}] =", free_energy(limit_density(solved.problem, which), c).total)
