"""
Finite-N gas against the mean-field density
===========================================

Metropolis sampling of N particles at beta = 2c/N, radial histogram with
batch-means errors, and the solved density averaged over the same bins.
N = 200 keeps the run under a minute; the test suite uses N = 1000.
"""

import numpy as np

from coulomb_crossover import (
    GasConfig,
    PotentialSpec,
    RadialProblem,
    burn_in,
    estimate_radial_density,
    run_chain,
    solve_radial,
)
from coulomb_crossover.estimators import bin_average_radial

pot = PotentialSpec.radial_monomial(1.0)
config = GasConfig(2, pot, 200, c=1.0, seed=3, burn_in=4000)
ensemble, sweeps = burn_in(config)
print(f"burn-in {sweeps} sweeps, acceptance {ensemble.acceptance_rate:.2f}")

edges = np.linspace(0.0, 3.5, 15)
est = estimate_radial_density(run_chain(config, ensemble, sweeps=20_000, thin=5), edges)
theory = bin_average_radial(solve_radial(RadialProblem(pot, 1.0)), edges)

# %%
print("   r      MC           mean field   z")
for r, g, err, t in zip(est.centers, est.normalized_density, est.std_error, theory):
    print(f"{r:5.2f}  {g:.5f}±{err:.5f}  {t:.5f}   {(g - t) / err:+.2f}")
