"""Crossover densities of two- and one-dimensional Coulomb gases.

The crossover regime takes the inverse temperature beta = 2c/N. Its
large-N one-particle densities interpolate between the Boltzmann law
of a single particle (c = 0) and the equilibrium measure (c -> infinity).
The package computes them in the plane (``radial``, ``free_energy``) and
on the line (``crossover1d``). It samples the finite-N gas
(``sampler``, ``estimators``) and checks the exact finite-N identities
tying the two together (``diagnostics``, ``checks``).
"""

from . import errors
from .crossover1d import (
    Crossover1DParams,
    Density1D,
    c_zero_density,
    closed_form_resolvent,
    crossover_density,
    gaussian_density_closed_form,
    resolvent,
    riccati_residual,
)
from .diagnostics import (
    DiagnosticsReport,
    TestFunction,
    loop_residual_1d,
    ward_expectation,
    ward_terms,
)
from .estimators import estimate_line_density, estimate_pair_correlation, estimate_radial_density
from .free_energy import free_energy, minimize_free_energy_radial
from .io import read_checkpoint, read_table, write_checkpoint, write_table
from .potentials import PotentialSpec, eval_1d, eval_2d
from .radial import (
    RadialDensity,
    RadialProblem,
    limit_density,
    ode_integral_identity,
    small_r_expansion,
    solve_radial,
)
from .sampler import GasConfig, GasEnsemble, burn_in, initial_ensemble, run_chain
from .specfun import gamma, kummer_m, kummer_u, parabolic_cylinder_d

__version__ = "0.1.0"

__all__ = [
    "errors",
    "Crossover1DParams",
    "Density1D",
    "c_zero_density",
    "closed_form_resolvent",
    "crossover_density",
    "gaussian_density_closed_form",
    "resolvent",
    "riccati_residual",
    "DiagnosticsReport",
    "TestFunction",
    "loop_residual_1d",
    "ward_expectation",
    "ward_terms",
    "estimate_line_density",
    "estimate_pair_correlation",
    "estimate_radial_density",
    "free_energy",
    "minimize_free_energy_radial",
    "read_checkpoint",
    "read_table",
    "write_checkpoint",
    "write_table",
    "PotentialSpec",
    "eval_1d",
    "eval_2d",
    "RadialDensity",
    "RadialProblem",
    "limit_density",
    "ode_integral_identity",
    "small_r_expansion",
    "solve_radial",
    "GasConfig",
    "GasEnsemble",
    "burn_in",
    "initial_ensemble",
    "run_chain",
    "gamma",
    "kummer_m",
    "kummer_u",
    "parabolic_cylinder_d",
]
