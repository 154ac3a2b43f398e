"""Poisson potential of the solutions with its asymptotic and local audits."""

from .decay import DecayFit, F_decay_check, decay_fit, gmu_convolution_bound
from .potential import (
    PotentialReport,
    asymptotic_check,
    lgamma_norm,
    logF_integral,
    poisson_potential,
    potential_from_density,
)
from .regularity import (
    LaplaceResidual,
    holder_bound_rhs,
    holder_check,
    laplace_refinement_order,
    laplace_residual_2d,
)
