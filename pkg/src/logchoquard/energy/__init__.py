"""Approximating energies, their derivatives and the energy audits."""

from .checks import (
    RayProfile,
    expanded_form_check,
    ff_ratio_check,
    gradient_check,
    h_transform_check,
    ps_bound_check,
    psi_growth_check,
    ray_profile,
)
from .functional import (
    Energy,
    EnergyBreakdown,
    energy_log,
    energy_mu,
    gateaux_log,
    gateaux_mu,
    hat_norms,
    power_kernel,
    weak_residual,
    weak_residual_log,
)
