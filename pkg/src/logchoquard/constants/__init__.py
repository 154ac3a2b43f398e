"""Explicit constants of the logarithmic Choquard problem."""

from .bundle import ConstantsReport, constants_bundle, constants_checks
from .formulas import (
    AlphaStar,
    J_frak,
    K_frak,
    SeminormBounds,
    T_frak,
    alpha_star_upper,
    beta_0,
    decay_exponent,
    floor_strict,
    fractional_factorial,
    gamma_bound,
    level_threshold,
    mu_N,
    norm_cap,
    phi_exponent_index,
    primitive_decay_exponent,
    ray_scale_lower,
    riesz_constant,
    rim_radius_cap,
    seminorm_bounds,
    sphere_measure,
    unit_ball_volume,
)
from .problem import ProblemParams
