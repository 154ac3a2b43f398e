"""Radial grids, fields, norms and the Gagliardo seminorm quadrature."""

from .checks import (
    mt_integrability_check,
    plateau_checks,
    seminorm_oracle_check,
)
from .field import RadialField
from .functionals import (
    EXP_GUARD,
    RefinementOrder,
    TailBound,
    bump_field,
    hat_field,
    gagliardo_seminorm,
    log_phi_ns,
    lp_integral,
    lp_norm,
    mt_functional,
    phi_ns,
    plateau_test_function,
    seminorm_refinement_order,
    tail_bound,
    v_norm,
)
from .grid import RadialGrid
from .monte_carlo import (
    MonteCarloEstimate,
    convolution_monte_carlo,
    gagliardo_monte_carlo,
)
from .potential import RadialPotential
from .seminorm import (
    SeminormQuadrature,
    exterior_kernel,
    radial_kernel,
    seminorm_quadrature,
)
