"""Logarithmic and power kernels, radial convolutions and kernel checks."""

from .checks import (
    HLSRatio,
    KernelConvergence,
    check_kernel_inequalities,
    hls_ratio,
    kernel_convergence_order,
    phi_power_bound_check,
)
from .convolution import (
    ConvolutionOperator,
    convolution_operator,
    radial_convolution,
)
from .functions import (
    KernelSpec,
    angular_average,
    angular_average_closed_form,
    kernel_eval,
    sphere_average,
)
from .linear_operator import LinearOperator
