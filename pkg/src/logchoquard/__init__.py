"""logchoquard: the logarithmic fractional Choquard equation in python."""

from .cli import *
from .constants import *
from .energy import *
from .globals import float_dtype, int_dtype, num_workers
from .input_validation import *
from .kernels import *
from .mountain_pass import *
from .nonlinearity import *
from .optimization import *
from .poisson import *
from .radial import *
from .types import *
from .utils import *
from .verification import *

__all__ = [
    "cli",
    "constants",
    "energy",
    "errors",
    "input_validation",
    "kernels",
    "mountain_pass",
    "nonlinearity",
    "optimization",
    "poisson",
    "radial",
    "types",
    "utils",
    "verification",
]
