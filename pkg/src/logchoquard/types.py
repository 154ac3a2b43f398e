"""Types aliases and parameter bundles for logchoquard."""

from typing import Literal, NamedTuple

import numpy as np
import torch
from beartype import beartype
from beartype.typing import Annotated
from beartype.vale import Is
from jaxtyping import Float, Float32, Float64, Int, Int64

from .globals import float_dtype, int_dtype

# Type aliases
Number = int | float

correspondence = {
    torch.float32: Float32,
    torch.float64: Float64,
    torch.int64: Int64,
}

JaxFloat = correspondence[float_dtype]
JaxInt = correspondence[int_dtype]

# Numpy array types
FloatArray = Float[np.ndarray, "..."]
Float1dArray = Float[np.ndarray, "_"]
Int1dArray = Int[np.ndarray, "_"]

# Numerical types
FloatTensor = JaxFloat[torch.Tensor, "..."]
Float1dTensor = JaxFloat[torch.Tensor, "_"]
Float2dTensor = JaxFloat[torch.Tensor, "_ _"]
FloatScalar = JaxFloat[torch.Tensor, ""]
Int1dTensor = JaxInt[torch.Tensor, "_"]

FloatSequence = (
    Float[torch.Tensor, "_"]
    | Float[np.ndarray, "_"]
    | list[float]
    | list[Number]
    | tuple[Number, ...]
)

# Scalars constrained to an interval
PositiveNumber = Annotated[Number, Is[lambda x: x > 0]]
UnitInterval = Annotated[Number, Is[lambda x: 0 < x <= 1]]
OpenUnitInterval = Annotated[Number, Is[lambda x: 0 < x < 1]]

MuForm = Literal["literal", "difference"]
StepRuleName = Literal["armijo", "fixed"]


@beartype
class GridSpec(NamedTuple):
    """Parameters of a radial grid.

    Parameters
    ----------
    n_uniform : int, default=256
        Number of uniform segments on [0, 1].
    r_max : float, default=50.0
        Cutoff radius; fields vanish beyond it.
    ratio : float, default=1.1
        Geometric ratio of consecutive segment lengths on [1, r_max]. It must
        not exceed 1.2.
    order : int, default=8
        Order of the Gauss-Legendre rule used on every segment.
    breakpoints : tuple of float, default=()
        Radii inserted as nodes (plateau corners, audit radii).
    """

    n_uniform: Annotated[int, Is[lambda n: n >= 2]] = 256
    r_max: Annotated[Number, Is[lambda r: r > 1]] = 50.0
    ratio: Annotated[Number, Is[lambda q: 1 < q <= 1.2]] = 1.1
    order: Annotated[int, Is[lambda n: 2 <= n <= 32]] = 8
    breakpoints: tuple[Number, ...] = ()


@beartype
class SaddleOptions(NamedTuple):
    """Parameters of the mountain-pass saddle search.

    Parameters
    ----------
    path_points : int, default=41
        Number of points of the discrete path joining 0 to the endpoint.
    step_rule : str, default="armijo"
        Step rule used to move the path maximizer, "armijo" (backtracking) or
        "fixed".
    step_size : float, default=1.0
        Initial (or fixed) step along the preconditioned descent direction.
    tol_residual : float, default=1e-4
        Tolerance on the weak residual of the path maximizer.
    tol_level : float, default=1e-6
        Tolerance on the change of the level between two iterations.
    max_iterations : int, default=2000
        Iteration cap.
    reparametrize_every : int, default=10
        The path is re-parameterized by arc length every this many
        iterations.
    """

    path_points: Annotated[int, Is[lambda n: n >= 3]] = 41
    step_rule: StepRuleName = "armijo"
    step_size: PositiveNumber = 1.0
    tol_residual: PositiveNumber = 1e-4
    tol_level: PositiveNumber = 1e-6
    max_iterations: Annotated[int, Is[lambda n: n >= 1]] = 2000
    reparametrize_every: Annotated[int, Is[lambda n: n >= 1]] = 10
