"""Utility functions for the logchoquard package."""

import numpy as np
import torch

from .input_validation import typecheck
from .types import Float1dTensor, FloatSequence, float_dtype


def kahan_sum(values) -> float:
    """Compensated (Kahan) summation of a one-dimensional array."""
    total = 0.0
    compensation = 0.0
    for value in np.asarray(values, dtype=np.float64).tolist():
        y = value - compensation
        t = total + y
        compensation = (t - total) - y
        total = t
    return total


def as_tensor(values) -> torch.Tensor:
    """Convert a sequence or an array to a tensor with the package dtype."""
    if isinstance(values, torch.Tensor):
        return values.to(float_dtype)
    return torch.as_tensor(np.asarray(values, dtype=np.float64)).to(
        float_dtype
    )


@typecheck
def loglog_slope(x: FloatSequence, y: FloatSequence) -> float:
    """Least-squares slope of log(y) against log(x).

    Parameters
    ----------
    x
        positive abscissas
    y
        positive ordinates

    Returns
    -------
    float
        the fitted slope
    """
    lx = np.log(np.asarray(x, dtype=np.float64))
    ly = np.log(np.asarray(y, dtype=np.float64))
    slope, _ = np.polyfit(lx, ly, deg=1)
    return float(slope)


@typecheck
def empirical_order(
    parameters: FloatSequence, errors: FloatSequence
) -> float:
    """Observed convergence order of errors as the parameter goes to zero."""
    return loglog_slope(parameters, errors)


@typecheck
def positive_part(values: Float1dTensor) -> Float1dTensor:
    """Nodewise positive part."""
    return torch.clamp(values, min=0)
