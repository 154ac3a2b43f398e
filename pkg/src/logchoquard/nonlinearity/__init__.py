"""Nonlinearities of the Choquard term and the audit of their growth."""

from .audit import (
    AssumptionReport,
    calibrate_amplitude,
    default_audit_grid,
    verify_assumptions,
)
from .base import BaseNonlinearity
from .model import (
    ModelNonlinearity,
    ShapeFactor,
    make_model_nonlinearity,
    shape_factor,
)
from .plugin import CallableNonlinearity
