"""Mountain-pass geometry, saddle search and the continuation in mu."""

from .continuation import ContinuationResult, continuation
from .geometry import (
    RimEstimate,
    default_rim_radius,
    endpoint_check,
    find_endpoint,
    rim_minimum,
)
from .saddle import (
    SaddleResult,
    SaddleSearch,
    level_and_norm_audit,
    ray_level_check,
    saddle_search,
)
