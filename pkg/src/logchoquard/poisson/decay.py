"""Decay of the solutions and of F(u), and the bound on G_mu * F(u)."""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np
import torch

from ..constants import (
    ProblemParams,
    decay_exponent,
    primitive_decay_exponent,
    unit_ball_volume,
)
from ..energy import power_kernel
from ..errors import InvalidParameterError, NonpositiveFieldError
from ..input_validation import convert_inputs, typecheck
from ..kernels import convolution_operator
from ..nonlinearity import BaseNonlinearity
from ..radial import RadialField
from ..types import Float1dTensor, Number
from ..utils import loglog_slope
from ..verification import CheckRecord, make_record

logger = logging.getLogger(__name__)

# minimal width of the fitting window, in decades
MIN_DECADES = 1.5


class DecayFit(NamedTuple):
    """Power decay of a field fitted on a window of radii.

    ``exponent`` is minus the least-squares slope of log u against log r,
    infinite when u vanishes on the window (super-polynomial decay).
    ``sup_ratio`` is the supremum of u(r) r^a over the window and
    ``start_ratio`` its value at the first node of the window.
    """

    exponent: float
    a: float
    sup_ratio: float
    start_ratio: float
    window: tuple[float, float]

    @property
    def super_polynomial(self) -> bool:
        return self.exponent == float("inf")

    def record(self, factor: float = 10.0) -> CheckRecord:
        return make_record(
            "decay-bound",
            "decay-exponent",
            measured=self.sup_ratio,
            bound=factor * self.start_ratio,
            note=f"fitted exponent {self.exponent:.6g}, a={self.a:.6g}",
        )


def _default_window(u: RadialField) -> tuple[float, float]:
    r_max = u.grid.r_max
    return (r_max / 40, 0.8 * r_max)


def _fit(
    u: RadialField, window: tuple[float, float], a: float
) -> DecayFit:
    lo, hi = window
    if lo <= 0 or np.log10(hi / lo) < MIN_DECADES - 1e-9:
        msg = (
            f"The fitting window must span at least {MIN_DECADES} decades,"
            + f" got ({lo}, {hi})"
        )
        raise InvalidParameterError(msg)
    r = u.nodes.cpu().numpy()
    values = u.values.detach().cpu().numpy()
    inside = (r >= lo) & (r <= hi)
    if inside.sum() < 3:
        msg = f"Fewer than three nodes in the window ({lo}, {hi})"
        raise InvalidParameterError(msg)
    if (values[inside] < 0).any():
        msg = "The field takes negative values on the fitting window"
        raise NonpositiveFieldError(msg)
    positive = inside & (values > 0)
    if positive.sum() < 3:
        exponent = float("inf")
    else:
        exponent = -loglog_slope(r[positive], values[positive])
    ratio = values[inside] * r[inside] ** a
    return DecayFit(
        exponent=float(exponent),
        a=float(a),
        sup_ratio=float(ratio.max()),
        start_ratio=float(ratio[0]),
        window=(float(lo), float(hi)),
    )


@typecheck
def decay_fit(
    u: RadialField,
    window: tuple[Number, Number] | None = None,
    *,
    a: Number | None = None,
    N: int | None = None,
    s: Number | None = None,
) -> DecayFit:
    """Fit u ~ r^{-b} on a window and measure sup u(r) r^a there.

    The exponent a is given directly or as s (2N + 3) / (2 (N - s)). The
    default window is (r_max/40, 0.8 r_max).

    Raises
    ------
    InvalidParameterError
        if the window spans less than 1.5 decades or neither a nor (N, s)
        is given
    NonpositiveFieldError
        if u takes negative values on the window

    Examples
    --------
    >>> grid = lcq.RadialGrid(lcq.GridSpec(r_max=50.0))
    >>> u = lcq.RadialField(grid, function=lambda r: r.clamp(min=1) ** -2)
    >>> round(lcq.decay_fit(u, (1.0, 40.0), a=2.0).exponent, 1)
    2.0
    """
    if a is None:
        if N is None or s is None:
            msg = "Give the exponent a or the pair (N, s)"
            raise InvalidParameterError(msg)
        a = decay_exponent(N, s)
    if window is None:
        window = _default_window(u)
    fit = _fit(u, (float(window[0]), float(window[1])), float(a))
    logger.debug("Decay fit on %s: exponent %.6g", fit.window, fit.exponent)
    return fit


@typecheck
def F_decay_check(
    u: RadialField,
    nl: BaseNonlinearity,
    params: ProblemParams,
    window: tuple[Number, Number] | None = None,
) -> list[CheckRecord]:
    """Fitted decay of F(u) against N (2N + 3) / (2 (N - s)) and N."""
    N, s = params.N, params.s
    with torch.no_grad():
        F = u.with_values(nl.primitive(u.values))
    target = primitive_decay_exponent(N, s)
    fit = decay_fit(F, window, a=target)
    return [
        make_record(
            "primitive-decay-exponent",
            "primitive-decay",
            measured=fit.exponent,
            bound=target,
            upper=False,
            note="fitted decay of F(u)",
        ),
        make_record(
            "primitive-decay-integrable",
            "primitive-decay",
            measured=fit.exponent,
            bound=N,
            upper=False,
            note="log(1 + |x|) F(u) is integrable beyond exponent N",
        )._replace(passed=bool(fit.exponent > N)),
    ]


@convert_inputs
@typecheck
def gmu_convolution_bound(
    u: RadialField,
    nl: BaseNonlinearity,
    mu: Number,
    x_samples: Float1dTensor,
    N: int,
) -> CheckRecord:
    """Check (G_mu * F(u))(x) <= (C/mu)((|x|/2)^{-mu} - 1) + C_0.

    C = ||F(u)||_1 and C_0 = sup F(u) int_{B_1} G_mu = sup F(u) omega_N /
    (N - mu) are the measured constants. The record holds the largest
    excess of the left side over the bound on the sample radii.
    """
    grid = u.grid
    kernel = power_kernel(mu)
    with torch.no_grad():
        F = nl.primitive(u.values)
        C = float(grid.integrate(grid.at_points(F), N))
        C_0 = float(F.max()) * unit_ball_volume(N) / (N - mu)
        lhs = convolution_operator(grid, kernel, N).at(x_samples)(F)
    rhs = (C / mu) * ((x_samples / 2) ** (-mu) - 1) + C_0
    excess = lhs - rhs
    k = int(torch.argmax(excess))
    return make_record(
        "gmu-bound",
        "gmu-estimate",
        measured=float(lhs[k]),
        bound=float(rhs[k]),
        witness=float(x_samples[k]),
        slack=1e-12 * max(1.0, abs(float(rhs[k]))),
        note=f"C={C:.6g}, C_0={C_0:.6g}, mu={mu:g}",
    )
