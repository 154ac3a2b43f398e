"""Norms, seminorms and Moser-Trudinger functionals of radial fields."""

from __future__ import annotations

import logging
from collections.abc import Callable
from math import factorial
from typing import NamedTuple

import numpy as np
import torch

from ..constants import (
    ProblemParams,
    phi_exponent_index,
    sphere_measure,
)
from ..errors import (
    GridMisalignedError,
    InvalidParameterError,
    OverflowGuardError,
)
from ..input_validation import typecheck
from ..types import FloatTensor, Number, float_dtype
from ..utils import as_tensor, loglog_slope
from .field import RadialField
from .grid import RadialGrid
from .potential import RadialPotential
from .seminorm import seminorm_quadrature

logger = logging.getLogger(__name__)

# exp overflows in float64 beyond this argument
EXP_GUARD = 700.0


def _potential_at_points(grid: RadialGrid, V) -> FloatTensor:
    if V is None:
        return torch.ones_like(grid.points)
    return torch.as_tensor(V(grid.points), dtype=float_dtype)


def lp_integral(
    values: FloatTensor, grid: RadialGrid, p: Number, N: int, V=None
) -> FloatTensor:
    """N omega_N int V |u|^p r^{N-1} dr for nodal values (differentiable)."""
    weights = _potential_at_points(grid, V)
    integrand = weights * grid.at_points(values).abs() ** p
    return grid.integrate(integrand, N)


@typecheck
def lp_norm(
    u: RadialField, p: Number, *, N: int, V: Callable | None = None
) -> float:
    """Weighted Lebesgue norm of a radial field.

    (N omega_N int_0^{r_max} V(r) |u(r)|^p r^{N-1} dr)^{1/p}, with per-segment
    Gauss rules.

    Parameters
    ----------
    u
        the field
    p
        exponent, p >= 1
    N
        dimension
    V
        potential (a `RadialPotential` or any function of the radius),
        V = 1 if None

    Returns
    -------
    float
        the norm
    """
    if p < 1:
        msg = f"The exponent p must be at least 1, got p={p}"
        raise InvalidParameterError(msg)
    value = lp_integral(u.values, u.grid, p, N, V)
    return float(value) ** (1 / p)


@typecheck
def gagliardo_seminorm(u: RadialField, s: Number, N: int) -> float:
    """Gagliardo seminorm [u]_{s,N/s}^{N/s} by radial reduction.

    The field is extended by zero beyond r_max, so it should vanish at the
    last node.

    Examples
    --------
    >>> grid = lcq.RadialGrid(lcq.GridSpec(n_uniform=32, r_max=4.0))
    >>> u = lcq.RadialField(grid, values=torch.zeros(grid.n_nodes,
    ...                                              dtype=torch.float64))
    >>> lcq.gagliardo_seminorm(u, 0.5, 2)
    0.0
    """
    quadrature = seminorm_quadrature(u.grid, N, float(s))
    return float(quadrature(u.values))


@typecheck
def v_norm(
    u: RadialField, params: ProblemParams, V: Callable | None = None
) -> float:
    """||u||_V^{N/s} = [u]^{N/s} + int V |u|^{N/s}.

    V defaults to the constant V_upper of ``params``.
    """
    N, s = params.N, params.s
    if V is None:
        V = RadialPotential.from_params(params)
    seminorm = gagliardo_seminorm(u, s, N)
    potential = float(lp_integral(u.values, u.grid, N / s, N, V))
    return seminorm + potential


def _phi_series_tail(
    t: FloatTensor, start: int, n_terms: int = 40
) -> FloatTensor:
    """sum_{j >= start} t^j / j!, for moderate t."""
    term = t**start / factorial(start)
    total = term.clone()
    for j in range(start + 1, start + n_terms):
        term = term * t / j
        total = total + term
    return total


@typecheck
def phi_ns(t: FloatTensor | Number, N: int, s: Number) -> FloatTensor:
    """Moser-Trudinger function Phi_{N,s}(t) = e^t - sum_{j <= j_p - 2} t^j/j!.

    j_p is the smallest integer j >= N/s. The low-order part is removed
    through the series tail for t < 1 to avoid cancellation.

    Raises
    ------
    OverflowGuardError
        if some argument exceeds 700

    Examples
    --------
    >>> float(lcq.phi_ns(1.0, 2, 0.5))  # e - 1 - 1 - 1/2
    0.21828182845904...
    """
    t = as_tensor(t)
    if torch.any(t > EXP_GUARD):
        msg = (
            f"Exponential argument {float(t.max())} exceeds the overflow guard"
            + f" {EXP_GUARD}"
        )
        raise OverflowGuardError(msg)
    start = phi_exponent_index(N, s) - 1
    small = t.abs() < 1
    t_small = torch.where(small, t, torch.zeros_like(t))
    t_large = torch.where(small, torch.ones_like(t), t)
    partial = sum(t_large**j / factorial(j) for j in range(start))
    large = torch.exp(t_large) - partial
    return torch.where(small, _phi_series_tail(t_small, start), large)


@typecheck
def log_phi_ns(t: FloatTensor | Number, N: int, s: Number) -> FloatTensor:
    """log Phi_{N,s}(t) without overflow, for t > 0."""
    t = as_tensor(t)
    start = phi_exponent_index(N, s) - 1
    moderate = t < 50
    t_mod = torch.where(moderate, t, torch.ones_like(t))
    t_big = torch.where(moderate, torch.full_like(t, 100.0), t)
    partial = sum(t_big**j / factorial(j) for j in range(start))
    big = t_big + torch.log1p(-partial * torch.exp(-t_big))
    return torch.where(moderate, torch.log(phi_ns(t_mod, N, s)), big)


@typecheck
def mt_functional(u: RadialField, alpha: Number, N: int, s: Number) -> float:
    """Moser-Trudinger functional N omega_N int Phi_{N,s}(alpha |u|^{N/(N-s)}).

    The integral runs over [0, r_max]; the field vanishes beyond.

    Raises
    ------
    OverflowGuardError
        if alpha |u|^{N/(N-s)} exceeds 700 somewhere
    """
    if alpha <= 0:
        msg = f"alpha must be positive, got alpha={alpha}"
        raise InvalidParameterError(msg)
    argument = alpha * u.at_points().abs() ** (N / (N - s))
    return float(u.grid.integrate(phi_ns(argument, N, s), N))


@typecheck
def plateau_test_function(R: Number, grid: RadialGrid) -> RadialField:
    """Plateau w = 1 on [0, R/2], 2 - 2r/R on (R/2, R), 0 beyond.

    Raises
    ------
    InvalidParameterError
        if R is not in (0, 1]
    GridMisalignedError
        if R/2 or R is not a node of the grid

    Examples
    --------
    >>> grid = lcq.RadialGrid(lcq.GridSpec(breakpoints=(1 / 6, 1 / 3)))
    >>> w = lcq.plateau_test_function(1 / 3, grid)
    >>> float(w(torch.tensor([0.25], dtype=torch.float64))[0])
    0.5
    """
    if not 0 < R <= 1:
        msg = f"The radius R must lie in (0, 1], got R={R}"
        raise InvalidParameterError(msg)
    for corner in (R / 2, R):
        if not grid.has_node(corner):
            msg = (
                f"The plateau corner r={corner} is not a grid node, add it to"
                + " the grid breakpoints"
            )
            raise GridMisalignedError(msg)

    def profile(r):
        return torch.clamp(2 - 2 * r / R, min=0.0, max=1.0)

    return RadialField(grid, function=profile)


@typecheck
def hat_field(
    grid: RadialGrid, radius: Number = 1.0, height: Number = 1.0
) -> RadialField:
    """Radial hat height (1 - r/radius)_+, with its kink at the origin."""
    if radius <= 0:
        msg = f"The radius of the hat must be positive, got {radius}"
        raise InvalidParameterError(msg)

    def profile(r):
        return height * torch.clamp(1 - r / radius, min=0)

    return RadialField(grid, function=profile)


@typecheck
def bump_field(
    grid: RadialGrid, radius: Number = 1.0, height: Number = 1.0
) -> RadialField:
    """Smooth compactly supported bump height (1 - (r/radius)^2)^2_+."""

    def profile(r):
        return height * torch.clamp(1 - (r / radius) ** 2, min=0) ** 2

    return RadialField(grid, function=profile)


class TailBound(NamedTuple):
    """Fitted power decay of a field on the last decade and the L^p tail."""

    exponent: float
    amplitude: float
    lp_tail: float


@typecheck
def tail_bound(
    u: RadialField, p: Number, N: int, V_upper: Number = 1.0
) -> TailBound:
    """Bound on the L^p mass lost by the zero extension beyond r_max.

    The field is fitted by A r^{-b} on the last decade of positive values
    and V_upper N omega_N int_{r_max}^inf A^p r^{N-1-bp} dr is returned
    (infinite if bp <= N). A field without positive tail is compactly
    supported and has no tail.
    """
    r = u.nodes.cpu().numpy()
    values = u.values.detach().abs().cpu().numpy()
    window = (r >= u.grid.r_max / 10) & (values > 0)
    if window.sum() < 3:
        return TailBound(exponent=float("inf"), amplitude=0.0, lp_tail=0.0)
    slope = loglog_slope(r[window], values[window])
    b = -slope
    log_amplitude = np.mean(np.log(values[window]) + b * np.log(r[window]))
    A = float(np.exp(log_amplitude))
    R = u.grid.r_max
    if b * p <= N:
        return TailBound(exponent=b, amplitude=A, lp_tail=float("inf"))
    lp_tail = (
        V_upper * sphere_measure(N) * A**p * R ** (N - b * p) / (b * p - N)
    )
    return TailBound(exponent=b, amplitude=A, lp_tail=float(lp_tail))


class RefinementOrder(NamedTuple):
    """Values along successive halvings of the grid and the measured order."""

    values: tuple[float, ...]
    differences: tuple[float, ...]
    order: float


@typecheck
def seminorm_refinement_order(
    function: Callable,
    s: Number,
    N: int,
    grid: RadialGrid,
    levels: int = 3,
) -> RefinementOrder:
    """Measured convergence order of the seminorm under segment halving.

    ``function`` (of the radius) is interpolated on ``grid`` and on
    ``levels - 1`` successive refinements. The order is the least-squares
    slope of log|S_{k+1} - S_k| against log of the maximal segment length.
    """
    if levels < 3:
        msg = f"At least three levels are needed, got levels={levels}"
        raise InvalidParameterError(msg)
    values, lengths = [], []
    current = grid
    for _ in range(levels):
        u = RadialField(current, function=function)
        values.append(gagliardo_seminorm(u, s, N))
        lengths.append(current.max_length)
        current = current.refine()
    differences = [abs(b - a) for a, b in zip(values[:-1], values[1:])]
    order = loglog_slope(lengths[:-1], [max(d, 1e-300) for d in differences])
    logger.info("Seminorm refinement: values %s, order %.3f", values, order)
    return RefinementOrder(
        values=tuple(values), differences=tuple(differences), order=order
    )
