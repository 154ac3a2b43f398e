"""Planar Laplacian residual of the potential and the Holder bound."""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np
import torch

from ..constants import riesz_constant, unit_ball_volume
from ..errors import InvalidParameterError, WrongDimensionError
from ..input_validation import typecheck
from ..kernels import KernelSpec, convolution_operator
from ..radial import RadialField
from ..types import Number, float_dtype
from ..utils import loglog_slope
from ..verification import CheckRecord, make_record
from .potential import PotentialReport

logger = logging.getLogger(__name__)

# direction of the ray carrying the stencil centers
STENCIL_ANGLE = np.pi / 7


class LaplaceResidual(NamedTuple):
    """Five-point residual of -Delta phi = F on an annulus of the plane."""

    residual: float
    h: float
    annulus: tuple[float, float]

    def record(self, bound: float = 1e-3) -> CheckRecord:
        return make_record(
            f"laplace-residual-h-{self.h:g}",
            "laplace-residual",
            measured=self.residual,
            bound=bound,
            note=f"five-point stencil on the annulus {self.annulus}",
        )


def _five_point(report: PotentialReport, centers: np.ndarray, h: float):
    """-Delta_h phi at the centers.

    phi is evaluated at every stencil radius with the logarithmic
    convolution, not interpolated.
    """
    shifts = np.array([[0, 0], [h, 0], [-h, 0], [0, h], [0, -h]])
    points = centers[:, None, :] + shifts[None]
    radii = torch.as_tensor(
        np.linalg.norm(points, axis=-1).ravel(), dtype=float_dtype
    )
    grid = report.density.grid
    operator = convolution_operator(grid, KernelSpec("log"), 2).at(radii)
    with torch.no_grad():
        phi = riesz_constant(2) * operator(report.density)
    phi = phi.reshape(len(centers), 5)
    return -(phi[:, 1:].sum(dim=1) - 4 * phi[:, 0]) / h**2


@typecheck
def laplace_residual_2d(
    report: PotentialReport,
    *,
    annulus: tuple[Number, Number] = (0.5, 2.0),
    h: Number = 0.05,
    n_centers: int = 32,
) -> LaplaceResidual:
    """Relative residual max |-Delta_h phi - F| / max F on an annulus.

    The five-point Laplacian is applied at ``n_centers`` points of a ray of
    the plane; phi is evaluated at the stencil points from the density, and
    F is the nodal interpolant the potential was built from. The residual
    is O(h^2) plus the quadrature error of phi.

    Raises
    ------
    WrongDimensionError
        if the report is not planar
    InvalidParameterError
        if the stencil does not fit in the annulus
    """
    if report.N != 2:
        msg = (
            "The Laplacian residual is only defined in the plane, got"
            + f" N={report.N}"
        )
        raise WrongDimensionError(msg)
    lo, hi = float(annulus[0]), float(annulus[1])
    if not h < lo < hi <= report.density.grid.r_max - h:
        msg = f"The stencil of width {h} does not fit in the annulus {annulus}"
        raise InvalidParameterError(msg)
    r = np.linspace(lo, hi, n_centers)
    direction = np.array([np.cos(STENCIL_ANGLE), np.sin(STENCIL_ANGLE)])
    centers = r[:, None] * direction[None]
    laplacian = _five_point(report, centers, float(h))
    F = report.density(torch.as_tensor(r, dtype=float_dtype))
    scale = max(report.density.sup, 1e-300)
    residual = float((laplacian - F).abs().max()) / scale
    logger.debug("Five-point residual %.3e at h=%g", residual, h)
    return LaplaceResidual(residual=residual, h=float(h), annulus=(lo, hi))


@typecheck
def laplace_refinement_order(
    report: PotentialReport,
    *,
    annulus: tuple[Number, Number] = (0.5, 2.0),
    h_values: tuple[Number, ...] = (0.2, 0.1, 0.05),
) -> tuple[float, tuple[float, ...]]:
    """Observed order of the five-point residual under halving of h."""
    residuals = tuple(
        laplace_residual_2d(report, annulus=annulus, h=h).residual
        for h in h_values
    )
    return loglog_slope(list(h_values), list(residuals)), residuals


def _sphere_rule(N: int, order: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Polar angles and weights with int_{S^{N-1}} = sum w g(theta)."""
    x, w = np.polynomial.legendre.leggauss(order)
    theta = np.pi * (x + 1) / 2
    weights = np.pi / 2 * w * np.sin(theta) ** (N - 2)
    return theta, (N - 1) * unit_ball_volume(N - 1) * weights


@typecheck
def holder_bound_rhs(
    u: RadialField,
    K: Number,
    R: Number,
    x0_radius: Number,
    N: int,
    s: Number,
    *,
    n_segments: int = 64,
) -> float:
    """Right-hand side of the local Holder estimate at a center x0.

    (K R^N)^{s/(N-s)} + ||u||_{L^inf(B_{2R}(x0))}
    + R^N (int_{|y - x0| > 2R} |u|^{N/s-1} |x0 - y|^{-2N} dy)^{s/(N-s)}

    The exterior integral is computed in polar coordinates around x0,
    Gauss-Legendre in the polar angle and on a geometric partition of
    [2R, |x0| + r_max] in the distance.

    Raises
    ------
    InvalidParameterError
        if R <= 0, K < 0 or x0_radius < 0
    """
    if R <= 0 or K < 0 or x0_radius < 0:
        msg = (
            "Expected R > 0, K >= 0 and a nonnegative center radius, got"
            + f" R={R}, K={K}, x0_radius={x0_radius}"
        )
        raise InvalidParameterError(msg)
    exponent = s / (N - s)
    values = u.values.detach().abs()

    lo, hi = max(0.0, x0_radius - 2 * R), x0_radius + 2 * R
    inside = (u.nodes >= lo) & (u.nodes <= hi)
    ends = u(torch.tensor([lo, min(hi, u.grid.r_max)], dtype=float_dtype))
    sup = max(
        float(values[inside].max()) if bool(inside.any()) else 0.0,
        float(ends.abs().max()),
    )

    t_max = x0_radius + u.grid.r_max
    tail = 0.0
    if t_max > 2 * R:
        edges = np.geomspace(2 * R, t_max, n_segments + 1)
        x, w = np.polynomial.legendre.leggauss(16)
        widths = (edges[1:] - edges[:-1])[:, None]
        t = (edges[:-1, None] + widths * (x + 1) / 2).ravel()
        wt = (widths * w / 2).ravel()
        theta, wtheta = _sphere_rule(N)
        rho = np.sqrt(
            x0_radius**2
            + t[:, None] ** 2
            + 2 * x0_radius * t[:, None] * np.cos(theta)[None]
        )
        u_rho = u(torch.as_tensor(rho.ravel(), dtype=float_dtype))
        integrand = (u_rho.abs() ** (N / s - 1)).reshape(rho.shape).numpy()
        average = integrand @ wtheta
        tail = float(np.sum(wt * t ** (N - 1 - 2 * N) * average))

    value = (K * R**N) ** exponent + sup + R**N * tail**exponent
    logger.debug("Holder bound at |x0|=%g: %.6g", x0_radius, value)
    return float(value)


@typecheck
def holder_check(
    u: RadialField,
    K: Number,
    R: Number,
    centers: tuple[Number, ...],
    N: int,
    s: Number,
) -> CheckRecord:
    """Finiteness of the Holder bound at several centers."""
    values = [holder_bound_rhs(u, K, R, x0, N, s) for x0 in centers]
    worst = max(values)
    record = make_record(
        "holder-bound",
        "holder-bound",
        measured=worst,
        bound=float("inf"),
        witness=float(centers[values.index(worst)]),
        note=f"K={K:.6g}, R={R:g}, centers {tuple(centers)}",
    )
    return record._replace(passed=bool(np.isfinite(worst)))
