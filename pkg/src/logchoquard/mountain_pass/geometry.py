"""Mountain-pass geometry: endpoint of negative energy and the rim estimate."""

from __future__ import annotations

import logging
from collections.abc import Callable
from typing import NamedTuple

import numpy as np
import torch

from ..constants import ProblemParams, rim_radius_cap
from ..energy import Energy, power_kernel
from ..errors import InvalidParameterError, NoDescentError
from ..input_validation import typecheck
from ..nonlinearity import BaseNonlinearity
from ..radial import (
    RadialField,
    RadialGrid,
    bump_field,
    plateau_test_function,
)
from ..types import Number
from ..verification import CheckRecord, make_record

logger = logging.getLogger(__name__)


def default_rim_radius(N: int, s: float) -> float:
    """Rim radius used when none is given, half the smallness cap."""
    return 0.5 * rim_radius_cap(N, s)


@typecheck
def find_endpoint(
    mu: Number,
    nl: BaseNonlinearity,
    params: ProblemParams,
    grid: RadialGrid,
    V: Callable | None = None,
    *,
    R: Number = 0.25,
    t_start: Number = 1.0,
    t_max: Number = 2.0**40,
) -> RadialField:
    """First field t e0 with J_mu(t e0) < 0 along t = t_start 2^k.

    e0 is the plateau equal to 1 on B_{R/2} and supported in B_R; the grid
    must carry nodes at R/2 and R.

    Raises
    ------
    NoDescentError
        if t exceeds ``t_max`` (or the nonlinearity overflows) before the
        energy becomes negative

    Examples
    --------
    >>> params = lcq.ProblemParams(N=2, s=0.5, tau=0.25)
    >>> grid = lcq.RadialGrid(lcq.GridSpec(breakpoints=(1 / 8, 1 / 4)))
    >>> nl = lcq.make_model_nonlinearity(2, 0.5, lam=2e7)
    >>> e = lcq.find_endpoint(1.0, nl, params, grid)
    >>> lcq.energy_mu(e, 1.0, nl, params).total < 0
    True
    """
    e0 = plateau_test_function(R, grid)
    energy = Energy(grid, power_kernel(mu), nl, params, V)
    t = float(t_start)
    while t <= t_max:
        try:
            with torch.no_grad():
                value = float(energy(t * e0.values))
        except ArithmeticError as err:
            msg = (
                "J_mu(t e0) is still nonnegative when the nonlinearity"
                + f" overflows at t={t:.6g}"
            )
            raise NoDescentError(msg) from err
        logger.debug("J_mu(%.6g e0) = %.8g", t, value)
        if value < 0:
            logger.info("Endpoint found at t=%.6g, J_mu=%.6g", t, value)
            return e0 * t
        t *= 2
    msg = (
        f"J_mu(t e0) stays nonnegative up to t={t_max:.6g}, the"
        + " nonlinearity is probably too small"
    )
    raise NoDescentError(msg)


@typecheck
def endpoint_check(
    e: RadialField,
    mu: Number,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
    *,
    rho: Number | None = None,
) -> list[CheckRecord]:
    """Records of J_mu(e) < 0 and ||e||_V > rho."""
    if rho is None:
        rho = default_rim_radius(params.N, params.s)
    energy = Energy(e.grid, power_kernel(mu), nl, params, V)
    with torch.no_grad():
        value = float(energy(e.values))
    norm = energy.norm(e.values) ** (params.s / params.N)
    negative = make_record(
        "endpoint-energy",
        "mountain-pass-endpoint",
        measured=value,
        bound=0.0,
    )
    far = make_record(
        "endpoint-norm",
        "mountain-pass-endpoint",
        measured=norm,
        bound=rho,
        upper=False,
    )
    return [
        negative._replace(passed=bool(value < 0)),
        far._replace(passed=bool(norm > rho)),
    ]


class RimEstimate(NamedTuple):
    """Sampled minimum of J_mu on the sphere of radius rho."""

    eta: float
    rho: float
    cap: float
    values: tuple[float, ...]

    def records(self) -> list[CheckRecord]:
        constraint = make_record(
            "rim-radius",
            "mountain-pass-rim",
            measured=self.rho,
            bound=self.cap,
            note="smallness constraint on the rim radius",
        )
        positive = make_record(
            "rim-minimum",
            "mountain-pass-rim",
            measured=self.eta,
            bound=0.0,
            upper=False,
            note=f"sampled over {len(self.values)} fields",
        )
        return [
            constraint._replace(passed=bool(self.rho < self.cap)),
            positive._replace(passed=bool(self.eta > 0)),
        ]


def _random_field(
    grid: RadialGrid, rng: np.random.Generator
) -> RadialField:
    """Sum of one to three nonnegative bumps of random radius and height."""
    field = bump_field(
        grid, float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.05, 1.0))
    )
    for _ in range(int(rng.integers(0, 3))):
        field = field + bump_field(
            grid, float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.0, 1.0))
        )
    return field


@typecheck
def rim_minimum(
    mu: Number,
    rho: Number,
    sample_count: int,
    nl: BaseNonlinearity,
    params: ProblemParams,
    grid: RadialGrid,
    V: Callable | None = None,
    *,
    seed: int = 0,
) -> RimEstimate:
    """Minimum of J_mu over random nonnegative fields with ||u||_V = rho.

    The fields are sums of bumps drawn with a seeded generator and scaled
    to the sphere; the minimum is a sampled estimate of the rim level eta,
    not a bound.

    Raises
    ------
    InvalidParameterError
        if rho <= 0 or sample_count < 1
        if rho is not below the smallness cap of the rim radius
    """
    if rho <= 0 or sample_count < 1:
        msg = (
            "Expected rho > 0 and at least one sample, got"
            + f" rho={rho}, sample_count={sample_count}"
        )
        raise InvalidParameterError(msg)
    N, s = params.N, params.s
    cap = rim_radius_cap(N, s)
    if rho >= cap:
        msg = f"The rim radius rho={rho} must be below the cap {cap:.6g}"
        raise InvalidParameterError(msg)
    energy = Energy(grid, power_kernel(mu), nl, params, V)
    rng = np.random.default_rng(seed)
    values = []
    for _ in range(sample_count):
        u = _random_field(grid, rng)
        scale = rho / energy.norm(u.values) ** (s / N)
        with torch.no_grad():
            values.append(float(energy(scale * u.values)))
    eta = min(values)
    logger.info("Rim minimum at rho=%.4g: %.6g", rho, eta)
    return RimEstimate(
        eta=eta,
        rho=float(rho),
        cap=cap,
        values=tuple(values),
    )
