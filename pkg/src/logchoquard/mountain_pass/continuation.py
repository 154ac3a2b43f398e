"""Continuation of the mountain-pass solutions as mu -> 0."""

from __future__ import annotations

import logging
import warnings
from collections.abc import Callable
from typing import NamedTuple

import numpy as np

from ..constants import ProblemParams, norm_cap
from ..energy import EnergyBreakdown, energy_log, weak_residual_log
from ..errors import InvalidParameterError, TailDivergenceError
from ..input_validation import typecheck
from ..nonlinearity import BaseNonlinearity
from ..radial import RadialField, RadialGrid, v_norm
from ..types import FloatSequence, Number, SaddleOptions
from ..verification import CheckRecord, make_record
from .geometry import default_rim_radius, find_endpoint
from .saddle import SaddleResult, SaddleSearch

logger = logging.getLogger(__name__)

DEFAULT_SCHEDULE = tuple(2.0**-k for k in range(7))
# relative change of the level that triggers a warning
LEVEL_OSCILLATION = 0.2
# relative warm/cold discrepancy flagged as a branch switch
BRANCH_TOLERANCE = 0.05


class ContinuationResult(NamedTuple):
    """Saddles along the schedule, the limit candidate and its audits.

    ``cold_levels`` holds the levels of the cold-started solves (empty when
    they were not requested); ``log_breakdown`` is None when the
    logarithmic energy of u0 diverges.
    """

    results: tuple[SaddleResult, ...]
    u0: RadialField
    log_breakdown: EnergyBreakdown | None
    log_residual: float | None
    cold_levels: tuple[float, ...]
    records: tuple[CheckRecord, ...]

    def levels(self) -> list[tuple[float, float, float, float]]:
        """Rows (mu, c_mu, norm, residual)."""
        return [(r.mu, r.c_mu, r.norm, r.residual) for r in self.results]


def _check_schedule(schedule) -> tuple[float, ...]:
    schedule = tuple(float(mu) for mu in schedule)
    if len(schedule) == 0:
        msg = "The mu schedule is empty"
        raise InvalidParameterError(msg)
    if any(not 0 < mu <= 1 for mu in schedule) or any(
        b >= a for a, b in zip(schedule, schedule[1:])
    ):
        msg = (
            "The mu schedule must be strictly decreasing in (0, 1], got"
            + f" {schedule}"
        )
        raise InvalidParameterError(msg)
    return schedule


@typecheck
def continuation(
    nl: BaseNonlinearity,
    params: ProblemParams,
    grid: RadialGrid,
    mu_schedule: FloatSequence | None = None,
    options: SaddleOptions | None = None,
    V: Callable | None = None,
    *,
    rho: Number | None = None,
    cold_start: bool = False,
    verbose: int = 0,
) -> ContinuationResult:
    """Solve the saddle search along a decreasing mu schedule.

    Each solve is warm-started from the path of the previous one. The last
    saddle is the limit candidate u0, audited against the logarithmic
    problem: finite logarithmic convolution term, log-kernel weak residual
    below 10 tol_residual and ||u0||_V > rho/2. The uniform norm cap is
    checked at every mu.

    Parameters
    ----------
    nl
        the nonlinearity
    params
        problem parameters
    grid
        radial grid with nodes at 1/8 and 1/4
    mu_schedule
        decreasing kernel parameters, 2^-k for k = 0..6 by default
    options
        solver options
    V
        the potential
    rho
        rim radius of the nontriviality audit
    cold_start
        also solve every mu from the straight path and compare the levels
    verbose
        forwarded to `SaddleSearch`

    Warns
    -----
    UserWarning
        if two consecutive levels differ by more than 20% or a cold start
        lands more than 5% away from the warm start

    Examples
    --------
    >>> params = lcq.ProblemParams(N=2, s=0.5, tau=0.25)
    >>> grid = lcq.RadialGrid(lcq.GridSpec(breakpoints=(1 / 8, 1 / 4)))
    >>> nl = lcq.make_model_nonlinearity(2, 0.5, lam=2e7)
    >>> out = lcq.continuation(nl, params, grid, mu_schedule=[1.0, 0.5])
    >>> len(out.results)
    2
    """
    schedule = _check_schedule(
        DEFAULT_SCHEDULE if mu_schedule is None else np.asarray(mu_schedule)
    )
    if options is None:
        options = SaddleOptions()
    N, s, tau = params.N, params.s, params.tau
    if rho is None:
        rho = default_rim_radius(N, s)

    endpoint = find_endpoint(schedule[0], nl, params, grid, V)
    path = None
    results, cold_levels = [], []
    for mu in schedule:
        search = SaddleSearch(
            mu=mu,
            nl=nl,
            params=params,
            grid=grid,
            options=options,
            V=V,
            verbose=verbose,
        )
        if path is not None and search.evaluate(path[-1]) >= 0:
            endpoint, path = find_endpoint(mu, nl, params, grid, V), None
        if path is None:
            search.fit(endpoint=endpoint)
        else:
            search.fit(initial_path=path)
        path = search.path_
        result = search.result_
        logger.info("Continuation step mu=%.4g: c_mu=%.8g", mu, result.c_mu)

        if results:
            previous = results[-1].c_mu
            if abs(result.c_mu - previous) > LEVEL_OSCILLATION * abs(previous):
                warnings.warn(
                    f"The level moved from {previous:.6g} to"
                    + f" {result.c_mu:.6g} between mu={results[-1].mu:.4g}"
                    + f" and mu={mu:.4g}",
                    stacklevel=2,
                )
        results.append(result)

        if cold_start:
            cold = SaddleSearch(
                mu=mu, nl=nl, params=params, grid=grid, options=options, V=V
            ).fit(endpoint=find_endpoint(mu, nl, params, grid, V))
            cold_levels.append(cold.result_.c_mu)
            gap = abs(cold.result_.c_mu - result.c_mu) / abs(result.c_mu)
            if gap > BRANCH_TOLERANCE:
                warnings.warn(
                    f"Warm and cold starts differ by {100 * gap:.1f}% at"
                    + f" mu={mu:.4g}, the continuation may switch branches",
                    stacklevel=2,
                )

    u0 = results[-1].u_mu
    largest = max(results, key=lambda r: r.norm)
    capped = make_record(
        "continuation-norm-cap",
        "uniform-norm-cap",
        measured=largest.norm,
        bound=norm_cap(N, s, tau),
        witness=largest.mu,
        note="largest ||u_mu||_V^(N/s) along the schedule",
    )
    records = [capped._replace(passed=bool(capped.margin > 0))]

    try:
        log_breakdown = energy_log(u0, nl, params, V)
        log_residual = weak_residual_log(u0, nl, params, V)
    except TailDivergenceError as err:
        log_breakdown, log_residual = None, None
        note = str(err)
    else:
        note = f"log energy {log_breakdown.total:.10g}"
    conv = None if log_breakdown is None else abs(log_breakdown.conv_term)
    finite = make_record(
        "continuation-log-energy",
        "log-energy-finite",
        measured=conv,
        bound=float("inf"),
        note=note,
    )
    records.append(
        finite._replace(passed=bool(conv is not None and np.isfinite(conv)))
    )
    records.append(
        make_record(
            "continuation-log-residual",
            "continuation-limit",
            measured=log_residual,
            bound=10 * options.tol_residual,
        )
    )
    u0_norm = v_norm(u0, params, V) ** (s / N)
    nontrivial = make_record(
        "continuation-nontrivial",
        "continuation-limit",
        measured=u0_norm,
        bound=rho / 2,
        upper=False,
        note="||u0||_V against half the rim radius",
    )
    records.append(nontrivial._replace(passed=bool(u0_norm > rho / 2)))
    if cold_levels:
        gaps = [
            abs(c - r.c_mu) / abs(r.c_mu)
            for c, r in zip(cold_levels, results)
        ]
        records.append(
            make_record(
                "continuation-cold-start",
                "continuation-limit",
                measured=max(gaps),
                bound=BRANCH_TOLERANCE,
                note="relative warm/cold level discrepancy",
            )
        )

    logger.info(
        "Continuation done: %d saddles, sup u0 = %.6g", len(results), u0.sup
    )
    return ContinuationResult(
        results=tuple(results),
        u0=u0,
        log_breakdown=log_breakdown,
        log_residual=log_residual,
        cold_levels=tuple(cold_levels),
        records=tuple(records),
    )
