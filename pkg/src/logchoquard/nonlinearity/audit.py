"""Grid audit of the growth assumptions of a nonlinearity and calibration."""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np
import torch

from ..constants import ProblemParams, T_frak, alpha_star_upper, beta_0, mu_N
from ..errors import InvalidParameterError, UnreachableTargetError
from ..input_validation import convert_inputs, typecheck
from ..radial.functionals import log_phi_ns
from ..types import Float1dTensor, MuForm, Number
from ..verification import CheckRecord, make_record
from .base import BaseNonlinearity
from .model import ModelNonlinearity, make_model_nonlinearity

logger = logging.getLogger(__name__)


class AssumptionReport(NamedTuple):
    """Measured quantities of the growth assumptions on an audit grid.

    Every ``*_witness`` field is the grid point realizing the extremum of
    the corresponding quantity.
    """

    # f(t) = o(t^{N/s - 1}) at 0
    small_t_ratio: float
    small_t_slope: float
    power: float
    # f <= b_1 + b_2 Phi_{N,s}(alpha* t^{N/(N-s)})
    b_1: float
    b_2: float
    b_2_witness: float
    # 1 - s + tau <= F f' / f^2 <= 1 + mu_N
    ratio_inf: float
    ratio_inf_witness: float
    ratio_sup: float
    ratio_sup_witness: float
    ratio_lower: float
    ratio_upper: float
    # F f' / f^2 -> 1 on the top decade
    limit_deviation: float
    limit_witness: float
    limit_threshold: float
    # f F >= beta t^{N/s} beyond T_N
    beta: float
    beta_witness: float
    beta_0: float
    T_N: float
    # consequences of the assumptions
    C_eps: float
    C_eps_witness: float
    primitive_ratio_max: float
    primitive_ratio_witness: float
    primitive_ratio_bound: float
    M_eps: float
    M_0: float
    s_0: float
    s_over_N: float
    grid_min: float
    grid_max: float

    @property
    def lower_margin(self) -> float:
        return self.ratio_inf - self.ratio_lower

    @property
    def upper_margin(self) -> float:
        return self.ratio_upper - self.ratio_sup

    def records(self) -> list[CheckRecord]:
        """Verification records, one per checked inequality."""
        upper = make_record(
            "ratio-upper",
            "ratio-window",
            measured=self.ratio_sup,
            bound=self.ratio_upper,
            witness=self.ratio_sup_witness,
        )
        below = make_record(
            "ratio-below-1+s/N",
            "ratio-window",
            measured=self.ratio_sup,
            bound=1 + self.s_over_N,
            witness=self.ratio_sup_witness,
        )
        return [
            make_record(
                "growth-at-zero",
                "growth-at-zero",
                measured=self.small_t_slope,
                bound=self.power,
                upper=False,
                witness=self.grid_min,
                note=f"f(t)/t^(N/s-1) = {self.small_t_ratio:.6g} at t_min",
            ),
            make_record(
                "exponential-growth",
                "exponential-growth",
                measured=self.b_2,
                bound=float("inf"),
                witness=self.b_2_witness,
                note=(
                    "minimal b_2 with b_1 = sup f on (0, 1] ="
                    + f" {self.b_1:.6g}"
                ),
            ),
            make_record(
                "ratio-lower",
                "ratio-window",
                measured=self.ratio_inf,
                bound=self.ratio_lower,
                upper=False,
                witness=self.ratio_inf_witness,
            ),
            # strict inequalities
            upper._replace(passed=bool(upper.margin > 0)),
            below._replace(passed=bool(below.margin > 0)),
            make_record(
                "ratio-limit",
                "ratio-limit",
                measured=self.limit_deviation,
                bound=self.limit_threshold,
                witness=self.limit_witness,
                note="max |F f'/f^2 - 1| on the top decade of the grid",
            ),
            make_record(
                "beta-growth",
                "beta-growth",
                measured=self.beta,
                bound=self.beta_0,
                upper=False,
                witness=self.beta_witness,
                note=f"inf over t >= T_N = {self.T_N:.6g}",
            ),
            make_record(
                "small-growth-consequence",
                "small-growth-consequence",
                measured=self.C_eps,
                bound=float("inf"),
                witness=self.C_eps_witness,
                note="C_eps for eps = 1",
            ),
            make_record(
                "primitive-bound",
                "primitive-bound",
                measured=self.primitive_ratio_max,
                bound=self.primitive_ratio_bound,
                witness=self.primitive_ratio_witness,
                note="max of F(t) / (t f(t))",
            ),
            make_record(
                "primitive-small",
                "primitive-small",
                measured=self.M_eps,
                bound=self.grid_max,
                witness=self.M_eps,
                note=(
                    f"M_eps for eps = 0.1; F/f <= M_0 = {self.M_0:.6g}"
                    + f" for t >= {self.s_0}"
                ),
            ),
        ]

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records())


def default_audit_grid(N: int, s: Number, V_upper: Number = 1.0):
    """10^4 log-spaced points on [1e-4, max(100, 10 T_N(s))]."""
    t_max = max(100.0, 10 * T_frak(N, s, 1 / 3, V_upper))
    return torch.logspace(-4, np.log10(t_max), 10**4, dtype=torch.float64)


def _extremum(values: torch.Tensor, t: torch.Tensor, mode: str):
    pick = torch.argmax if mode == "max" else torch.argmin
    index = int(pick(values))
    return float(values[index]), float(t[index])


@convert_inputs
@typecheck
def verify_assumptions(
    nl: BaseNonlinearity,
    params: ProblemParams,
    grid: Float1dTensor | None = None,
    *,
    limit_threshold: Number = 0.05,
    mu_form: MuForm = "difference",
    eps_small: Number = 1.0,
    eps_primitive: Number = 0.1,
    s_0: Number = 1.0,
) -> AssumptionReport:
    """Evaluate the growth assumptions of ``nl`` at every grid point.

    Products and quotients of f and F are formed in log space, so that the
    audit can run beyond the overflow guard of the exponential.

    Parameters
    ----------
    nl
        the nonlinearity
    params
        problem parameters (N, s, tau, V_upper)
    grid
        increasing positive t-grid covering [1e-4, 10 T_N(s)], by default
        `default_audit_grid`
    limit_threshold
        tolerance of |F f'/f^2 - 1| on the top decade of the grid
    mu_form
        form of the margin mu_N(s, tau)
    eps_small, eps_primitive
        epsilons of the constants C_eps and M_eps
    s_0
        start of the range on which M_0 = max F/f is measured

    Returns
    -------
    AssumptionReport
        measured margins and witnesses; failures are data

    Raises
    ------
    InvalidParameterError
        if the grid does not cover [1e-4, 10 T_N(s)]
    """
    N, s, tau = params.N, params.s, params.tau
    p = N / s
    T_N = T_frak(N, s, 1 / 3, params.V_upper)
    if grid is None:
        grid = default_audit_grid(N, s, params.V_upper)
    t = grid
    covers = float(t[0]) <= 1e-4 * (1 + 1e-9) and float(t[-1]) >= 10 * T_N * (
        1 - 1e-9
    )
    if not covers or bool(torch.any(t <= 0)):
        msg = (
            f"The audit grid [{float(t[0])}, {float(t[-1])}] must be positive"
            + f" and cover [1e-4, {10 * T_N}]"
        )
        raise InvalidParameterError(msg)

    log_t = torch.log(t)
    log_f = nl.log_f(t)
    log_F = nl.log_primitive(t)
    ratio = nl.ratio(t)

    # behaviour at zero
    small_t_ratio = float(torch.exp(log_f[0] - (p - 1) * log_t[0]))
    first_decade = t <= 10 * t[0]
    slope, _ = np.polyfit(
        log_t[first_decade].numpy(), log_f[first_decade].numpy(), deg=1
    )

    # exponential growth with alpha*
    alpha_star = alpha_star_upper(N, s).value
    gamma = N / (N - s)
    unit = t <= 1
    b_1 = float(torch.exp(log_f[unit].max())) if bool(unit.any()) else 0.0
    log_phi_star = log_phi_ns(alpha_star * t**gamma, N, s)
    if b_1 > 0:
        excess = log_f - np.log(b_1)
    else:
        excess = torch.full_like(log_f, float("inf"))
    above = (t > 1) & (excess > 0)
    if bool(above.any()):
        log_gap = log_f[above] + torch.log(-torch.expm1(-excess[above]))
        log_b_2, b_2_witness = _extremum(
            log_gap - log_phi_star[above], t[above], "max"
        )
        b_2 = float(np.exp(log_b_2))
    else:
        b_2, b_2_witness = 0.0, float(t[-1])

    # ratio window and limit
    ratio_inf, ratio_inf_witness = _extremum(ratio, t, "min")
    ratio_sup, ratio_sup_witness = _extremum(ratio, t, "max")
    top = t >= t[-1] / 10
    limit_deviation, limit_witness = _extremum(
        (ratio[top] - 1).abs(), t[top], "max"
    )

    # superquadratic lower bound beyond T_N
    beyond = t >= T_N
    log_beta, beta_witness = _extremum(
        (log_f + log_F - p * log_t)[beyond], t[beyond], "min"
    )

    # f <= eps t^{p-1} + C_eps t^{p-1} Phi(alpha t^gamma)
    alpha = getattr(nl, "alpha", alpha_star)
    log_power = np.log(eps_small) + (p - 1) * log_t
    excess = log_f - log_power
    positive = excess > 0
    if bool(positive.any()):
        log_gap = log_f[positive] + torch.log(-torch.expm1(-excess[positive]))
        log_C, C_eps_witness = _extremum(
            log_gap
            - (p - 1) * log_t[positive]
            - log_phi_ns(alpha * t[positive] ** gamma, N, s),
            t[positive],
            "max",
        )
        C_eps = float(np.exp(log_C))
    else:
        C_eps, C_eps_witness = 0.0, float(t[0])

    # F(t) / (t f(t)) and F / f
    log_primitive_ratio = log_F - log_t - log_f
    log_max, primitive_ratio_witness = _extremum(
        log_primitive_ratio, t, "max"
    )
    small = log_primitive_ratio <= np.log(eps_primitive)
    if bool(small[-1]):
        # first index of the final run of points with F <= eps t f
        violating = torch.nonzero(~small).flatten()
        start = int(violating[-1]) + 1 if len(violating) > 0 else 0
        M_eps = float(t[start])
    else:
        M_eps = float("inf")
    tail = t >= s_0
    M_0 = (
        float(torch.exp((log_F - log_f)[tail].max()))
        if bool(tail.any())
        else float("nan")
    )

    report = AssumptionReport(
        small_t_ratio=small_t_ratio,
        small_t_slope=float(slope),
        power=p - 1,
        b_1=b_1,
        b_2=b_2,
        b_2_witness=b_2_witness,
        ratio_inf=ratio_inf,
        ratio_inf_witness=ratio_inf_witness,
        ratio_sup=ratio_sup,
        ratio_sup_witness=ratio_sup_witness,
        ratio_lower=1 - s + tau,
        ratio_upper=1 + mu_N(N, s, tau, form=mu_form),
        limit_deviation=limit_deviation,
        limit_witness=limit_witness,
        limit_threshold=float(limit_threshold),
        beta=float(np.exp(log_beta)),
        beta_witness=beta_witness,
        beta_0=beta_0(N, s, params.V_upper),
        T_N=T_N,
        C_eps=C_eps,
        C_eps_witness=C_eps_witness,
        primitive_ratio_max=float(np.exp(log_max)),
        primitive_ratio_witness=primitive_ratio_witness,
        primitive_ratio_bound=s - tau,
        M_eps=M_eps,
        M_0=M_0,
        s_0=float(s_0),
        s_over_N=s / N,
        grid_min=float(t[0]),
        grid_max=float(t[-1]),
    )
    logger.info(
        "Assumption audit: ratio in [%.6g, %.6g], beta %.6g (beta_0 %.6g)",
        ratio_inf,
        ratio_sup,
        report.beta,
        report.beta_0,
    )
    return report


def _measured_beta(nl: BaseNonlinearity, t: torch.Tensor, p: float) -> float:
    values = nl.log_f(t) + nl.log_primitive(t) - p * torch.log(t)
    return float(torch.exp(values.min()))


@convert_inputs
@typecheck
def calibrate_amplitude(
    N: int,
    s: Number,
    target_beta: Number,
    *,
    nonlinearity: ModelNonlinearity | None = None,
    V_upper: Number = 1.0,
    grid: Float1dTensor | None = None,
    cap: Number = 1e12,
    rtol: Number = 1e-6,
    return_nonlinearity: bool = False,
) -> float | ModelNonlinearity:
    """Smallest amplitude lambda with inf_{t >= T_N} f F / t^{N/s} >= target.

    The infimum is measured on the grid points beyond T_N(s). lambda is
    found by bisection on log(lambda) between the current amplitude and
    ``cap``, to relative precision ``rtol``.

    Parameters
    ----------
    N, s
        dimension and order
    target_beta
        target value, larger than beta_0(s)
    nonlinearity
        model nonlinearity to calibrate, by default the model family with
        lambda = 1, alpha = 1 and q = 10
    V_upper
        upper bound of the potential entering T_N and beta_0
    grid
        audit grid, by default `default_audit_grid`
    cap
        largest admissible amplitude
    rtol
        relative precision on lambda
    return_nonlinearity
        if True, the calibrated nonlinearity is returned instead of lambda

    Returns
    -------
    float or ModelNonlinearity
        the amplitude, or the nonlinearity with that amplitude

    Raises
    ------
    InvalidParameterError
        if target_beta <= beta_0(s)
    UnreachableTargetError
        if the target is not reached with lambda = cap

    Examples
    --------
    >>> lam = lcq.calibrate_amplitude(2, 0.5, 1.01 * lcq.beta_0(2, 0.5))
    >>> 1e7 < lam < 1e8
    True
    """
    b0 = beta_0(N, s, V_upper)
    if target_beta <= b0:
        msg = f"The target {target_beta} must exceed beta_0 = {b0}"
        raise InvalidParameterError(msg)
    if nonlinearity is None:
        nonlinearity = make_model_nonlinearity(N, s)
    if grid is None:
        grid = default_audit_grid(N, s, V_upper)
    t = grid[grid >= T_frak(N, s, 1 / 3, V_upper)]
    p = N / s

    def beta(lam: float) -> float:
        return _measured_beta(nonlinearity.with_amplitude(lam), t, p)

    lo = nonlinearity.lam
    if beta(lo) >= target_beta:
        logger.info(
            "Target %.6g already met with lambda %.6g", target_beta, lo
        )
        hi = lo
    else:
        hi = float(cap)
        if beta(hi) < target_beta:
            msg = (
                f"The target beta {target_beta} is not reached with the"
                + f" amplitude cap lambda = {cap}"
            )
            raise UnreachableTargetError(msg)
        while hi / lo - 1 > rtol:
            mid = float(np.sqrt(lo * hi))
            if beta(mid) >= target_beta:
                hi = mid
            else:
                lo = mid
        logger.info(
            "Calibrated lambda = %.8g for beta = %.6g", hi, target_beta
        )
    if return_nonlinearity:
        return nonlinearity.with_amplitude(hi)
    return hi
