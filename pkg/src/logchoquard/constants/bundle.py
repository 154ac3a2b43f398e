"""Bundle of every explicit constant for a given parameter envelope."""

import logging
from typing import NamedTuple
from warnings import warn

import numpy as np
from scipy import special

from ..errors import InvalidParameterError
from ..input_validation import typecheck
from ..types import MuForm, Number
from ..verification.anchors import ANCHORS
from ..verification.report import CheckRecord, make_record
from .formulas import (
    J_frak,
    K_frak,
    T_frak,
    alpha_star_upper,
    beta_0,
    decay_exponent,
    mu_N,
    norm_cap,
    riesz_constant,
    seminorm_bounds,
    unit_ball_volume,
)
from .problem import ProblemParams

logger = logging.getLogger(__name__)

# Anchor of the statement each constant comes from.
PROVENANCE = {
    "omega_N": "parameter-envelope",
    "C_N": "riesz-constant",
    "alpha_star": "trudinger-moser-exponent",
    "J_frak": "test-function-norm",
    "K_frak": "test-function-seminorm",
    "T_N": "threshold-T",
    "beta_0": "beta-lower-bound",
    "mu_N": "ratio-margin",
    "norm_cap": "uniform-norm-cap",
    "decay_a": "decay-exponent",
}


class ConstantsReport(NamedTuple):
    """Every explicit constant for one parameter envelope.

    The first ten fields are the constants themselves. The remaining ones
    record the alternative readings of the printed formulas and the
    truncation data of the alpha* series.
    """

    omega_N: float
    C_N: float
    alpha_star: float
    J_frak: float
    K_frak: float
    T_N: float
    beta_0: float
    mu_N: float
    norm_cap: float
    decay_a: float
    alpha_star_remainder: float
    alpha_star_terms: int
    J_frak_surface: float
    K_frak_split: float
    mu_N_literal: float
    mu_N_difference: float
    mu_form: str
    R: float

    def as_dict(self) -> dict:
        """Flat dictionary with the provenance strings."""
        data = self._asdict()
        data["provenance"] = {
            key: f"{anchor}: {ANCHORS[anchor]}"
            for key, anchor in PROVENANCE.items()
        }
        return data


@typecheck
def constants_bundle(
    params: ProblemParams,
    R: Number = 1 / 3,
    *,
    mu_form: MuForm = "difference",
    tol: Number = 1e-10,
) -> ConstantsReport:
    """Evaluate every explicit constant of the problem.

    T_N and beta_0 are always evaluated at R = 1/3; ``R`` only enters
    J_frak (and its surface-measure variant).

    Parameters
    ----------
    params
        the parameter envelope
    R
        radius of the plateau test function, in (0, 1]
    mu_form
        reading of the mu_N formula, "difference" (default) or "literal"
    tol
        tolerance on the alpha* remainder

    Raises
    ------
    InvalidParameterError
        if R is not in (0, 1]

    Returns
    -------
    ConstantsReport
        the constants

    Examples
    --------
    >>> report = lcq.constants_bundle(lcq.ProblemParams(N=2, s=0.5, tau=0.25))
    >>> report.norm_cap
    2.0
    """
    if not 0 < R <= 1:
        msg = f"The radius R must lie in (0, 1], got R={R}"
        raise InvalidParameterError(msg)

    N, s, tau, V = params.N, params.s, params.tau, params.V_upper
    alpha = alpha_star_upper(N, s, tol)
    mu_literal = mu_N(N, s, tau, form="literal")
    mu_difference = mu_N(N, s, tau, form="difference")
    mu = mu_literal if mu_form == "literal" else mu_difference
    if mu <= 0:
        warn(
            f"mu_N evaluates to {mu} with the {mu_form} form, the ratio"
            + " window is empty",
            stacklevel=2,
        )

    report = ConstantsReport(
        omega_N=unit_ball_volume(N),
        C_N=riesz_constant(N),
        alpha_star=alpha.value,
        J_frak=J_frak(N, s, R, V),
        K_frak=K_frak(N, s),
        T_N=T_frak(N, s, 1 / 3, V),
        beta_0=beta_0(N, s, V),
        mu_N=mu,
        norm_cap=norm_cap(N, s, tau),
        decay_a=decay_exponent(N, s),
        alpha_star_remainder=alpha.remainder,
        alpha_star_terms=alpha.n_terms,
        J_frak_surface=J_frak(N, s, R, V, sphere="N_omega"),
        K_frak_split=seminorm_bounds(N, s).split,
        mu_N_literal=mu_literal,
        mu_N_difference=mu_difference,
        mu_form=mu_form,
        R=float(R),
    )
    logger.info(
        "Constants for %s: alpha*=%.6g, K=%.6g, T_N=%.6g, beta_0=%.6g",
        params,
        report.alpha_star,
        report.K_frak,
        report.T_N,
        report.beta_0,
    )
    return report


@typecheck
def constants_checks(
    params: ProblemParams, report: ConstantsReport, tol: Number = 1e-10
) -> list[CheckRecord]:
    """Records on the constants: signs, truncation and planar closed forms.

    In the plane the Riesz constant is compared with 1/(2 pi) and, for
    s = 1/2, alpha* with 2 (6 pi^2 zeta(3))^{1/3} and K_frak with 9.5 pi^2.
    """
    N, s = params.N, params.s
    positive = min(
        report.omega_N,
        report.C_N,
        report.alpha_star,
        report.J_frak,
        report.K_frak,
        report.T_N,
        report.beta_0,
        report.norm_cap,
        report.decay_a,
    )
    lower, upper = params.tau_window
    window = min(params.tau - lower, upper - params.tau)
    records = [
        make_record(
            "tau-window",
            "parameter-envelope",
            measured=window,
            bound=0.0,
            upper=False,
            note="distance of tau to the ends of ((1 - 2/N) s, s)",
        )._replace(passed=bool(window > 0)),
        make_record(
            "constants-positive",
            "parameter-envelope",
            measured=positive,
            bound=0.0,
            upper=False,
            note="smallest of the constants",
        )._replace(passed=bool(positive > 0)),
        make_record(
            "alpha-star-remainder",
            "trudinger-moser-exponent",
            measured=report.alpha_star_remainder,
            bound=tol,
            note=f"{report.alpha_star_terms} terms",
        ),
        make_record(
            "mu-N-below-s/N",
            "ratio-margin",
            measured=report.mu_N,
            bound=s / N,
            slack=1e-15,
        ),
        make_record(
            "decay-above-Ns/(N-s)",
            "decay-exponent",
            measured=report.decay_a,
            bound=N * s / (N - s),
            upper=False,
        ),
    ]
    if N == 2:
        records.append(
            make_record(
                "riesz-planar",
                "riesz-constant",
                measured=abs(report.C_N - 1 / (2 * np.pi)),
                bound=1e-12,
            )
        )
    if N == 2 and s == 0.5:
        closed = 2 * (6 * np.pi**2 * special.zeta(3)) ** (1 / 3)
        records += [
            make_record(
                "alpha-star-zeta",
                "trudinger-moser-exponent",
                measured=abs(report.alpha_star - closed),
                bound=1e-8,
            ),
            make_record(
                "K-frak-planar",
                "test-function-seminorm",
                measured=abs(report.K_frak - 9.5 * np.pi**2),
                bound=1e-12 * 9.5 * np.pi**2,
            ),
        ]
    return records
