"""Closed-form and series constants of the logarithmic Choquard problem.

All functions are pure functions of scalar inputs and return python floats.
Unit-ball volumes follow the convention omega_k = pi^{k/2} / Gamma(k/2 + 1),
the measure of the unit sphere S^{N-1} being N * omega_N.
"""

import logging
from math import ceil, log, pi
from typing import Literal, NamedTuple

import numpy as np
from scipy import integrate, special

from ..errors import (
    InvalidDimensionError,
    InvalidParameterError,
    ToleranceNotReachedError,
)
from ..input_validation import typecheck
from ..types import MuForm, Number
from ..utils import kahan_sum

logger = logging.getLogger(__name__)


def _check_dimension(N: int) -> None:
    if N < 2:
        msg = f"The dimension N must be at least 2, got N={N}"
        raise InvalidDimensionError(msg)


def _check_order(s: Number) -> None:
    if not 0 < s < 1:
        msg = f"The fractional order s must lie in (0, 1), got s={s}"
        raise InvalidParameterError(msg)


@typecheck
def unit_ball_volume(k: int) -> float:
    """Volume omega_k of the unit ball of R^k (omega_0 = 1)."""
    if k < 0:
        msg = f"The dimension must be nonnegative, got k={k}"
        raise InvalidParameterError(msg)
    return float(pi ** (k / 2) / special.gamma(k / 2 + 1))


@typecheck
def sphere_measure(N: int) -> float:
    """Surface measure N * omega_N of the unit sphere S^{N-1}."""
    return N * unit_ball_volume(N)


@typecheck
def riesz_constant(N: int) -> float:
    """Normalization C_N of the logarithmic Riesz kernel C_N log(1/|x|).

    C_N = 1 / (2^{N-1} pi^{N/2} Gamma(N/2)), so that C_N log(1/|x|) is the
    fundamental solution of (-Delta)^{N/2}.

    Parameters
    ----------
    N
        dimension, N >= 2

    Raises
    ------
    InvalidDimensionError
        if N < 2

    Examples
    --------
    >>> lcq.riesz_constant(2)  # 1 / (2 pi)
    0.15915494309189535
    """
    _check_dimension(N)
    return float(1 / (2 ** (N - 1) * pi ** (N / 2) * special.gamma(N / 2)))


@typecheck
def floor_strict(q: Number) -> int:
    """Largest integer strictly less than q."""
    return ceil(q) - 1


@typecheck
def fractional_factorial(q: Number) -> float:
    """Falling product q (q - 1) ... (q - floor_strict(q))."""
    if q <= 0:
        msg = f"The fractional factorial needs q > 0, got q={q}"
        raise InvalidParameterError(msg)
    return float(np.prod(q - np.arange(floor_strict(q) + 1)))


class AlphaStar(NamedTuple):
    """Value of the Moser-Trudinger upper exponent with its certificate.

    Attributes
    ----------
    value
        the truncated evaluation of alpha*_{s,N}
    remainder
        certified bound on |alpha*_{s,N} - value|
    series
        truncated value of the series
    series_remainder
        certified bound on the tail of the series
    n_terms
        number of summed terms
    """

    value: float
    remainder: float
    series: float
    series_remainder: float
    n_terms: int


def _alpha_star_terms(N: int, s: float, n_terms: int) -> np.ndarray:
    k = np.arange(n_terms, dtype=np.float64)
    base = N + 2 * k
    # (N - 1 + k)! / k! = (k + 1) (k + 2) ... (k + N - 1), each factor being
    # divided by N + 2k to stay in range
    rising = np.ones_like(k)
    for j in range(1, N):
        rising *= (k + j) / base
    return rising * base ** (N - 1 - N / s)


def _alpha_star_tail(N: int, s: float, n_terms: int) -> float:
    # The summand is bounded by g(k) = (k + N)^{N-1} (N + 2k)^{-N/s} which is
    # decreasing, so the tail from n_terms is bounded by g(n) + int_n^inf g.
    def g(x):
        return (x + N) ** (N - 1) * (N + 2 * x) ** (-N / s)

    integral, _ = integrate.quad(g, n_terms, np.inf, epsabs=0, epsrel=1e-12)
    return float(g(n_terms) + integral)


@typecheck
def alpha_star_upper(
    N: int,
    s: Number,
    tol: Number = 1e-10,
    *,
    summation: Literal["forward", "kahan"] = "forward",
    max_terms: int = 10**7,
) -> AlphaStar:
    """Upper bound alpha*_{s,N} of the sharp Moser-Trudinger exponent.

    alpha*_{s,N} = N (2 (N omega_N)^2 Gamma(1 + N/s) / N!
                   * sum_{k>=0} (N-1+k)! / (k! (N+2k)^{N/s}))^{s/(N-s)}

    The series is truncated as soon as the certified bound on the induced
    error on alpha*_{s,N} is below ``tol``. The number of terms is doubled
    until then.

    Parameters
    ----------
    N
        dimension, N >= 2
    s
        fractional order in (0, 1)
    tol
        requested bound on the remainder of alpha*_{s,N}
    summation
        "forward" sums the terms sequentially, "kahan" uses compensated
        summation
    max_terms
        iteration cap on the number of terms

    Raises
    ------
    ToleranceNotReachedError
        if more than ``max_terms`` terms would be needed

    Returns
    -------
    AlphaStar
        value, remainder and truncation data
    """
    _check_dimension(N)
    _check_order(s)
    if tol <= 0:
        msg = f"The tolerance must be positive, got tol={tol}"
        raise InvalidParameterError(msg)

    prefactor = (
        2 * sphere_measure(N) ** 2 * special.gamma(1 + N / s)
        / special.factorial(N, exact=False)
    )
    exponent = s / (N - s)

    def to_alpha(series):
        return N * (prefactor * series) ** exponent

    n_terms = 1024
    while True:
        terms = _alpha_star_terms(N, float(s), n_terms)
        series = float(terms.sum())
        tail = _alpha_star_tail(N, float(s), n_terms)
        remainder = to_alpha(series + tail) - to_alpha(series)
        if remainder < tol:
            break
        if 2 * n_terms > max_terms:
            msg = (
                f"alpha* series did not reach tol={tol} within"
                + f" {max_terms} terms (remainder {remainder:.3e})"
            )
            raise ToleranceNotReachedError(msg)
        n_terms *= 2

    if summation == "kahan":
        series = kahan_sum(terms)
    else:
        series = float(np.cumsum(terms)[-1])

    logger.debug(
        "alpha* for N=%d, s=%g: %d terms, remainder %.3e",
        N,
        s,
        n_terms,
        remainder,
    )
    return AlphaStar(
        value=float(to_alpha(series)),
        remainder=float(remainder),
        series=series,
        series_remainder=tail,
        n_terms=n_terms,
    )


@typecheck
def phi_exponent_index(N: int, s: Number) -> int:
    """Smallest integer j with j >= N/s."""
    return ceil(N / s - 1e-12)


@typecheck
def J_frak(
    N: int,
    s: Number,
    R: Number,
    V_upper: Number = 1.0,
    *,
    sphere: Literal["omega", "N_omega"] = "omega",
) -> float:
    """Bound on the potential part of the norm of the plateau test function.

    V_upper (omega_N (R/2)^N + c omega_{N-1} N s (N + 3s) R^2
             / (4 (N + s)(N + 2s)))

    with c = 1 for the closed display (default). ``sphere="N_omega"``
    takes c = N, which bounds the annulus term with the surface measure
    N omega_N of the unit sphere since N omega_{N-1} >= omega_N.
    """
    _check_dimension(N)
    _check_order(s)
    factor = 1 if sphere == "omega" else N
    annulus = (
        factor
        * unit_ball_volume(N - 1)
        * N
        * s
        * (N + 3 * s)
        * R**2
        / (4 * (N + s) * (N + 2 * s))
    )
    return V_upper * (unit_ball_volume(N) * (R / 2) ** N + annulus)


class SeminormBounds(NamedTuple):
    """Intermediate bounds of the seminorm of the plateau test function."""

    I1: float
    I2: float
    I3: float
    A1: float
    A2: float
    split: float


@typecheck
def seminorm_bounds(N: int, s: Number) -> SeminormBounds:
    """Bounds I1, I2, I3, A1, A2 and their split combination.

    The split combination is 2 (N omega_N)^2 (I1 + I2 + I3)
    + (N omega_N)^2 (A1 + A2).
    """
    _check_dimension(N)
    _check_order(s)
    gap = N / s - N + 1
    I1 = 1 / (N * 2 ** (N - 1) * gap)
    I2 = (2 ** (N - 1) - 1) / (2 ** (N - 1) * (N - 1) * N)
    I3 = 2 ** (N - 1) / (N * gap)
    A1 = 1 / (N * 2 ** (N - 1) * gap)
    A2 = 2 ** (N - 1) / (s * gap)
    sphere = sphere_measure(N) ** 2
    split = 2 * sphere * (I1 + I2 + I3) + sphere * (A1 + A2)
    return SeminormBounds(I1=I1, I2=I2, I3=I3, A1=A1, A2=A2, split=split)


@typecheck
def K_frak(N: int, s: Number) -> float:
    """Closed bound on the Gagliardo seminorm of the plateau test function.

    N omega_N^2 / (N/s - N + 1) (3 / 2^N + (2^N - 2)(N/s - N + 1)
    / (2^N (N - 1)) + 2^N (1 + N / (2s)))
    """
    _check_dimension(N)
    _check_order(s)
    gap = N / s - N + 1
    bracket = (
        3 / 2**N
        + (2**N - 2) * gap / (2**N * (N - 1))
        + 2**N * (1 + N / (2 * s))
    )
    return N * unit_ball_volume(N) ** 2 / gap * bracket


@typecheck
def T_frak(
    N: int, s: Number, R: Number = 1 / 3, V_upper: Number = 1.0
) -> float:
    """Threshold T_N(s, R) = (2^{s/N} (J_N(s, R) + K_N(s)))^{-s/N}."""
    total = J_frak(N, s, R, V_upper) + K_frak(N, s)
    return (2 ** (s / N) * total) ** (-s / N)


@typecheck
def beta_0(N: int, s: Number, V_upper: Number = 1.0) -> float:
    """Lower bound beta_0 of beta in f F >= beta t^{N/s}, at R = 1/3."""
    total = J_frak(N, s, 1 / 3, V_upper) + K_frak(N, s)
    prefactor = (
        2 ** (N / s + N)
        * 3**N
        / (unit_ball_volume(N) ** 2 * riesz_constant(N) * log(3))
    )
    return prefactor * total ** (s / N + 1)


@typecheck
def mu_N(N: int, s: Number, tau: Number, form: MuForm = "difference") -> float:
    """Upper margin mu_N(s, tau) of the ratio F f' / f^2.

    min{s/N, (N/s - floor(N/s)) / ((N/s) (N/s)!) * X / (2s)} where
    X = tau - (1 - 2/N) s for ``form="difference"`` and
    X = tau (1 - 2/N) s for ``form="literal"``. The floor is strict and
    (N/s)! is the falling product of `fractional_factorial`.
    """
    _check_dimension(N)
    _check_order(s)
    p = N / s
    if form == "difference":
        inner = tau - (1 - 2 / N) * s
    else:
        inner = tau * (1 - 2 / N) * s
    second = (p - floor_strict(p)) / (p * fractional_factorial(p))
    return min(s / N, second * inner / (2 * s))


@typecheck
def norm_cap(N: int, s: Number, tau: Number) -> float:
    """Uniform bound s / (tau - (1 - 2/N) s) on ||u_mu||_V^{N/s}."""
    return s / (tau - (1 - 2 / N) * s)


@typecheck
def decay_exponent(N: int, s: Number) -> float:
    """Polynomial decay exponent a = s (2N + 3) / (2 (N - s)) of u."""
    return s * (2 * N + 3) / (2 * (N - s))


@typecheck
def primitive_decay_exponent(N: int, s: Number) -> float:
    """Decay exponent N (2N + 3) / (2 (N - s)) of F(u)."""
    return N * (2 * N + 3) / (2 * (N - s))


@typecheck
def level_threshold(N: int, s: Number) -> float:
    """Upper bound s / (2N) of the mountain-pass levels."""
    return s / (2 * N)


@typecheck
def rim_radius_cap(N: int, s: Number) -> float:
    """Smallness constraint ((2N - 1) / (2N))^{(N - s)/N} on the rim radius."""
    return ((2 * N - 1) / (2 * N)) ** ((N - s) / N)


@typecheck
def ray_scale_lower(N: int, s: Number) -> float:
    """Lower bound (1/2)^{s/N} of the ray maximizer through the plateau."""
    return 0.5 ** (s / N)


@typecheck
def gamma_bound(
    N: int, s: Number, tau: Number, W_sup: Number, c_level: Number
) -> float:
    """Bound on ||H_N(u)||_V^{N/s} along a Palais-Smale sequence.

    2 s (N/s)! ||W||_inf / ((N/s - floor(N/s)) (tau - (1 - 2/N) s))
    + (N/s) c_level
    """
    p = N / s
    first = (
        2
        * s
        * fractional_factorial(p)
        * W_sup
        / ((p - floor_strict(p)) * (tau - (1 - 2 / N) * s))
    )
    return first + p * c_level
