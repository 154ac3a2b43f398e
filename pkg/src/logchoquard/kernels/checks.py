"""Numerical checks of the kernel inequalities and of the HLS inequality."""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np
import torch

from ..errors import InvalidExponentError, InvalidParameterError
from ..input_validation import convert_inputs, typecheck
from ..radial import RadialField, log_phi_ns, lp_norm
from ..types import Float1dTensor, FloatSequence, Number
from ..utils import loglog_slope
from ..verification import CheckRecord, make_record
from .convolution import convolution_operator
from .functions import KernelSpec, kernel_eval

logger = logging.getLogger(__name__)


def _stability(fine: float, coarse: float) -> float:
    if fine == coarse:
        return 0.0
    return abs(fine - coarse) / max(abs(fine), abs(coarse))


def _max_constant(
    log_values: torch.Tensor, t: torch.Tensor
) -> tuple[float, float]:
    index = int(torch.argmax(log_values))
    return float(torch.exp(log_values[index])), float(t[index])


@convert_inputs
@typecheck
def check_kernel_inequalities(
    mu: Number,
    nu: Number,
    t_grid: Float1dTensor,
    *,
    stability: Number = 0.01,
) -> list[CheckRecord]:
    """Check G_mu >= log(1/t) on (0, 1] and G_mu <= C_nu t^{-nu}.

    The smallest constant C_nu valid at every grid point is measured on the
    grid and on the subgrid of even-indexed points; both values are
    reported, and their relative difference is compared with
    ``stability``.

    Parameters
    ----------
    mu
        kernel parameter in (0, 1]
    nu
        exponent of the upper bound, nu > mu
    t_grid
        positive distances
    stability
        tolerance on the relative change of C_nu under coarsening

    Returns
    -------
    list of CheckRecord
        records of the lower inequality, of the finiteness of C_nu and of
        its stability

    Examples
    --------
    >>> t = torch.logspace(-6, 2, 1000, dtype=torch.float64)
    >>> records = lcq.check_kernel_inequalities(1.0, 1.5, t)
    >>> all(record.passed for record in records)
    True
    """
    if not 0 < mu <= 1 or nu <= mu:
        msg = f"Expected 0 < mu <= 1 and nu > mu, got mu={mu}, nu={nu}"
        raise InvalidParameterError(msg)
    t = t_grid
    G = kernel_eval(KernelSpec("power", mu), t)

    records = []
    unit = t <= 1
    if bool(unit.any()):
        gap = G[unit] + torch.log(t[unit])
        index = int(torch.argmin(gap))
        scale = float(G[unit].abs().max())
        records.append(
            make_record(
                "kernel-log-lower",
                "kernel-inequality",
                measured=float(gap[index]),
                bound=0.0,
                upper=False,
                witness=float(t[unit][index]),
                slack=1e-14 * max(1.0, scale),
                note=f"min of G_mu(t) - log(1/t) on (0, 1], mu={mu}",
            )
        )

    # C_nu = max G_mu(t) t^nu, positive since G_mu > 0 on (0, 1)
    positive = G > 0
    if bool(positive.any()):
        log_values = torch.log(G[positive]) + nu * torch.log(t[positive])
        C, witness = _max_constant(log_values, t[positive])
        coarse = positive.clone()
        coarse[1::2] = False
        C_coarse, _ = _max_constant(
            torch.log(G[coarse]) + nu * torch.log(t[coarse]), t[coarse]
        )
    else:
        C, witness, C_coarse = 0.0, float(t[0]), 0.0
    records.append(
        make_record(
            "kernel-power-upper",
            "kernel-inequality",
            measured=C,
            bound=float("inf"),
            witness=witness,
            note=f"minimal C_nu with G_mu <= C_nu t^-nu, nu={nu}",
        )
    )
    records.append(
        make_record(
            "kernel-power-upper-stability",
            "kernel-inequality",
            measured=_stability(C, C_coarse),
            bound=stability,
            note=f"C_nu={C:.10g} on the grid, {C_coarse:.10g} on the subgrid",
        )
    )
    return records


@convert_inputs
@typecheck
def phi_power_bound_check(
    alpha: Number,
    r_pow: Number,
    beta: Number,
    t_grid: Float1dTensor,
    N: int,
    s: Number,
    *,
    stability: Number = 0.02,
) -> list[CheckRecord]:
    """Measure C_beta with Phi(alpha t^g)^r <= C_beta Phi(alpha beta t^g).

    Here g = N/(N - s) and Phi = Phi_{N,s}. The constant is the maximum of
    the ratio over the grid, computed in log space, and it is compared with
    the same maximum on the even-indexed subgrid.

    Raises
    ------
    InvalidParameterError
        if r_pow <= 1 or beta <= r_pow
    """
    if r_pow <= 1 or beta <= r_pow:
        msg = f"Expected 1 < r < beta, got r={r_pow}, beta={beta}"
        raise InvalidParameterError(msg)
    if alpha <= 0 or bool(torch.any(t_grid <= 0)):
        msg = "alpha and the grid points must be positive"
        raise InvalidParameterError(msg)
    t = t_grid
    argument = alpha * t ** (N / (N - s))
    log_ratio = r_pow * log_phi_ns(argument, N, s) - log_phi_ns(
        beta * argument, N, s
    )
    C, witness = _max_constant(log_ratio, t)
    C_coarse, _ = _max_constant(log_ratio[::2], t[::2])
    return [
        make_record(
            "phi-power-bound",
            "phi-power-bound",
            measured=C,
            bound=float("inf"),
            witness=witness,
            note=f"minimal C_beta for alpha={alpha}, r={r_pow}, beta={beta}",
        ),
        make_record(
            "phi-power-bound-stability",
            "phi-power-bound",
            measured=_stability(C, C_coarse),
            bound=stability,
            note=(
                f"C_beta={C:.10g} on the grid,"
                + f" {C_coarse:.10g} on the subgrid"
            ),
        ),
    ]


class HLSRatio(NamedTuple):
    """Both sides of the Hardy-Littlewood-Sobolev inequality, and ratio."""

    lhs: float
    rhs: float
    ratio: float

    def record(self) -> CheckRecord:
        return make_record(
            "hls-ratio",
            "hls-inequality",
            measured=self.ratio,
            bound=float("inf"),
            note=f"lhs={self.lhs:.6g}, rhs={self.rhs:.6g}",
        )


@typecheck
def hls_ratio(
    f: RadialField,
    h: RadialField,
    mu_exp: Number,
    q: Number,
    r: Number,
    N: int,
) -> HLSRatio:
    """Empirical HLS constant int (|.|^{-mu} * f) h / (||f||_q ||h||_r).

    Raises
    ------
    InvalidExponentError
        if 1/q + mu/N + 1/r != 2 (up to 1e-12) or q, r <= 1
    """
    if q <= 1 or r <= 1 or abs(1 / q + mu_exp / N + 1 / r - 2) > 1e-12:
        msg = (
            "The exponents must satisfy 1/q + mu/N + 1/r = 2 with q, r > 1,"
            + f" got q={q}, mu={mu_exp}, r={r}, N={N}"
        )
        raise InvalidExponentError(msg)
    if not 0 < mu_exp < N:
        msg = f"The Riesz exponent must lie in (0, N), got {mu_exp}"
        raise InvalidExponentError(msg)
    if f.grid != h.grid:
        h = h.resample(f.grid)
    grid = f.grid
    rhs = lp_norm(f, q, N=N) * lp_norm(h, r, N=N)
    if rhs == 0:
        return HLSRatio(lhs=0.0, rhs=0.0, ratio=0.0)
    kernel = KernelSpec("riesz", mu_exp)
    operator = convolution_operator(grid, kernel, N, "points")
    convolved = operator(f).reshape(grid.n_segments, grid.order)
    lhs = float(grid.integrate(convolved * h.at_points(), N))
    return HLSRatio(lhs=lhs, rhs=rhs, ratio=lhs / rhs)


class KernelConvergence(NamedTuple):
    """Sup-distances between G_mu and log(1/t) and the order in mu."""

    mu_values: tuple[float, ...]
    sup_distances: tuple[float, ...]
    order: float

    def record(self, min_order: float = 0.9) -> CheckRecord:
        return make_record(
            "kernel-convergence-order",
            "kernel-convergence",
            measured=self.order,
            bound=min_order,
            upper=False,
            note="empirical order of sup |G_mu - log(1/t)| in mu",
        )


@typecheck
def kernel_convergence_order(
    mu_values: FloatSequence = tuple(2.0**-k for k in range(1, 11)),
    t_range: tuple[Number, Number] = (0.1, 10.0),
    n_points: int = 2001,
) -> KernelConvergence:
    """Measure the locally uniform convergence G_mu -> log(1/t) as mu -> 0.

    Examples
    --------
    >>> result = lcq.kernel_convergence_order()
    >>> result.order > 0.9
    True
    """
    lo, hi = np.log10(t_range[0]), np.log10(t_range[1])
    t = torch.logspace(lo, hi, n_points, dtype=torch.float64)
    target = -torch.log(t)
    distances = []
    for mu in mu_values:
        G = kernel_eval(KernelSpec("power", float(mu)), t)
        distances.append(float((G - target).abs().max()))
    order = loglog_slope(list(mu_values), distances)
    logger.info("Kernel convergence order %.4f", order)
    return KernelConvergence(
        mu_values=tuple(float(mu) for mu in mu_values),
        sup_distances=tuple(distances),
        order=order,
    )
