"""Audits of the energy: expanded form, transforms, ray and growth bounds."""

from __future__ import annotations

import logging
from collections.abc import Callable
from typing import NamedTuple

import numpy as np
import torch

from ..constants import (
    ProblemParams,
    gamma_bound,
    level_threshold,
    ray_scale_lower,
    riesz_constant,
)
from ..input_validation import convert_inputs, typecheck
from ..kernels import KernelSpec, convolution_operator
from ..nonlinearity import BaseNonlinearity
from ..radial import RadialField, v_norm
from ..types import Float1dTensor, FloatSequence, Number, float_dtype
from ..verification import CheckRecord, make_record, skip_record
from .functional import Energy, power_kernel

logger = logging.getLogger(__name__)

# f(u) below this value is treated as zero in F(u) / f(u)
DIVISION_GUARD = 1e-300


def _primitive_over_f(
    values: torch.Tensor, nl: BaseNonlinearity, slope: float
) -> torch.Tensor:
    """F(u)/f(u) where u > 0 and f(u) > guard, slope * u elsewhere."""
    f = nl.f(values)
    safe = (values > 0) & (f > DIVISION_GUARD)
    u_safe = torch.where(safe, values, torch.ones_like(values))
    ratio = torch.exp(nl.log_primitive(u_safe) - nl.log_f(u_safe))
    return torch.where(safe, ratio, slope * values)


@typecheck
def expanded_form_check(
    u: RadialField,
    mu: Number,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
    *,
    rtol: Number = 1e-8,
) -> CheckRecord:
    """Compare J_mu with its expanded form.

    (s/N)||u||^{N/s} + C_N/(2 mu) (int F(u))^2
    - C_N/(2 mu) int int |x - y|^{-mu} F(u(x)) F(u(y)).
    """
    energy = Energy(u.grid, power_kernel(mu), nl, params, V)
    breakdown = energy.breakdown(u.values)
    grid, N, s = u.grid, params.N, params.s
    with torch.no_grad():
        F = nl.primitive(u.values)
        F_points = grid.at_points(F)
        riesz = convolution_operator(
            grid, KernelSpec("riesz", mu), N, "points"
        )
        double = float(
            grid.integrate(F_points * riesz(F).reshape(F_points.shape), N)
        )
    C_N = riesz_constant(N)
    expanded = (
        (s / N) * breakdown.norm_term
        + C_N / (2 * mu) * breakdown.mass_term**2
        - C_N / (2 * mu) * double
    )
    scale = max(
        abs(breakdown.total), abs(expanded), C_N / (2 * mu) * abs(double)
    )
    return make_record(
        "energy-expanded-form",
        "energy-expanded-form",
        measured=abs(expanded - breakdown.total),
        bound=rtol * max(scale, 1e-300),
        note=f"J_mu={breakdown.total:.12g}, expanded={expanded:.12g}",
    )


@typecheck
def ff_ratio_check(
    u: RadialField,
    nl: BaseNonlinearity,
    params: ProblemParams,
    *,
    rtol: Number = 1e-10,
) -> list[CheckRecord]:
    """Audit of the transform v = F(u)/f(u).

    v = F(u)/f(u) where u > 0 and v = (s - tau) u elsewhere. The records
    check |v| <= (s - tau)|u| at every node and that the mixed pairing
    int int |u(x)-u(y)|^{N/s-2} (u(x)-u(y)) (v(x)-v(y)) / |x-y|^{2N} is at
    most (s - tau)[u]^{N/s}. The pairing is the derivative of the discrete
    seminorm at u in the direction v, divided by N/s.
    """
    N, s, tau = params.N, params.s, params.tau
    slope = s - tau
    values = u.values.detach()
    v = _primitive_over_f(values, nl, slope)

    excess = v.abs() - slope * values.abs()
    index = int(torch.argmax(excess))
    nodewise = make_record(
        "ff-nodewise",
        "ff-transform",
        measured=float(excess[index]),
        bound=0.0,
        witness=float(u.nodes[index]),
        slack=rtol * max(1.0, float(values.abs().max())),
        note="max of |v| - (s - tau)|u| over the nodes",
    )

    energy = Energy(u.grid, KernelSpec("log"), nl, params)
    x = values.clone().requires_grad_(True)
    seminorm = energy.seminorm(x)
    (gradient,) = torch.autograd.grad(seminorm, x)
    pairing = float(gradient @ v) / (N / s)
    bound = slope * float(seminorm)
    pairing_record = make_record(
        "ff-pairing",
        "ff-transform",
        measured=pairing,
        bound=bound,
        slack=rtol * max(abs(bound), 1e-300),
        note="mixed pairing against (s - tau) [u]^(N/s)",
    )
    return [nodewise, pairing_record]


@typecheck
def h_transform_check(
    u: RadialField,
    c_level: Number,
    nl: BaseNonlinearity,
    params: ProblemParams,
    *,
    W_sup: Number | None = None,
    V: Callable | None = None,
) -> list[CheckRecord]:
    """Audit of v = H(u) = u - (N/2s) F(u)/f(u).

    ||v||_V^{N/s} is compared with the bound gamma_N(s, tau) of
    `gamma_bound`, where W_sup = sup |(N/2s)(F f'/f^2 - 1)|. W_sup is
    measured on the values of u when not given. The bound itself is checked
    to be below 1.
    """
    N, s, tau = params.N, params.s, params.tau
    factor = N / (2 * s)
    values = u.values.detach()
    v = values - factor * _primitive_over_f(values, nl, s - tau)
    if W_sup is None:
        positive = values[values > 0]
        if len(positive) == 0:
            W_sup = 0.0
        else:
            W_sup = float((factor * (nl.ratio(positive) - 1)).abs().max())
    energy = Energy(u.grid, KernelSpec("log"), nl, params, V)
    norm = energy.norm(v)
    bound = gamma_bound(N, s, tau, W_sup, c_level)
    note = (
        "bound reconstructed from the proof of the Palais-Smale estimate,"
        + f" W_sup={W_sup:.6g}"
    )
    below_one = make_record(
        "h-transform-bound-below-one",
        "h-transform",
        measured=bound,
        bound=1.0,
        note=note,
    )
    return [
        make_record(
            "h-transform-norm",
            "h-transform",
            measured=norm,
            bound=bound,
            note=note,
        ),
        below_one._replace(passed=bool(below_one.margin > 0)),
    ]


class RayProfile(NamedTuple):
    """Energy along the ray t -> t w / ||w||_V and its maximum."""

    t: tuple[float, ...]
    energies: tuple[float, ...]
    T: float
    maximum: float
    threshold: float
    scale_lower: float

    def records(self) -> list[CheckRecord]:
        below = make_record(
            "ray-maximum",
            "ray-maximum",
            measured=self.maximum,
            bound=self.threshold,
            witness=self.T,
        )
        records = [below._replace(passed=bool(below.margin > 0))]
        if self.maximum >= self.threshold:
            records.append(
                make_record(
                    "ray-maximizer-scale",
                    "ray-maximum",
                    measured=self.T,
                    bound=self.scale_lower,
                    upper=False,
                )
            )
        else:
            records.append(
                skip_record(
                    "ray-maximizer-scale",
                    "ray-maximum",
                    "the ray maximum is below s/(2N)",
                )
            )
        return records


@typecheck
def ray_profile(
    w: RadialField,
    mu: Number | None,
    nl: BaseNonlinearity,
    params: ProblemParams,
    t_grid: FloatSequence | None = None,
    V: Callable | None = None,
) -> RayProfile:
    """J_mu(t w / ||w||_V) on a grid of t, with the log kernel if mu is None.

    The maximizer is refined by a golden-section search around the best
    grid point. Evaluations that overflow are treated as -inf, since F(u)
    dominates the energy there.
    """
    kernel = KernelSpec("log") if mu is None else power_kernel(mu)
    energy = Energy(w.grid, kernel, nl, params, V)
    N, s = params.N, params.s
    scale = energy.norm(w.values) ** (s / N)
    direction = w.values.detach() / scale
    if t_grid is None:
        t_grid = np.linspace(0.0, 4.0, 161)
    t_values = np.asarray(t_grid, dtype=np.float64)

    def J(t: float) -> float:
        try:
            with torch.no_grad():
                return float(energy(t * direction))
        except ArithmeticError:
            return -np.inf

    energies = np.array([J(t) for t in t_values])
    k = int(np.argmax(energies))
    lo = t_values[max(k - 1, 0)]
    hi = t_values[min(k + 1, len(t_values) - 1)]
    golden = (np.sqrt(5) - 1) / 2
    a, b = lo + (1 - golden) * (hi - lo), lo + golden * (hi - lo)
    Ja, Jb = J(a), J(b)
    for _ in range(60):
        if Ja >= Jb:
            hi, b, Jb = b, a, Ja
            a = lo + (1 - golden) * (hi - lo)
            Ja = J(a)
        else:
            lo, a, Ja = a, b, Jb
            b = lo + golden * (hi - lo)
            Jb = J(b)
    T = (lo + hi) / 2
    maximum = J(T)
    if energies[k] > maximum:
        T, maximum = float(t_values[k]), float(energies[k])
    return RayProfile(
        t=tuple(float(t) for t in t_values),
        energies=tuple(float(e) for e in energies),
        T=float(T),
        maximum=float(maximum),
        threshold=level_threshold(N, s),
        scale_lower=ray_scale_lower(N, s),
    )


def _log_mass(
    values: torch.Tensor, u: RadialField, nl: BaseNonlinearity, N: int
) -> float:
    """log int F(u) computed in log space."""
    points = u.grid.at_points(values)
    measure = u.grid.measure(N)
    positive = points > 0
    if not bool(positive.any()):
        return -np.inf
    logs = nl.log_primitive(points[positive]) + torch.log(measure[positive])
    return float(torch.logsumexp(logs, dim=0))


@convert_inputs
@typecheck
def psi_growth_check(
    e0: RadialField,
    nl: BaseNonlinearity,
    params: ProblemParams,
    t_grid: Float1dTensor | None = None,
) -> CheckRecord:
    """Check Psi(t) >= Psi(1) t^{2/(s - tau)} for t >= 1.

    Psi(t) = (1/2) (int F(t e0))^2 is evaluated in log space; the record
    holds the minimum over the grid of log Psi(t) - log Psi(1)
    - (2/(s - tau)) log t.
    """
    N, s, tau = params.N, params.s, params.tau
    if t_grid is None:
        t_grid = torch.linspace(1.0, 16.0, 151, dtype=float_dtype)
    values = e0.values.detach()
    log_mass_one = _log_mass(values, e0, nl, N)
    if log_mass_one == -np.inf:
        return skip_record("psi-growth", "psi-growth", "F(e0) vanishes")
    exponent = 2 / (s - tau)
    gaps = []
    for t in t_grid[t_grid >= 1].tolist():
        log_psi_ratio = 2 * (_log_mass(t * values, e0, nl, N) - log_mass_one)
        gaps.append((log_psi_ratio - exponent * np.log(t), t))
    gap, witness = min(gaps)
    return make_record(
        "psi-growth",
        "psi-growth",
        measured=gap,
        bound=0.0,
        upper=False,
        witness=witness,
        slack=1e-12,
        note="min of log(Psi(t)/Psi(1)) - 2 log(t)/(s - tau)",
    )


@typecheck
def ps_bound_check(
    u: RadialField,
    c_level: Number,
    params: ProblemParams,
    V: Callable | None = None,
    *,
    slack: Number = 0.0,
) -> CheckRecord:
    """Check (tau - (1 - 2/N) s) ||u||_V^{N/s} <= 2 c_level."""
    norm = v_norm(u, params, V)
    return make_record(
        "ps-bound",
        "ps-bound",
        measured=params.ps_factor * norm,
        bound=2 * c_level,
        slack=float(slack),
        note=f"||u||_V^(N/s) = {norm:.8g}",
    )


@typecheck
def gradient_check(
    u: RadialField,
    mu: Number,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
    *,
    every: int = 8,
    rtol: Number = 1e-4,
) -> CheckRecord:
    """Compare J_mu'(u)[phi_i] with central differences at every k-th node.

    The increment is eps = 1e-5 ||u||_V. Errors are relative to
    max(|J_mu'(u)[phi_i]|, 1e-3 max_j |J_mu'(u)[phi_j]|), so that nodes
    where the derivative nearly vanishes do not dominate.
    """
    energy = Energy(u.grid, power_kernel(mu), nl, params, V)
    values = u.values.detach()
    gradient = energy.gradient(values)
    N, s = params.N, params.s
    eps = 1e-5 * max(v_norm(u, params, V) ** (s / N), 1e-12)
    nodes = range(0, u.grid.n_nodes - 1, every)
    scale = 1e-3 * float(gradient[list(nodes)].abs().max())
    worst, witness = 0.0, None
    with torch.no_grad():
        for i in nodes:
            hat = u.grid.hat(i)
            plus = float(energy(values + eps * hat))
            minus = float(energy(values - eps * hat))
            fd = (plus - minus) / (2 * eps)
            g = float(gradient[i])
            error = abs(fd - g) / max(abs(g), scale, 1e-300)
            if error >= worst:
                worst, witness = error, float(u.nodes[i])
    logger.debug("Gradient check at mu=%g: relative error %.3e", mu, worst)
    return make_record(
        f"gradient-fd-mu-{mu:g}",
        "gateaux-derivative",
        measured=worst,
        bound=rtol,
        witness=witness,
        note=f"central differences with eps={eps:.3g}, every {every} nodes",
    )
