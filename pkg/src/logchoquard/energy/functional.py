"""The approximating energies J_mu, the logarithmic energy and derivatives.

For a radial u on a grid,

    J(u) = (s/N) ([u]^{N/s} + int V |u|^{N/s})
           - (C_N / 2) int int k(|x - y|) F(u(x)) F(u(y)) dx dy,

with k = G_mu for the approximating problems and k = log(1/.) for the
logarithmic one. F(u) enters the double integral through its nodal
interpolant, so that the discrete energy is a smooth function of the nodal
values; its gradient with respect to the nodal values is the derivative
J'(u)[phi_i] along the hat functions.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from functools import lru_cache
from typing import NamedTuple

import torch

from ..constants import ProblemParams, riesz_constant
from ..errors import InvalidParameterError, TailDivergenceError
from ..input_validation import typecheck
from ..kernels import KernelSpec, convolution_operator
from ..nonlinearity import BaseNonlinearity
from ..radial import (
    RadialField,
    RadialGrid,
    RadialPotential,
    lp_integral,
    seminorm_quadrature,
    tail_bound,
)
from ..types import Float1dTensor, FloatScalar, Number, float_dtype

logger = logging.getLogger(__name__)


class EnergyBreakdown(NamedTuple):
    """Terms of the energy of one field.

    ``total`` is (s/N) (seminorm_term + v_term) - (C_N / 2) conv_term and
    ``mass_term`` is int F(u).
    """

    seminorm_term: float
    v_term: float
    conv_term: float
    mass_term: float
    total: float
    kernel: str

    @property
    def norm_term(self) -> float:
        """||u||_V^{N/s}."""
        return self.seminorm_term + self.v_term

    def recombine(self, N: int, s: float) -> float:
        """Total recomputed from the terms."""
        C_N = riesz_constant(N)
        return (s / N) * self.norm_term - 0.5 * C_N * self.conv_term

    def as_dict(self) -> dict:
        return self._asdict()


def power_kernel(mu: Number) -> KernelSpec:
    """Kernel G_mu, with validation of mu in (0, 1]."""
    if not 0 < mu <= 1:
        msg = f"The kernel parameter mu must lie in (0, 1], got mu={mu}"
        raise InvalidParameterError(msg)
    return KernelSpec("power", float(mu))


class Energy:
    """Discrete energy on a grid for a kernel, a nonlinearity and V.

    The seminorm quadrature and the convolution matrix are assembled once
    (and cached across instances). The last node is a Dirichlet node: the
    fields vanish at r_max and the gradient is not computed there.

    Parameters
    ----------
    grid
        the radial grid
    kernel
        the convolution kernel
    nl
        the nonlinearity
    params
        problem parameters
    V
        the potential, by default the constant V_upper
    """

    def __init__(
        self,
        grid: RadialGrid,
        kernel: KernelSpec,
        nl: BaseNonlinearity,
        params: ProblemParams,
        V: Callable | None = None,
    ) -> None:
        self.grid = grid
        self.kernel = kernel
        self.nl = nl
        self.params = params
        self.V = V if V is not None else RadialPotential.from_params(params)
        N, s = params.N, params.s
        self.p = N / s
        self.C_N = riesz_constant(N)
        self.seminorm = seminorm_quadrature(grid, N, s)
        self.convolution = convolution_operator(grid, kernel, N, "points")
        self.V_points = torch.as_tensor(self.V(grid.points), dtype=float_dtype)

    def norm_terms(
        self, values: Float1dTensor
    ) -> tuple[FloatScalar, FloatScalar]:
        """[u]^{N/s} and int V |u|^{N/s}."""
        N = self.params.N
        seminorm = self.seminorm(values)
        v_term = self.grid.integrate(
            self.V_points * self.grid.at_points(values).abs() ** self.p, N
        )
        return seminorm, v_term

    def primitive_terms(
        self, values: Float1dTensor
    ) -> tuple[FloatScalar, FloatScalar]:
        """int int k F(u) F(u) and int F(u), through the nodal interpolant."""
        N = self.params.N
        F = self.nl.primitive(values)
        F_points = self.grid.at_points(F)
        convolved = self.convolution(F).reshape(F_points.shape)
        conv = self.grid.integrate(F_points * convolved, N)
        mass = self.grid.integrate(F_points, N)
        return conv, mass

    def __call__(self, values: Float1dTensor) -> FloatScalar:
        seminorm, v_term = self.norm_terms(values)
        conv, _ = self.primitive_terms(values)
        s, N = self.params.s, self.params.N
        return (s / N) * (seminorm + v_term) - 0.5 * self.C_N * conv

    def breakdown(self, values: Float1dTensor) -> EnergyBreakdown:
        with torch.no_grad():
            seminorm, v_term = self.norm_terms(values)
            conv, mass = self.primitive_terms(values)
        s, N = self.params.s, self.params.N
        norm = float(seminorm) + float(v_term)
        total = (s / N) * norm - 0.5 * self.C_N * float(conv)
        return EnergyBreakdown(
            seminorm_term=float(seminorm),
            v_term=float(v_term),
            conv_term=float(conv),
            mass_term=float(mass),
            total=total,
            kernel=self.kernel.name,
        )

    def value_and_gradient(
        self, values: Float1dTensor
    ) -> tuple[float, Float1dTensor]:
        """Energy and nodal gradient J'(u)[phi_i], zero at the last node."""
        x = values.detach().clone().requires_grad_(True)
        energy = self(x)
        (gradient,) = torch.autograd.grad(energy, x)
        gradient = gradient.detach().clone()
        gradient[-1] = 0.0
        return float(energy), gradient

    def gradient(self, values: Float1dTensor) -> Float1dTensor:
        return self.value_and_gradient(values)[1]

    def norm(self, values: Float1dTensor) -> float:
        """||u||_V^{N/s}."""
        with torch.no_grad():
            seminorm, v_term = self.norm_terms(values)
        return float(seminorm + v_term)

    def hat_norms(self) -> Float1dTensor:
        """||phi_i||_V^{N/s} for every hat function."""
        return hat_norms(self.grid, self.params, self.V)

    def residual(self, values: Float1dTensor, gradient=None) -> float:
        """max_i |J'(u)[phi_i]| / ||phi_i||_V over the free nodes."""
        if gradient is None:
            gradient = self.gradient(values)
        scale = self.hat_norms() ** (1 / self.p)
        return float((gradient[:-1].abs() / scale[:-1]).max())


@lru_cache(maxsize=16)
def _hat_norms(grid: RadialGrid, params: ProblemParams, V) -> torch.Tensor:
    N, s = params.N, params.s
    quadrature = seminorm_quadrature(grid, N, s)
    norms = torch.empty(grid.n_nodes, dtype=float_dtype)
    with torch.no_grad():
        for i in range(grid.n_nodes):
            hat = grid.hat(i)
            norms[i] = quadrature(hat) + lp_integral(hat, grid, N / s, N, V)
    logger.debug("Computed %d hat norms", grid.n_nodes)
    return norms


def hat_norms(grid: RadialGrid, params: ProblemParams, V=None) -> torch.Tensor:
    """||phi_i||_V^{N/s} of the hat functions, cached per grid and V."""
    if V is None:
        V = RadialPotential.from_params(params)
    return _hat_norms(grid, params, V)


@typecheck
def energy_mu(
    u: RadialField,
    mu: Number,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
) -> EnergyBreakdown:
    """Energy J_mu of a radial field with the kernel G_mu.

    Raises
    ------
    InvalidParameterError
        if mu is not in (0, 1]
    OverflowGuardError
        if the nonlinearity overflows on the values of u

    Examples
    --------
    >>> params = lcq.ProblemParams(N=2, s=0.5, tau=0.25)
    >>> grid = lcq.RadialGrid(lcq.GridSpec(n_uniform=16, r_max=4.0))
    >>> u = lcq.RadialField(grid, values=torch.zeros(grid.n_nodes,
    ...                                              dtype=torch.float64))
    >>> nl = lcq.make_model_nonlinearity(2, 0.5)
    >>> lcq.energy_mu(u, 0.5, nl, params).total
    0.0
    """
    energy = Energy(u.grid, power_kernel(mu), nl, params, V)
    return energy.breakdown(u.values)


@typecheck
def gateaux_mu(
    u: RadialField,
    mu: Number,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
) -> Float1dTensor:
    """Nodal derivative J_mu'(u)[phi_i], one value per node.

    The value at the last node is 0 (Dirichlet node).
    """
    energy = Energy(u.grid, power_kernel(mu), nl, params, V)
    return energy.gradient(u.values)


@typecheck
def weak_residual(
    u: RadialField,
    mu: Number,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
) -> float:
    """Discrete dual norm max_i |J_mu'(u)[phi_i]| / ||phi_i||_V."""
    energy = Energy(u.grid, power_kernel(mu), nl, params, V)
    return energy.residual(u.values)


def _check_primitive_tail(
    u: RadialField, nl: BaseNonlinearity, N: int
) -> None:
    F = RadialField(u.grid, values=nl.primitive(u.values).detach())
    tail = tail_bound(F, 1, N)
    if tail.lp_tail == float("inf"):
        msg = (
            f"F(u) decays like r^(-{tail.exponent:.3g}), the logarithmic"
            + f" energy diverges in dimension {N}"
        )
        raise TailDivergenceError(msg)


@typecheck
def energy_log(
    u: RadialField,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
) -> EnergyBreakdown:
    """Energy with the logarithmic kernel log(1/|x - y|).

    The absolute value of ``conv_term`` is the quantity whose finiteness is
    recorded for the limit of the continuation.

    Raises
    ------
    TailDivergenceError
        if the decay of F(u) fitted on the last decade is at most N
    """
    _check_primitive_tail(u, nl, params.N)
    energy = Energy(u.grid, KernelSpec("log"), nl, params, V)
    return energy.breakdown(u.values)


@typecheck
def gateaux_log(
    u: RadialField,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
) -> Float1dTensor:
    """Nodal derivative of the logarithmic energy."""
    _check_primitive_tail(u, nl, params.N)
    energy = Energy(u.grid, KernelSpec("log"), nl, params, V)
    return energy.gradient(u.values)


@typecheck
def weak_residual_log(
    u: RadialField,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
) -> float:
    """Discrete dual norm of the derivative of the logarithmic energy."""
    _check_primitive_tail(u, nl, params.N)
    energy = Energy(u.grid, KernelSpec("log"), nl, params, V)
    return energy.residual(u.values)
