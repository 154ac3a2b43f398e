"""Discrete mountain-pass saddle search by path deformation."""

from __future__ import annotations

import logging
from collections.abc import Callable
from typing import NamedTuple

import torch

from ..constants import (
    ProblemParams,
    level_threshold,
    norm_cap,
)
from ..energy import Energy, power_kernel, ray_profile
from ..errors import (
    InvalidParameterError,
    MaxIterationsError,
    NotFittedError,
    PathCollapseError,
)
from ..input_validation import no_more_than_one, typecheck
from ..nonlinearity import BaseNonlinearity
from ..optimization import make_step_rule
from ..radial import RadialField, RadialGrid, plateau_test_function
from ..types import Float2dTensor, Number, SaddleOptions
from ..utils import positive_part
from ..verification import CheckRecord, make_record
from .geometry import find_endpoint

logger = logging.getLogger(__name__)


class SaddleResult(NamedTuple):
    """Output of a converged saddle search.

    Parameters
    ----------
    mu : float
        Kernel parameter.
    c_mu : float
        Level estimate, the energy of the path maximizer.
    u_mu : RadialField
        The path maximizer, nonnegative with a Dirichlet last node.
    residual : float
        Weak residual of u_mu.
    norm : float
        ||u_mu||_V^{N/s}.
    iterations : int
        Number of iterations.
    path_points : int
        Number of points of the path.
    level_history : tuple of float
        Level at every iteration.
    residual_history : tuple of float
        Weak residual of the maximizer at every iteration.
    """

    mu: float
    c_mu: float
    u_mu: RadialField
    residual: float
    norm: float
    iterations: int
    path_points: int
    level_history: tuple[float, ...]
    residual_history: tuple[float, ...]

    def as_dict(self) -> dict:
        """Plain dictionary without the field values."""
        out = self._asdict()
        out["u_mu"] = {
            "sup": self.u_mu.sup,
            "n_nodes": self.u_mu.grid.n_nodes,
        }
        out["level_history"] = list(self.level_history)
        out["residual_history"] = list(self.residual_history)
        return out


class SaddleSearch:
    """Mountain-pass saddle search for J_mu by path deformation.

    A discrete path joins 0 to an endpoint of negative energy. At every
    iteration the path point of largest energy is moved along the
    preconditioned descent direction -J'(u)[phi_i] / ||phi_i||_V^{N/s},
    projected on nonnegative fields vanishing at the last node. The path is
    re-parameterized by arc length in ||.||_V every ``reparametrize_every``
    iterations. The search stops when the weak residual of the maximizer is
    below ``tol_residual`` and the level moved by less than ``tol_level``.

    Parameters
    ----------
    mu
        kernel parameter in (0, 1]
    nl
        the nonlinearity
    params
        problem parameters
    grid
        the radial grid
    options
        solver options
    V
        the potential, by default the constant V_upper
    verbose
        positive to log every iteration at INFO level

    Examples
    --------
    >>> params = lcq.ProblemParams(N=2, s=0.5, tau=0.25)
    >>> grid = lcq.RadialGrid(lcq.GridSpec(breakpoints=(1 / 8, 1 / 4)))
    >>> nl = lcq.make_model_nonlinearity(2, 0.5, lam=2e7)
    >>> search = lcq.SaddleSearch(mu=1.0, nl=nl, params=params, grid=grid)
    >>> result = search.fit().result_
    >>> result.c_mu < 0.125
    True
    """

    @typecheck
    def __init__(
        self,
        *,
        mu: Number,
        nl: BaseNonlinearity,
        params: ProblemParams,
        grid: RadialGrid,
        options: SaddleOptions | None = None,
        V: Callable | None = None,
        verbose: int = 0,
    ) -> None:
        if options is None:
            options = SaddleOptions()
        self.mu = float(mu)
        self.nl = nl
        self.params = params
        self.grid = grid
        self.options = options
        self.V = V
        self.verbose = verbose
        self.energy = Energy(grid, power_kernel(mu), nl, params, V)

    def _project(self, values: torch.Tensor) -> torch.Tensor:
        values = positive_part(values)
        values[-1] = 0.0
        return values

    def evaluate(self, values: torch.Tensor) -> float:
        with torch.no_grad():
            return float(self.energy(values))

    def _distance(self, a: torch.Tensor, b: torch.Tensor) -> float:
        p = self.params.N / self.params.s
        return self.energy.norm(a - b) ** (1 / p)

    def reparametrize(self, path: torch.Tensor) -> torch.Tensor:
        """Path resampled at equal arc length in ||.||_V."""
        lengths = torch.tensor(
            [
                self._distance(path[j + 1], path[j])
                for j in range(len(path) - 1)
            ],
            dtype=path.dtype,
        )
        arc = torch.cat([torch.zeros(1, dtype=path.dtype), lengths.cumsum(0)])
        if float(arc[-1]) == 0:
            return path.clone()
        targets = torch.linspace(
            0, float(arc[-1]), len(path), dtype=path.dtype
        )
        index = torch.searchsorted(arc, targets, right=True) - 1
        index = index.clamp(0, len(path) - 2)
        width = (arc[index + 1] - arc[index]).clamp(min=1e-300)
        theta = ((targets - arc[index]) / width).clamp(0, 1)[:, None]
        new_path = (1 - theta) * path[index] + theta * path[index + 1]
        new_path[0], new_path[-1] = path[0], path[-1]
        return new_path

    @no_more_than_one(["endpoint", "initial_path"])
    @typecheck
    def fit(
        self,
        *,
        endpoint: RadialField | None = None,
        initial_path: Float2dTensor | None = None,
    ) -> SaddleSearch:
        """Run the search from the segment [0, endpoint] or a given path.

        Without arguments the endpoint is found by `find_endpoint`. A path
        of another length is re-sampled to ``options.path_points`` points.

        Raises
        ------
        InvalidParameterError
            if the energy of the endpoint is not negative
        PathCollapseError
            if the maximizer of the path reaches one of its ends
        MaxIterationsError
            if the tolerances are not met within ``max_iterations``
        """
        options = self.options
        P = options.path_points
        if initial_path is None:
            if endpoint is None:
                endpoint = find_endpoint(
                    self.mu, self.nl, self.params, self.grid, self.V
                )
            theta = torch.linspace(0, 1, P, dtype=endpoint.values.dtype)
            path = theta[:, None] * endpoint.values.detach()[None, :]
        else:
            path = initial_path.detach().clone()
            path[0] = 0.0
            if len(path) != P:
                path = self._resample(path, P)

        end_value = self.evaluate(path[-1])
        if end_value >= 0:
            msg = (
                "The path must end at a field of negative energy, got"
                + f" J_mu={end_value:.6g} at mu={self.mu}"
            )
            raise InvalidParameterError(msg)

        step_rule = make_step_rule(options.step_rule, options.step_size)
        hat_norms = self.energy.hat_norms()
        energies = torch.tensor(
            [self.evaluate(x) for x in path], dtype=torch.float64
        )

        levels, residuals = [], []
        previous_level = float("inf")
        for iteration in range(1, options.max_iterations + 1):
            k = int(torch.argmax(energies))
            if k in (0, P - 1):
                msg = (
                    f"The path maximizer reached the end {k} of the path at"
                    + f" iteration {iteration} (mu={self.mu})"
                )
                raise PathCollapseError(msg)
            level, gradient = self.energy.value_and_gradient(path[k])
            residual = self.energy.residual(path[k], gradient)
            levels.append(level)
            residuals.append(residual)
            self._log(iteration, level, residual)

            if (
                residual <= options.tol_residual
                and abs(level - previous_level) <= options.tol_level
            ):
                break
            previous_level = level

            direction = -gradient / hat_norms
            step = step_rule(
                self.evaluate,
                path[k],
                level,
                gradient,
                direction,
                self._project,
            )
            path[k] = step.point
            energies[k] = step.value

            if iteration % options.reparametrize_every == 0:
                path = self.reparametrize(path)
                energies = torch.tensor(
                    [self.evaluate(x) for x in path], dtype=torch.float64
                )
        else:
            msg = (
                "The saddle search did not converge in"
                + f" {options.max_iterations} iterations (mu={self.mu}):"
                + f" level {levels[-1]:.6g}, residual {residuals[-1]:.3g}"
            )
            raise MaxIterationsError(msg)

        u_mu = RadialField(self.grid, values=path[k].clone())
        self.path_ = path
        self.level_history_ = tuple(levels)
        self.residual_history_ = tuple(residuals)
        self.n_iter_ = iteration
        self.result_ = SaddleResult(
            mu=self.mu,
            c_mu=level,
            u_mu=u_mu,
            residual=residual,
            norm=self.energy.norm(u_mu.values),
            iterations=iteration,
            path_points=P,
            level_history=self.level_history_,
            residual_history=self.residual_history_,
        )
        logger.info(
            "Saddle at mu=%.4g: level %.8g, residual %.3g, %d iterations",
            self.mu,
            level,
            residual,
            iteration,
        )
        return self

    def _resample(self, path: torch.Tensor, P: int) -> torch.Tensor:
        old = torch.linspace(0, 1, len(path), dtype=path.dtype)
        new = torch.linspace(0, 1, P, dtype=path.dtype)
        index = (torch.searchsorted(old, new, right=True) - 1).clamp(
            0, len(path) - 2
        )
        theta = ((new - old[index]) / (old[index + 1] - old[index]))[:, None]
        return (1 - theta) * path[index] + theta * path[index + 1]

    def _log(self, iteration: int, level: float, residual: float) -> None:
        level_name = logging.INFO if self.verbose > 0 else logging.DEBUG
        logger.log(
            level_name,
            "Iteration %d: level %.10g, residual %.3e",
            iteration,
            level,
            residual,
        )

    @property
    def result(self) -> SaddleResult:
        if not hasattr(self, "result_"):
            msg = "The saddle search must be fitted before reading its result"
            raise NotFittedError(msg)
        return self.result_


@typecheck
def saddle_search(
    mu: Number,
    e: RadialField,
    options: SaddleOptions | None,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
    *,
    verbose: int = 0,
) -> SaddleResult:
    """Mountain-pass critical point of J_mu on the path from 0 to e.

    See `SaddleSearch` for the method and the errors.
    """
    search = SaddleSearch(
        mu=mu,
        nl=nl,
        params=params,
        grid=e.grid,
        options=options,
        V=V,
        verbose=verbose,
    )
    return search.fit(endpoint=e).result_


@typecheck
def level_and_norm_audit(
    result: SaddleResult, params: ProblemParams
) -> list[CheckRecord]:
    """Records of 0 < c_mu < s/(2N) and of the uniform norm cap.

    The cap is ||u_mu||_V^{N/s} < s / (tau - (1 - 2/N) s).
    """
    N, s, tau = params.N, params.s, params.tau
    positive = make_record(
        "level-positive",
        "mountain-pass-level",
        measured=result.c_mu,
        bound=0.0,
        upper=False,
        witness=result.mu,
        note=f"residual {result.residual:.3g}",
    )
    below = make_record(
        "level-bound",
        "level-bound",
        measured=result.c_mu,
        bound=level_threshold(N, s),
        witness=result.mu,
    )
    capped = make_record(
        "norm-cap",
        "uniform-norm-cap",
        measured=result.norm,
        bound=norm_cap(N, s, tau),
        witness=result.mu,
    )
    return [
        positive._replace(passed=bool(result.c_mu > 0)),
        below._replace(passed=bool(below.margin > 0)),
        capped._replace(passed=bool(capped.margin > 0)),
    ]


@typecheck
def ray_level_check(
    result: SaddleResult,
    nl: BaseNonlinearity,
    params: ProblemParams,
    V: Callable | None = None,
    *,
    R: Number = 1 / 3,
) -> list[CheckRecord]:
    """Ray maximum through the plateau of radius R against c_mu and s/(2N).

    The path 0 -> t w is admissible, so its maximum bounds c_mu from above;
    the plateau corners R/2 and R must be grid nodes.
    """
    w = plateau_test_function(R, result.u_mu.grid)
    profile = ray_profile(w, result.mu, nl, params, None, V)
    bracket = make_record(
        "ray-level-bracket",
        "ray-maximum",
        measured=result.c_mu,
        bound=profile.maximum,
        witness=result.mu,
        note="converged level against the ray maximum",
    )
    return [*profile.records(), bracket]
