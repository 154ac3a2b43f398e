"""Step rules of the saddle search."""

from __future__ import annotations

from collections.abc import Callable
from typing import NamedTuple

import torch

from ..errors import InvalidParameterError


class Step(NamedTuple):
    """Accepted step: its length, the new point and its energy."""

    size: float
    point: torch.Tensor
    value: float
    backtracks: int


class BaseStepRule:
    def __init__(self, name, **kwargs):
        """Store the hyperparameters of the rule as attributes."""
        self.kwargs = kwargs
        self.name = name
        for key, value in kwargs.items():
            setattr(self, key, value)

    def __call__(
        self,
        energy: Callable[[torch.Tensor], float],
        point: torch.Tensor,
        value: float,
        gradient: torch.Tensor,
        direction: torch.Tensor,
        project: Callable[[torch.Tensor], torch.Tensor],
    ) -> Step:
        """Move ``point`` along ``direction`` and return the accepted step."""
        raise NotImplementedError

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.kwargs.items())
        return f"{self.__class__.__name__}({args})"


class FixedStep(BaseStepRule):
    """Constant step, accepted whatever the energy change."""

    def __init__(self, step_size: float = 0.1):
        if step_size <= 0:
            msg = f"The step size must be positive, got {step_size}"
            raise InvalidParameterError(msg)
        super().__init__("fixed", step_size=step_size)

    def __call__(self, energy, point, value, gradient, direction, project):
        new_point = project(point + self.step_size * direction)
        return Step(self.step_size, new_point, energy(new_point), 0)


class Armijo(BaseStepRule):
    """Backtracking line search with the Armijo sufficient-decrease test.

    The step starts at ``step_size`` and is multiplied by ``shrink`` until
    J(P(x + t d)) <= J(x) + c g.(P(x + t d) - x), where P is the projection
    of the saddle search. The step is also accepted when
    ``max_backtracks`` is reached, with the smallest length tried.
    """

    def __init__(
        self,
        step_size: float = 1.0,
        shrink: float = 0.5,
        c: float = 1e-4,
        max_backtracks: int = 40,
        grow: float = 2.0,
    ):
        if step_size <= 0 or not 0 < shrink < 1 or not 0 < c < 1:
            msg = (
                "Expected step_size > 0, 0 < shrink < 1 and 0 < c < 1, got"
                + f" step_size={step_size}, shrink={shrink}, c={c}"
            )
            raise InvalidParameterError(msg)
        super().__init__(
            "armijo",
            step_size=step_size,
            shrink=shrink,
            c=c,
            max_backtracks=max_backtracks,
            grow=grow,
        )
        self.current = step_size

    def __call__(self, energy, point, value, gradient, direction, project):
        t = self.current
        for k in range(self.max_backtracks + 1):
            new_point = project(point + t * direction)
            try:
                new_value = energy(new_point)
            except ArithmeticError:
                new_value = float("inf")
            decrease = float(gradient @ (new_point - point))
            if new_value <= value + self.c * decrease:
                break
            t *= self.shrink
        # the next search starts from a slightly longer step
        self.current = min(self.step_size, t * self.grow)
        return Step(t, new_point, new_value, k)


StepRule = Armijo | FixedStep


def make_step_rule(name: str, step_size: float) -> StepRule:
    """Step rule from its name in the solver options."""
    if name == "armijo":
        return Armijo(step_size=step_size)
    if name == "fixed":
        return FixedStep(step_size=step_size)
    msg = f"Unknown step rule {name!r}, expected 'armijo' or 'fixed'"
    raise InvalidParameterError(msg)
