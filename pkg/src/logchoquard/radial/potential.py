"""Radial potentials V pinched between two positive constants."""

from __future__ import annotations

from typing import Literal

import torch

from ..constants import ProblemParams
from ..errors import InvalidParameterError
from ..input_validation import typecheck
from ..types import FloatTensor, Number, float_dtype


class RadialPotential:
    """Radial potential with V_lower <= V <= V_upper.

    Two shapes are available: ``"constant"`` (V = V_upper) and ``"well"``,
    V(r) = V_lower + (V_upper - V_lower) r^2 / (1 + r^2), which equals
    V_lower at the origin and tends to V_upper at infinity.

    Parameters
    ----------
    kind
        shape of the potential
    V_lower, V_upper
        bounds of the potential
    """

    @typecheck
    def __init__(
        self,
        kind: Literal["constant", "well"] = "constant",
        *,
        V_lower: Number = 1.0,
        V_upper: Number = 1.0,
    ) -> None:
        if not 0 < V_lower <= V_upper:
            msg = (
                "The potential bounds must satisfy 0 < V_lower <= V_upper,"
                + f" got V_lower={V_lower}, V_upper={V_upper}"
            )
            raise InvalidParameterError(msg)
        self.kind = kind
        self.V_lower = float(V_lower)
        self.V_upper = float(V_upper)

    @classmethod
    def from_params(
        cls,
        params: ProblemParams,
        kind: Literal["constant", "well"] = "constant",
    ) -> RadialPotential:
        return cls(kind, V_lower=params.V_lower, V_upper=params.V_upper)

    def __call__(self, r: FloatTensor) -> FloatTensor:
        r = torch.as_tensor(r, dtype=float_dtype)
        if self.kind == "constant":
            return torch.full_like(r, self.V_upper)
        r2 = r**2
        return self.V_lower + (self.V_upper - self.V_lower) * r2 / (1 + r2)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "V_lower": self.V_lower,
            "V_upper": self.V_upper,
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RadialPotential):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash((self.kind, self.V_lower, self.V_upper))

    def __repr__(self) -> str:
        return (
            f"RadialPotential({self.kind!r}, V_lower={self.V_lower},"
            + f" V_upper={self.V_upper})"
        )
