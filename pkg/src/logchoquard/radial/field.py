"""Piecewise-linear radial fields."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

import numpy as np
import torch

from ..errors import InvalidParameterError
from ..input_validation import one_and_only_one, typecheck
from ..types import Float1dTensor, FloatTensor, Number, float_dtype
from .grid import RadialGrid


class RadialField:
    """Radial function sampled at the nodes of a `RadialGrid`.

    The field is the piecewise-linear interpolant of its nodal values and
    vanishes beyond the last node. It is built either from nodal values or
    from a function of the radius evaluated at the nodes.

    Parameters
    ----------
    grid
        the radial grid
    values
        nodal values, one per node
    function
        function of the radius (tensor in, tensor out)

    Raises
    ------
    InputStructureError
        if both or none of ``values`` and ``function`` are given
    InvalidParameterError
        if the values are not finite or do not match the grid

    Examples
    --------
    >>> grid = lcq.RadialGrid(lcq.GridSpec(n_uniform=16, r_max=4.0))
    >>> u = lcq.RadialField(grid, function=lambda r: torch.exp(-r))
    >>> float(u(torch.tensor([0.0], dtype=torch.float64))[0])
    1.0
    """

    @one_and_only_one(["values", "function"])
    def __init__(
        self,
        grid: RadialGrid,
        *,
        values: Float1dTensor | np.ndarray | None = None,
        function: Callable | None = None,
    ) -> None:
        if function is not None:
            values = function(grid.nodes)
        values = torch.as_tensor(values, dtype=float_dtype)
        if values.shape != grid.nodes.shape:
            msg = (
                f"Expected {grid.n_nodes} nodal values, got shape"
                + f" {tuple(values.shape)}"
            )
            raise InvalidParameterError(msg)
        if not torch.isfinite(values).all():
            msg = "Field values must be finite"
            raise InvalidParameterError(msg)
        self.grid = grid
        self.values = values

    @property
    def nodes(self) -> Float1dTensor:
        return self.grid.nodes

    def __call__(self, r) -> FloatTensor:
        """Evaluate the field at arbitrary radii."""
        return self.grid.interpolate(self.values, r)

    def at_points(self) -> FloatTensor:
        """Values at the Gauss points of the grid."""
        return self.grid.at_points(self.values)

    def with_values(self, values: Float1dTensor) -> RadialField:
        """Field on the same grid with other nodal values."""
        return RadialField(self.grid, values=values)

    def positive_part(self) -> RadialField:
        return self.with_values(torch.clamp(self.values, min=0))

    @property
    def sup(self) -> float:
        """Maximum of |u|, attained at a node."""
        return float(self.values.abs().max())

    def resample(self, grid: RadialGrid) -> RadialField:
        """Interpolate the field on another grid."""
        return RadialField(grid, values=self(grid.nodes))

    def __add__(self, other: RadialField) -> RadialField:
        self._check_same_grid(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: RadialField) -> RadialField:
        self._check_same_grid(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: Number) -> RadialField:
        return self.with_values(scalar * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> RadialField:
        return self.with_values(-self.values)

    def _check_same_grid(self, other: RadialField) -> None:
        if other.grid is not self.grid and other.grid != self.grid:
            msg = "Both fields must live on the same grid"
            raise InvalidParameterError(msg)

    @typecheck
    def to_csv(self, path: str | Path) -> None:
        """Write the field as ``r,value`` rows with 17 significant digits."""
        data = np.stack(
            [self.nodes.cpu().numpy(), self.values.detach().cpu().numpy()],
            axis=1,
        )
        np.savetxt(
            path,
            data,
            fmt="%.17g",
            delimiter=",",
            header="r,value",
            comments="",
        )

    @classmethod
    def from_csv(cls, path: str | Path, order: int = 8) -> RadialField:
        """Read a field written by `to_csv`, rebuilding the grid."""
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        grid = RadialGrid.from_nodes(data[:, 0], order=order)
        return cls(grid, values=data[:, 1])

    def __repr__(self) -> str:
        return f"RadialField({self.grid!r}, sup={self.sup:.6g})"
