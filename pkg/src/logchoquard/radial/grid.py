"""Graded radial grids with per-segment Gauss-Legendre rules."""

from __future__ import annotations

import logging
from functools import cached_property
from math import ceil, log

import numpy as np
import torch

from ..constants import sphere_measure
from ..errors import InvalidParameterError
from ..input_validation import convert_inputs, typecheck
from ..types import (
    Float1dTensor,
    Float2dTensor,
    FloatScalar,
    FloatTensor,
    GridSpec,
    Int1dTensor,
    Number,
    float_dtype,
)

logger = logging.getLogger(__name__)


def _graded_nodes(spec: GridSpec) -> np.ndarray:
    """Uniform nodes on [0, 1] followed by a geometric tail up to r_max.

    The tail segments are h0 c q^k with h0 = 1/n_uniform, q the ratio and
    c <= 1 chosen so that the last node is exactly r_max.
    """
    h0 = 1.0 / spec.n_uniform
    uniform = np.linspace(0.0, 1.0, spec.n_uniform + 1)
    length = spec.r_max - 1.0
    q = spec.ratio
    n_tail = ceil(log(1 + length * (q - 1) / h0) / log(q))
    tail = h0 * q ** np.arange(n_tail)
    tail *= length / tail.sum()
    nodes = np.concatenate([uniform, 1.0 + np.cumsum(tail)])
    nodes[-1] = spec.r_max
    return nodes


def _snap_breakpoints(nodes: np.ndarray, breakpoints) -> np.ndarray:
    """Move the closest interior node onto each breakpoint."""
    nodes = nodes.copy()
    fixed = {0, len(nodes) - 1}
    for b in sorted(set(float(b) for b in breakpoints)):
        if not 0 < b < nodes[-1]:
            msg = f"Breakpoint {b} is outside the grid (0, {nodes[-1]})"
            raise InvalidParameterError(msg)
        i = int(np.argmin(np.abs(nodes - b)))
        if abs(nodes[i] - b) <= 1e-14 * max(1.0, b):
            nodes[i] = b
            fixed.add(i)
            continue
        if i in fixed:
            # the closest node is pinned, insert instead
            pos = int(np.searchsorted(nodes, b))
            nodes = np.insert(nodes, pos, b)
            fixed = {j + (j >= pos) for j in fixed} | {pos}
            continue
        nodes[i] = b
        fixed.add(i)
    return nodes


class RadialGrid:
    """Radial grid 0 = r_0 < r_1 < ... < r_M = r_max.

    Every segment carries the Gauss-Legendre rule of the same order. Fields
    living on the grid are piecewise linear and vanish beyond r_max.

    Parameters
    ----------
    spec
        parameters of the default graded grid (uniform on [0, 1], geometric
        on [1, r_max])
    nodes
        explicit nodes, used instead of ``spec`` (for refined grids)
    order
        order of the Gauss rule when ``nodes`` is given

    Examples
    --------
    >>> grid = lcq.RadialGrid(lcq.GridSpec(n_uniform=64, r_max=10.0))
    >>> float(grid.nodes[0]), float(grid.nodes[-1])
    (0.0, 10.0)
    """

    def __init__(
        self,
        spec: GridSpec | None = None,
        *,
        nodes: Float1dTensor | np.ndarray | None = None,
        order: int | None = None,
    ) -> None:
        if spec is not None and nodes is not None:
            msg = "Pass either a grid specification or explicit nodes"
            raise InvalidParameterError(msg)

        if nodes is None:
            spec = spec if spec is not None else GridSpec()
            array = _snap_breakpoints(_graded_nodes(spec), spec.breakpoints)
            order = spec.order
        else:
            if isinstance(nodes, torch.Tensor):
                nodes = nodes.detach().cpu()
            array = np.asarray(nodes, dtype=np.float64)
            order = 8 if order is None else order

        if array[0] != 0.0:
            msg = f"The first node must be 0, got {array[0]}"
            raise InvalidParameterError(msg)
        if np.any(np.diff(array) <= 0):
            msg = "The nodes must be strictly increasing"
            raise InvalidParameterError(msg)

        self.nodes = torch.as_tensor(array, dtype=float_dtype)
        self.order = int(order)
        self.r_max = float(array[-1])
        logger.debug(
            "Radial grid with %d segments on [0, %g], Gauss order %d",
            self.n_segments,
            self.r_max,
            self.order,
        )

    @classmethod
    def from_nodes(cls, nodes, order: int = 8) -> RadialGrid:
        return cls(nodes=nodes, order=order)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_segments(self) -> int:
        return len(self.nodes) - 1

    @cached_property
    def lengths(self) -> Float1dTensor:
        """Segment lengths."""
        return self.nodes[1:] - self.nodes[:-1]

    @property
    def max_length(self) -> float:
        return float(self.lengths.max())

    @cached_property
    def _rule(self) -> tuple[Float1dTensor, Float1dTensor]:
        x, w = np.polynomial.legendre.leggauss(self.order)
        xi = torch.as_tensor((x + 1) / 2, dtype=float_dtype)
        weights = torch.as_tensor(w / 2, dtype=float_dtype)
        return xi, weights

    @property
    def xi(self) -> Float1dTensor:
        """Gauss points of the reference segment [0, 1]."""
        return self._rule[0]

    @property
    def xi_weights(self) -> Float1dTensor:
        """Gauss weights of the reference segment [0, 1] (sum to 1)."""
        return self._rule[1]

    @cached_property
    def points(self) -> Float2dTensor:
        """Gauss points, shape (n_segments, order)."""
        return self.nodes[:-1, None] + self.lengths[:, None] * self.xi[None, :]

    @cached_property
    def weights(self) -> Float2dTensor:
        """Gauss weights in dr, shape (n_segments, order)."""
        return self.lengths[:, None] * self.xi_weights[None, :]

    def measure(self, N: int) -> Float2dTensor:
        """Weights of N omega_N r^{N-1} dr at the Gauss points."""
        return sphere_measure(N) * self.points ** (N - 1) * self.weights

    def at_points(self, values: FloatTensor) -> FloatTensor:
        """Piecewise-linear interpolation of nodal values at Gauss points.

        ``values`` has the nodes on its last dimension; the result has shape
        (..., n_segments, order).
        """
        left = values[..., :-1, None]
        right = values[..., 1:, None]
        return left + (right - left) * self.xi

    def integrate(self, integrand: FloatTensor, N: int) -> FloatScalar:
        """Integrate values given at the Gauss points against r^{N-1} dr."""
        return (integrand * self.measure(N)).sum(dim=(-2, -1))

    def inner(self, a: FloatTensor, b: FloatTensor, N: int) -> FloatScalar:
        """L^2 inner product of two nodal fields in dimension N."""
        return self.integrate(self.at_points(a) * self.at_points(b), N)

    @convert_inputs
    @typecheck
    def locate(self, r: Float1dTensor) -> tuple[Int1dTensor, Float1dTensor]:
        """Segment index and local coordinate in [0, 1] of radii in [0, r_max].

        Radii beyond r_max are located at the end of the last segment.
        """
        r = torch.clamp(r, 0.0, self.r_max)
        index = torch.searchsorted(self.nodes, r, right=True) - 1
        index = torch.clamp(index, 0, self.n_segments - 1)
        local = (r - self.nodes[index]) / self.lengths[index]
        return index, local

    def interpolate(
        self, values: FloatTensor, r: Float1dTensor
    ) -> FloatTensor:
        """Evaluate the piecewise-linear field at arbitrary radii.

        The field vanishes beyond r_max.
        """
        r = torch.as_tensor(r, dtype=float_dtype)
        index, local = self.locate(r)
        out = (1 - local) * values[..., index] + local * values[..., index + 1]
        return torch.where(r <= self.r_max, out, torch.zeros_like(out))

    @typecheck
    def has_node(self, r: Number, rtol: Number = 1e-12) -> bool:
        """True if r is a node (relative tolerance ``rtol``)."""
        gap = torch.min(torch.abs(self.nodes - r))
        return bool(gap <= rtol * max(1.0, abs(r)))

    @typecheck
    def node_index(self, r: Number) -> int:
        """Index of the node closest to r."""
        return int(torch.argmin(torch.abs(self.nodes - r)))

    def refine(self) -> RadialGrid:
        """Grid with every segment halved."""
        mid = (self.nodes[:-1] + self.nodes[1:]) / 2
        nodes = torch.stack([self.nodes[:-1], mid], dim=1).reshape(-1)
        nodes = torch.cat([nodes, self.nodes[-1:]])
        return RadialGrid(nodes=nodes, order=self.order)

    @typecheck
    def hat(self, i: int) -> Float1dTensor:
        """Nodal values of the i-th hat function."""
        values = torch.zeros(self.n_nodes, dtype=float_dtype)
        values[i] = 1.0
        return values

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RadialGrid):
            return NotImplemented
        return self.order == other.order and torch.equal(
            self.nodes, other.nodes
        )

    def __hash__(self) -> int:
        return hash((self.order, self.n_nodes, self.r_max))

    def __repr__(self) -> str:
        return (
            f"RadialGrid(n_segments={self.n_segments}, r_max={self.r_max},"
            + f" order={self.order})"
        )
