"""Convolution of radial fields with radial kernels.

For a radial g and a radial kernel k,

    (k * g)(r) = int_0^inf A_k(r, rho) g(rho) N omega_N rho^{N-1} d rho,

where A_k(r, rho) is the average of k(|r theta - rho e|) over the unit
sphere. The integral is discretized as a collocation matrix acting on the
nodal values of g: far segments use the Gauss rule of the grid, segments
close to the output radius are integrated with a rule graded towards the
closest point, which resolves the integrable singularity of A_k at
rho = r.
"""

from __future__ import annotations

import logging
from functools import lru_cache

import numpy as np
import torch

from ..constants import sphere_measure
from ..errors import NonpositiveFieldError, TailDivergenceError
from ..input_validation import convert_inputs, typecheck
from ..radial import RadialField, RadialGrid, tail_bound
from ..types import Float1dTensor, FloatTensor, float_dtype
from .functions import KernelSpec, check_kernel, sphere_average
from .linear_operator import LinearOperator

logger = logging.getLogger(__name__)

# grading of the near-field rule: ratio and number of levels
GRADING_RATIO = 0.25
GRADING_LEVELS = 12
# number of output radii assembled at once
BLOCK = 128


def _graded_piece(
    c: float, d: float, toward_left: bool, order: int
) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule on [c, d] graded geometrically towards one end."""
    x, w = np.polynomial.legendre.leggauss(order)
    length = d - c
    edges = length * GRADING_RATIO ** np.arange(GRADING_LEVELS + 1)
    edges = np.append(edges, 0.0)
    hi, lo = edges[:-1, None], edges[1:, None]
    delta = (lo + (hi - lo) * (x + 1) / 2).ravel()
    weights = ((hi - lo) * w / 2).ravel()
    points = c + delta if toward_left else d - delta
    return points, weights


def _near_rule(a: float, b: float, r: float, order: int):
    """Graded rule on the segment [a, b] for the output radius r."""
    tol = 1e-13 * max(1.0, abs(r))
    if r <= a + tol or r >= b - tol:
        toward_left = abs(r - a) <= abs(r - b)
        return _graded_piece(a, b, toward_left, order)
    left = _graded_piece(a, r, False, order)
    right = _graded_piece(r, b, True, order)
    return (
        np.concatenate([left[0], right[0]]),
        np.concatenate([left[1], right[1]]),
    )


class ConvolutionOperator:
    """Collocation matrix of g -> k * g at given radii.

    The operator acts on the nodal values of piecewise-linear fields of
    ``grid`` (extended by zero beyond r_max) and returns the convolution at
    ``radii``, which may lie anywhere in [0, inf).

    Parameters
    ----------
    grid
        the radial grid of the inputs
    kernel
        the kernel
    N
        dimension
    radii
        output radii, the grid nodes by default

    Examples
    --------
    >>> grid = lcq.RadialGrid(lcq.GridSpec(n_uniform=32, r_max=4.0))
    >>> conv = lcq.ConvolutionOperator(grid, lcq.KernelSpec("log"), 2,
    ...                                radii=torch.tensor([5.0]))
    >>> conv.shape[0]
    1
    """

    @convert_inputs
    @typecheck
    def __init__(
        self,
        grid: RadialGrid,
        kernel: KernelSpec,
        N: int,
        *,
        radii: Float1dTensor | None = None,
    ) -> None:
        check_kernel(kernel)
        self.grid = grid
        self.kernel = kernel
        self.N = N
        self.radii = grid.nodes.clone() if radii is None else radii
        matrix = self._assemble()
        self.operator = LinearOperator(
            torch.as_tensor(matrix, dtype=float_dtype)
        )

    def _assemble(self) -> np.ndarray:
        grid, N, kernel = self.grid, self.N, self.kernel
        nodes = grid.nodes.cpu().numpy()
        points = grid.points.cpu().numpy()
        xi = grid.xi.cpu().numpy()
        source = grid.measure(N).cpu().numpy()
        radii = self.radii.cpu().numpy()
        S = sphere_measure(N)
        n_out = len(radii)

        left = np.empty((n_out, grid.n_segments))
        right = np.empty((n_out, grid.n_segments))
        for start in range(0, n_out, BLOCK):
            block = radii[start : start + BLOCK]
            average = sphere_average(
                kernel, block[:, None, None], points[None], N
            )
            weighted = average * source[None]
            left[start : start + BLOCK] = weighted @ (1 - xi)
            right[start : start + BLOCK] = weighted @ xi

        # near field
        for k, r in enumerate(radii):
            distance = np.maximum(nodes[:-1] - r, r - nodes[1:])
            near = np.flatnonzero(distance <= np.diff(nodes))
            for m in near:
                a, b = nodes[m], nodes[m + 1]
                rho, w = _near_rule(a, b, r, grid.order)
                average = sphere_average(kernel, r, rho, N)
                weighted = average * S * rho ** (N - 1) * w
                local = (rho - a) / (b - a)
                left[k, m] = np.sum(weighted * (1 - local))
                right[k, m] = np.sum(weighted * local)

        matrix = np.zeros((n_out, grid.n_nodes))
        matrix[:, :-1] += left
        matrix[:, 1:] += right
        logger.debug(
            "Assembled %s convolution at %d radii on %r",
            kernel.name,
            n_out,
            grid,
        )
        return matrix

    @property
    def matrix(self) -> torch.Tensor:
        return self.operator.matrix

    @property
    def shape(self) -> torch.Size:
        return self.operator.shape

    def __matmul__(self, values: FloatTensor) -> FloatTensor:
        return self.operator @ values

    def __call__(self, g: RadialField | FloatTensor) -> FloatTensor:
        """Convolution at the output radii (differentiable in the values)."""
        values = g.values if isinstance(g, RadialField) else g
        return self.operator @ values

    def at(self, radii: Float1dTensor) -> ConvolutionOperator:
        """Same convolution evaluated at other radii."""
        return ConvolutionOperator(self.grid, self.kernel, self.N, radii=radii)

    def weighted(self) -> LinearOperator:
        """Operator scaled by the output quadrature weights.

        Only defined when the outputs are the Gauss points of the grid, in
        row-major order; then ``F_points @ (weighted() @ F)`` is the double
        integral int int k(|x - y|) F(x) F(y) dx dy.
        """
        return LinearOperator(
            self.matrix, output_scaling=self.grid.measure(self.N).reshape(-1)
        )


@lru_cache(maxsize=32)
def convolution_operator(
    grid: RadialGrid, kernel: KernelSpec, N: int, outputs: str = "nodes"
) -> ConvolutionOperator:
    """Cached `ConvolutionOperator` with outputs at the nodes or the points."""
    radii = grid.nodes if outputs == "nodes" else grid.points.reshape(-1)
    logger.info(
        "Assembling the %s convolution (%s) on %r", kernel.name, outputs, grid
    )
    return ConvolutionOperator(grid, kernel, N, radii=radii)


@typecheck
def radial_convolution(
    kernel: KernelSpec, g: RadialField, N: int
) -> RadialField:
    """Convolution k * g of a nonnegative radial field, at the grid nodes.

    Raises
    ------
    NonpositiveFieldError
        if g takes negative values
    TailDivergenceError
        if the power decay fitted on the last decade of g is not integrable
        against r^{N-1}

    Examples
    --------
    >>> grid = lcq.RadialGrid(lcq.GridSpec(n_uniform=32, r_max=4.0))
    >>> g = lcq.RadialField(grid, values=torch.zeros(grid.n_nodes,
    ...                                              dtype=torch.float64))
    >>> float(lcq.radial_convolution(lcq.KernelSpec("log"), g, 2).sup)
    0.0
    """
    if float(g.values.min()) < 0:
        msg = "The convolution input must be nonnegative"
        raise NonpositiveFieldError(msg)
    tail = tail_bound(g, 1, N)
    if tail.lp_tail == float("inf"):
        msg = (
            f"The input decays like r^(-{tail.exponent:.3g}), which is not"
            + f" integrable in dimension {N}"
        )
        raise TailDivergenceError(msg)
    operator = convolution_operator(g.grid, kernel, N)
    return RadialField(g.grid, values=operator(g))
