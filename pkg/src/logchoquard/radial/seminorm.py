"""Quadrature of the radial Gagliardo double integral.

For a radial u vanishing beyond r_max, the seminorm with exponent p = N/s is

    [u]^p = int_0^inf int_0^inf |u(r) - u(t)|^p K(r, t) dr dt,
    K(r, t) = (N omega_N)^2 r^{N-1} t^{N-1} (r^2 + t^2) / |r^2 - t^2|^{N+1}.

The square [0, r_max]^2 is split into cells (segment x segment):

- far cells (|i - j| > 1) use the tensor Gauss rule of the grid;
- diagonal cells are exact in u (u is linear on a segment) and reduce to a
  geometric constant times |slope|^p, integrated after the substitution
  h = (r - a) xi^{1/(p-N)} that absorbs the |r - t|^{p-N-1} singularity;
- adjacent cells are split at their common node, the square of side
  min(H_i, H_{i+1}) is integrated on two triangles with the substitution
  x = L xi^{1/(p-N+1)}, and the remaining strip with the tensor rule;
- pairs with one point beyond r_max use the closed form
  int_R^inf K(r, t) dt = (N omega_N)^2 r^{N-1} R^N / (N (R^2 - r^2)^N).
"""

from __future__ import annotations

import logging
from functools import lru_cache

import numpy as np
import torch

from ..constants import sphere_measure
from ..errors import InvalidExponentError
from ..types import FloatScalar, FloatTensor, float_dtype
from .grid import RadialGrid

logger = logging.getLogger(__name__)


def kernel_regular_part(r, t, N: int):
    """|r - t|^{N+1} K(r, t), smooth on the diagonal."""
    S2 = sphere_measure(N) ** 2
    return S2 * (r * t) ** (N - 1) * (r**2 + t**2) / (r + t) ** (N + 1)


def radial_kernel(r, t, N: int):
    """Radial reduction K(r, t) of the kernel |x - y|^{-2N}."""
    return kernel_regular_part(r, t, N) / np.abs(r - t) ** (N + 1)


def exterior_kernel(r, R: float, N: int):
    """int_R^inf K(r, t) dt for r < R."""
    S2 = sphere_measure(N) ** 2
    return S2 * r ** (N - 1) * R**N / (N * (R**2 - r**2) ** N)


def _gauss01(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1) / 2, w / 2


class SeminormQuadrature:
    """Precomputed weights of the Gagliardo double integral on a grid.

    Parameters
    ----------
    grid
        the radial grid
    N
        dimension
    s
        fractional order, the exponent is p = N/s

    Raises
    ------
    InvalidExponentError
        if p - N <= 0 (the near-diagonal singularity is not integrable)
    """

    def __init__(self, grid: RadialGrid, N: int, s: float) -> None:
        p = N / s
        if p - N <= 0:
            msg = f"Singular exponent: N/s - N = {p - N} must be positive"
            raise InvalidExponentError(msg)
        self.grid = grid
        self.N = N
        self.s = s
        self.p = p

        nodes = grid.nodes.cpu().numpy()
        lengths = np.diff(nodes)
        xi, w = _gauss01(grid.order)
        points = nodes[:-1, None] + lengths[:, None] * xi
        weights = lengths[:, None] * w

        self.far_weights = self._far(points, weights)
        self.diagonal_weights = torch.as_tensor(
            self._diagonal(nodes), dtype=float_dtype
        )
        (
            self.pair_r,
            self.pair_t,
            self.pair_weights,
        ) = self._adjacent(nodes, lengths)
        self.pair_locations = (
            grid.locate(self.pair_r),
            grid.locate(self.pair_t),
        )
        R = grid.r_max
        self.exterior_weights = torch.as_tensor(
            2 * exterior_kernel(points, R, N) * weights, dtype=float_dtype
        )
        logger.debug(
            "Seminorm quadrature: %d far points, %d adjacent pairs",
            points.size,
            len(self.pair_weights),
        )

    def _far(self, points: np.ndarray, weights: np.ndarray) -> torch.Tensor:
        M, n = points.shape
        r = points.reshape(-1)
        w = weights.reshape(-1)
        segment = np.repeat(np.arange(M), n)
        near = np.abs(segment[:, None] - segment[None, :]) <= 1
        with np.errstate(divide="ignore", invalid="ignore"):
            K = radial_kernel(r[:, None], r[None, :], self.N)
        K = np.where(near, 0.0, K)
        return torch.as_tensor(w[:, None] * w[None, :] * K, dtype=float_dtype)

    def _diagonal(self, nodes: np.ndarray) -> np.ndarray:
        """Geometric factor D_i with cell integral D_i |slope_i|^p."""
        N, p = self.N, self.p
        m = 1 / (p - N)
        xr, wr = _gauss01(2 * self.grid.order)
        xh, wh = _gauss01(2 * self.grid.order)
        a = nodes[:-1, None, None]
        r = a + np.diff(nodes)[:, None, None] * xr[None, :, None]
        wr = np.diff(nodes)[:, None] * wr[None, :]
        h = (r - a) * xh[None, None, :] ** m
        inner = m * (r - a) ** (p - N) * kernel_regular_part(r, r - h, N)
        return 2 * np.einsum("ikl,ik,l->i", inner, wr, wh)

    def _adjacent(self, nodes: np.ndarray, lengths: np.ndarray):
        """Pairs (r, t) and weights for the cells (i, i + 1), both orders."""
        N, p = self.N, self.p
        kappa = p - N + 1
        xi, w = _gauss01(self.grid.order)
        eta, v = xi, w

        r_list, t_list, w_list = [], [], []
        for i in range(len(lengths) - 1):
            c = nodes[i + 1]
            L = min(lengths[i], lengths[i + 1])
            x = L * xi ** (1 / kappa)
            jac = (L / kappa) * xi ** (1 / kappa - 1) * w
            # triangle y <= x, y = x eta
            X, E = np.meshgrid(x, eta, indexing="ij")
            J = np.outer(jac, v) * X
            for r, t in ((c - X, c + X * E), (c - X * E, c + X)):
                r_list.append(r.ravel())
                t_list.append(t.ravel())
                w_list.append((J * radial_kernel(r, t, N)).ravel())
            # remaining strip with the tensor rule
            if lengths[i] > L:
                lo, hi = nodes[i], c - L
                tlo, thi = c, c + L
            elif lengths[i + 1] > L:
                lo, hi = c - L, c
                tlo, thi = c + L, nodes[i + 2]
            else:
                continue
            R_, T_ = np.meshgrid(
                lo + (hi - lo) * xi, tlo + (thi - tlo) * xi, indexing="ij"
            )
            W_ = np.outer((hi - lo) * w, (thi - tlo) * w)
            r_list.append(R_.ravel())
            t_list.append(T_.ravel())
            w_list.append((W_ * radial_kernel(R_, T_, N)).ravel())

        if not r_list:
            empty = torch.zeros(0, dtype=float_dtype)
            return empty, empty, empty
        r = np.concatenate(r_list)
        t = np.concatenate(t_list)
        weights = 2 * np.concatenate(w_list)
        return (
            torch.as_tensor(r, dtype=float_dtype),
            torch.as_tensor(t, dtype=float_dtype),
            torch.as_tensor(weights, dtype=float_dtype),
        )

    def parts(self, values: FloatTensor) -> dict[str, FloatScalar]:
        """Contributions of the far, diagonal, adjacent and exterior pairs.

        ``values`` holds the nodal values of one field. The far part builds
        the dense matrix of pairwise differences at the Gauss points.
        """
        p = self.p
        U = self.grid.at_points(values).flatten(start_dim=-2)
        diff = (U[..., :, None] - U[..., None, :]).abs() ** p
        far = (self.far_weights * diff).sum(dim=(-2, -1))

        slopes = (values[..., 1:] - values[..., :-1]) / self.grid.lengths
        diagonal = (self.diagonal_weights * slopes.abs() ** p).sum(dim=-1)

        (ir, lr), (it, lt) = self.pair_locations
        ur = (1 - lr) * values[..., ir] + lr * values[..., ir + 1]
        ut = (1 - lt) * values[..., it] + lt * values[..., it + 1]
        adjacent = (self.pair_weights * (ur - ut).abs() ** p).sum(dim=-1)

        U2 = self.grid.at_points(values).abs() ** p
        exterior = (self.exterior_weights * U2).sum(dim=(-2, -1))
        return {
            "far": far,
            "diagonal": diagonal,
            "adjacent": adjacent,
            "exterior": exterior,
        }

    def __call__(self, values: FloatTensor) -> FloatScalar:
        """[u]^{N/s} of the piecewise-linear field with these nodal values."""
        parts = self.parts(values)
        return (
            parts["far"]
            + parts["diagonal"]
            + parts["adjacent"]
            + parts["exterior"]
        )


@lru_cache(maxsize=16)
def seminorm_quadrature(
    grid: RadialGrid, N: int, s: float
) -> SeminormQuadrature:
    """Cached `SeminormQuadrature` for a grid and a parameter pair."""
    logger.info(
        "Assembling seminorm quadrature for N=%d, s=%g on %r", N, s, grid
    )
    return SeminormQuadrature(grid, N, float(s))


