"""Logarithmic kernel, its power approximations and their sphere averages."""

from __future__ import annotations

import logging
from functools import cache
from typing import Literal, NamedTuple

import numpy as np
import torch
from beartype import beartype
from scipy import special

from ..errors import InvalidParameterError, KernelDomainError
from ..input_validation import typecheck
from ..types import FloatTensor, Number, PositiveNumber
from ..utils import as_tensor

logger = logging.getLogger(__name__)

KernelKind = Literal["log", "power", "riesz"]


@beartype
class KernelSpec(NamedTuple):
    """Radial kernel k(|x - y|).

    Parameters
    ----------
    kind : str, default="log"
        "log" for log(1/t), "power" for the approximation
        G_mu(t) = (t^{-mu} - 1) / mu and "riesz" for t^{-mu}.
    mu : float, optional
        Parameter of the "power" kernel, in (0, 1], and exponent of the
        "riesz" kernel, positive.
    """

    kind: KernelKind = "log"
    mu: PositiveNumber | None = None

    @property
    def name(self) -> str:
        if self.kind == "log":
            return "log"
        return f"{self.kind}(mu={self.mu:g})"


def check_kernel(kernel: KernelSpec) -> None:
    """Validate the parameter of a kernel specification."""
    if kernel.kind == "log":
        return
    if kernel.mu is None:
        msg = f"The {kernel.kind} kernel needs a parameter mu"
        raise InvalidParameterError(msg)
    if kernel.kind == "power" and not 0 < kernel.mu <= 1:
        msg = f"The power kernel parameter must lie in (0, 1], got {kernel.mu}"
        raise InvalidParameterError(msg)


def _evaluate(kind: str, mu: float | None, t):
    """Kernel on positive distances, numpy or torch."""
    lib = torch if isinstance(t, torch.Tensor) else np
    log_t = lib.log(t)
    if kind == "log":
        return -log_t
    if kind == "riesz":
        return lib.exp(-mu * log_t)
    return lib.expm1(-mu * log_t) / mu


@typecheck
def kernel_eval(kernel: KernelSpec, t: FloatTensor | Number) -> FloatTensor:
    """Evaluate a kernel at positive distances.

    Raises
    ------
    KernelDomainError
        if some distance is not positive

    Examples
    --------
    >>> float(lcq.kernel_eval(lcq.KernelSpec("power", 1.0), 0.5))
    1.0
    >>> float(lcq.kernel_eval(lcq.KernelSpec("log"), 0.5))
    0.6931471805599453
    """
    check_kernel(kernel)
    t = as_tensor(t)
    if bool(torch.any(t <= 0)):
        msg = "Kernels are unbounded at distance 0, distances must be positive"
        raise KernelDomainError(msg)
    return _evaluate(kernel.kind, kernel.mu, t)


@cache
def _graded_angles(levels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule on [0, pi] graded geometrically towards 0."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.pi * 0.5 ** np.arange(levels + 1)
    edges = np.append(edges, 0.0)[::-1]
    a, b = edges[:-1, None], edges[1:, None]
    nodes = a + (b - a) * (x + 1) / 2
    weights = (b - a) * w / 2
    return nodes.ravel(), weights.ravel()


@cache
def _sphere_ratio(N: int) -> float:
    """int_0^pi sin^{N-2}."""
    return float(
        np.sqrt(np.pi) * special.gamma((N - 1) / 2) / special.gamma(N / 2)
    )


@typecheck
def angular_average(
    kernel: KernelSpec,
    r,
    rho,
    N: int,
    *,
    levels: int = 40,
    order: int = 16,
) -> np.ndarray:
    """Sphere average of k(|r theta - rho e|) over theta in S^{N-1}.

    The polar angle integral with weight sin^{N-2} is computed by
    Gauss-Legendre on the partition of [0, pi] by the points pi 2^{-j},
    j <= ``levels``, which resolves the integrable singularity at angle 0
    when r = rho.

    Parameters
    ----------
    kernel
        the kernel
    r, rho
        radii, numpy arrays broadcast against each other
    N
        dimension, N >= 2
    levels, order
        depth of the graded partition and order of the Gauss rules
    """
    check_kernel(kernel)
    if N < 2:
        msg = f"Angular averages need N >= 2, got {N}"
        raise InvalidParameterError(msg)
    r, rho = np.broadcast_arrays(
        np.asarray(r, dtype=np.float64), np.asarray(rho, dtype=np.float64)
    )
    theta, weights = _graded_angles(levels, order)
    weights = weights * np.sin(theta) ** (N - 2) / _sphere_ratio(N)
    distance2 = (
        (r[..., None] - rho[..., None]) ** 2
        + 4 * r[..., None] * rho[..., None] * np.sin(theta / 2) ** 2
    )
    distance = np.sqrt(distance2)
    values = _evaluate(kernel.kind, kernel.mu, distance)
    return (values * weights).sum(axis=-1)


def closed_form_available(kernel: KernelSpec, N: int) -> bool:
    """The log kernel has a closed sphere average in even dimension only."""
    return kernel.kind != "log" or N % 2 == 0


@typecheck
def angular_average_closed_form(
    kernel: KernelSpec, r, rho, N: int
) -> np.ndarray:
    """Sphere average through the hypergeometric representation.

    With m = min(r, rho) and M = max(r, rho), the average of |x - y|^{-mu}
    is M^{-mu} 2F1(mu/2, mu/2 - N/2 + 1; N/2; (m/M)^2). The power kernel
    follows by linearity and the log kernel by differentiation in mu at 0,
    which gives a finite sum when N is even.

    Raises
    ------
    InvalidParameterError
        for the log kernel in odd dimension
    """
    check_kernel(kernel)
    if not closed_form_available(kernel, N):
        msg = f"No closed form for the log kernel in odd dimension N={N}"
        raise InvalidParameterError(msg)
    r, rho = np.broadcast_arrays(
        np.asarray(r, dtype=np.float64), np.asarray(rho, dtype=np.float64)
    )
    M = np.maximum(r, rho)
    x = (np.minimum(r, rho) / M) ** 2
    if kernel.kind == "log":
        b, c = 1 - N / 2, N / 2
        total = -np.log(M)
        for k in range(1, N // 2):
            total = total + 0.5 * special.poch(b, k) * x**k / (
                special.poch(c, k) * k
            )
        return total
    mu = kernel.mu
    riesz = M ** (-mu) * special.hyp2f1(mu / 2, mu / 2 - N / 2 + 1, N / 2, x)
    if kernel.kind == "riesz":
        return riesz
    return (riesz - 1) / mu


def sphere_average(kernel: KernelSpec, r, rho, N: int) -> np.ndarray:
    """Closed form when available, graded quadrature otherwise."""
    if closed_form_available(kernel, N):
        return angular_average_closed_form(kernel, r, rho, N)
    return angular_average(kernel, r, rho, N)
