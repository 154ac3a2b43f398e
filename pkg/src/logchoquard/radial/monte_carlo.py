"""Monte-Carlo oracles for the ambient 2N-dimensional integrals.

These estimators never use the radial reduction: points are sampled in R^N
and the radial fields are evaluated at their Euclidean norms. They are slow
and only meant to cross-check the quadratures.
"""

import logging
from collections.abc import Callable
from typing import NamedTuple

import numpy as np

from ..constants import sphere_measure, unit_ball_volume
from ..errors import InvalidParameterError
from ..input_validation import typecheck
from ..types import Number
from .field import RadialField

logger = logging.getLogger(__name__)


class MonteCarloEstimate(NamedTuple):
    """Estimate, standard error and sampling parameters."""

    value: float
    stderr: float
    n_samples: int
    seed: int


def _support_radius(u: RadialField) -> float:
    values = u.values.detach().cpu().numpy()
    nonzero = np.flatnonzero(values != 0)
    if len(nonzero) == 0:
        return 0.0
    last = min(nonzero[-1] + 1, len(values) - 1)
    return float(u.nodes[last])


def _evaluator(u: RadialField) -> Callable:
    nodes = u.nodes.cpu().numpy()
    values = u.values.detach().cpu().numpy()

    def evaluate(r):
        return np.interp(r, nodes, values, right=0.0)

    return evaluate


def _uniform_ball(rng, n: int, N: int, radius: float) -> np.ndarray:
    direction = rng.standard_normal((n, N))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    return radius * rng.random(n)[:, None] ** (1 / N) * direction


def _chunks(n_samples: int, chunk: int):
    done = 0
    while done < n_samples:
        size = min(chunk, n_samples - done)
        yield size
        done += size


@typecheck
def gagliardo_monte_carlo(
    u: RadialField,
    s: Number,
    N: int,
    *,
    n_samples: int = 10**7,
    seed: int = 0,
    chunk: int = 10**6,
    center: Number = 0.0,
) -> MonteCarloEstimate:
    """Monte-Carlo estimate of int int |u(x) - u(y)|^{N/s} |x - y|^{-2N}.

    The first point is uniform in the ball B containing the support of u,
    and the increment z = y - x has the radial density proportional to
    rho^{N/s - N - 1} on [0, 2S] and to rho^{-N-1} beyond, S being the radius
    of B. The importance weights are then bounded near the diagonal and at
    infinity. Pairs with both points in B are sampled once for two orderings
    and get weight 1, the others weight 2.

    Parameters
    ----------
    u
        the radial profile
    s, N
        order and dimension
    n_samples
        number of sample pairs
    seed
        seed of the numpy generator
    chunk
        number of pairs drawn at once
    center
        the profile is centered at (center, 0, ..., 0)

    Returns
    -------
    MonteCarloEstimate
        the estimate and its standard error
    """
    p = N / s
    kappa = p - N
    if kappa <= 0:
        msg = f"N/s - N must be positive, got {kappa}"
        raise InvalidParameterError(msg)
    if _support_radius(u) == 0:
        return MonteCarloEstimate(0.0, 0.0, n_samples, seed)
    S = _support_radius(u) + abs(center)
    evaluate = _evaluator(u)
    rng = np.random.default_rng(seed)
    shift = np.zeros(N)
    shift[0] = center
    cut = 2 * S
    volume = unit_ball_volume(N) * S**N
    surface = sphere_measure(N)

    total = 0.0
    total_sq = 0.0
    for size in _chunks(n_samples, chunk):
        x = _uniform_ball(rng, size, N, S)
        inner = rng.random(size) < 0.5
        uniform = rng.random(size)
        rho = np.where(
            inner,
            cut * uniform ** (1 / kappa),
            cut * (1 - uniform) ** (-1 / N),
        )
        density = np.where(
            rho <= cut,
            0.5 * kappa * rho ** (kappa - 1) / cut**kappa,
            0.5 * N * cut**N * rho ** (-N - 1),
        ) / (surface * rho ** (N - 1))
        direction = rng.standard_normal((size, N))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        y = x + rho[:, None] * direction

        ux = evaluate(np.linalg.norm(x - shift, axis=1))
        uy = evaluate(np.linalg.norm(y - shift, axis=1))
        both_inside = np.linalg.norm(y, axis=1) < S
        weight = np.where(both_inside, 1.0, 2.0)
        sample = (
            volume * weight * np.abs(ux - uy) ** p * rho ** (-2 * N) / density
        )
        total += sample.sum()
        total_sq += (sample**2).sum()
    mean = total / n_samples
    variance = max(total_sq / n_samples - mean**2, 0.0)
    stderr = (variance / n_samples) ** 0.5
    logger.debug("Monte-Carlo seminorm %.6g +- %.2g", mean, stderr)
    return MonteCarloEstimate(mean, stderr, n_samples, seed)


@typecheck
def convolution_monte_carlo(
    g: RadialField,
    kernel: Callable,
    N: int,
    *,
    n_samples: int = 10**7,
    seed: int = 0,
    chunk: int = 10**6,
) -> MonteCarloEstimate:
    """Monte-Carlo estimate of int int k(|x - y|) g(x) g(y) dx dy.

    Both points are uniform in the ball containing the support of g.
    ``kernel`` maps a numpy array of distances to kernel values.
    """
    S = _support_radius(g)
    if S == 0:
        return MonteCarloEstimate(0.0, 0.0, n_samples, seed)
    evaluate = _evaluator(g)
    rng = np.random.default_rng(seed)
    volume = unit_ball_volume(N) * S**N

    total = 0.0
    total_sq = 0.0
    for size in _chunks(n_samples, chunk):
        x = _uniform_ball(rng, size, N, S)
        y = _uniform_ball(rng, size, N, S)
        distance = np.linalg.norm(x - y, axis=1)
        gx = evaluate(np.linalg.norm(x, axis=1))
        gy = evaluate(np.linalg.norm(y, axis=1))
        sample = volume**2 * np.asarray(kernel(distance)) * gx * gy
        total += sample.sum()
        total_sq += (sample**2).sum()

    mean = total / n_samples
    variance = max(total_sq / n_samples - mean**2, 0.0)
    stderr = (variance / n_samples) ** 0.5
    return MonteCarloEstimate(mean, stderr, n_samples, seed)
