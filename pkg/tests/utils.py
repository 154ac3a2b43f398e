"""Utils for the tests."""

import torch

import logchoquard as lcq

# N = 2, s = 1/2, tau = 1/4: the planar envelope used throughout the tests
PLANAR = {"N": 2, "s": 0.5, "tau": 0.25}


def planar_params(**kwargs) -> lcq.ProblemParams:
    """Planar parameters, with optional overrides."""
    return lcq.ProblemParams(**(PLANAR | kwargs))


def small_grid(
    n_uniform: int = 16,
    r_max: float = 4.0,
    *,
    order: int = 4,
    breakpoints: tuple = (1 / 8, 1 / 4),
) -> lcq.RadialGrid:
    """Coarse graded grid, cheap enough for dense quadratures."""
    spec = lcq.GridSpec(
        n_uniform=n_uniform,
        r_max=r_max,
        ratio=1.2,
        order=order,
        breakpoints=breakpoints,
    )
    return lcq.RadialGrid(spec)


def planar_nonlinearity(lam: float = 1.0, q: float = 10.0):
    """Model nonlinearity of the planar envelope."""
    return lcq.make_model_nonlinearity(2, 0.5, lam=lam, alpha=1.0, q=q)


def zeros(grid: lcq.RadialGrid) -> torch.Tensor:
    return torch.zeros(grid.n_nodes, dtype=lcq.float_dtype)


MINIMAL_CONFIG = """\
[problem]
N = 2
s = 0.5
tau = 0.25
"""

# the solver is disabled so that only the cheap stages run
QUICK_CONFIG = """\
seed = 3

[problem]
N = 2
s = 0.5
tau = 0.25

[grid]
n-uniform = 32
r-max = 8.0
ratio = 1.2
order = 4

[solver]
enabled = false
"""
