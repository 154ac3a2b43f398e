"""Tests for the kernels, their sphere averages and the convolutions."""

import numpy as np
import pytest
import torch

import logchoquard as lcq
from logchoquard.errors import (
    InputTypeError,
    InvalidExponentError,
    InvalidParameterError,
    KernelDomainError,
    NonpositiveFieldError,
    TailDivergenceError,
)

from .utils import small_grid, zeros


def test_kernel_eval():
    log = lcq.KernelSpec("log")
    power = lcq.KernelSpec("power", 0.5)
    t = torch.tensor([0.25, 1.0, 4.0], dtype=torch.float64)
    assert torch.allclose(lcq.kernel_eval(log, t), -torch.log(t))
    assert torch.allclose(
        lcq.kernel_eval(power, t),
        torch.tensor([2.0, 0.0, -1.0], dtype=torch.float64),
    )
    riesz = lcq.kernel_eval(lcq.KernelSpec("riesz", 2.0), t)
    assert torch.allclose(riesz, t**-2)
    assert log.name == "log"
    assert power.name == "power(mu=0.5)"

    with pytest.raises(KernelDomainError):
        lcq.kernel_eval(log, torch.tensor([0.0, 1.0], dtype=torch.float64))


def test_kernel_spec_errors():
    with pytest.raises(InvalidParameterError, match="needs a parameter"):
        lcq.kernel_eval(lcq.KernelSpec("power"), 1.0)
    with pytest.raises(InvalidParameterError, match="in \\(0, 1\\]"):
        lcq.kernel_eval(lcq.KernelSpec("power", 2.0), 1.0)
    with pytest.raises(InputTypeError):
        lcq.KernelSpec("riesz", -1.0)
    with pytest.raises(InputTypeError):
        lcq.KernelSpec("gauss")


def test_power_kernel_tends_to_log():
    """G_mu -> log(1/t) locally uniformly, at rate mu."""
    convergence = lcq.kernel_convergence_order()
    assert convergence.order > 0.9
    assert convergence.record().passed
    assert list(convergence.sup_distances) == sorted(
        convergence.sup_distances, reverse=True
    )


def test_sphere_average_newton():
    """Averages of harmonic kernels over spheres."""
    r = np.array([0.5, 1.0, 2.0])
    rho = np.array([2.0, 1.0, 0.5])
    planar = lcq.angular_average_closed_form(lcq.KernelSpec("log"), r, rho, 2)
    assert np.allclose(planar, -np.log(np.maximum(r, rho)))
    spatial = lcq.angular_average_closed_form(
        lcq.KernelSpec("riesz", 1.0), r, rho, 3
    )
    assert np.allclose(spatial, 1 / np.maximum(r, rho))


@pytest.mark.parametrize(
    ("kind", "mu", "N"),
    [("log", None, 2), ("log", None, 4), ("power", 0.5, 2), ("power", 1.0, 3)],
)
def test_sphere_average_quadrature(kind, mu, N):
    """The graded quadrature agrees with the closed forms."""
    kernel = lcq.KernelSpec(kind, mu)
    r = np.array([0.7, 1.0, 3.0])
    rho = np.array([1.1, 0.4, 1.0])
    closed = lcq.angular_average_closed_form(kernel, r, rho, N)
    quadrature = lcq.angular_average(kernel, r, rho, N)
    assert np.allclose(quadrature, closed, rtol=1e-10, atol=1e-12)


def test_sphere_average_singular():
    """The log singularity at r = rho is integrable and resolved."""
    kernel = lcq.KernelSpec("log")
    value = lcq.angular_average(kernel, 1.0, 1.0, 2)
    assert float(value) == pytest.approx(0.0, abs=1e-8)


def test_sphere_average_odd_dimension():
    kernel = lcq.KernelSpec("log")
    with pytest.raises(InvalidParameterError, match="odd dimension"):
        lcq.angular_average_closed_form(kernel, 1.0, 2.0, 3)
    r, rho = np.array([0.5, 2.0]), np.array([1.5, 0.3])
    assert np.array_equal(
        lcq.sphere_average(kernel, r, rho, 3),
        lcq.angular_average(kernel, r, rho, 3),
    )


@pytest.mark.parametrize(
    ("kernel", "N", "factor"),
    [
        (lcq.KernelSpec("log"), 2, -np.log(5.0)),
        (lcq.KernelSpec("riesz", 1.0), 3, 1 / 5),
    ],
)
def test_convolution_beyond_support(kernel, N, factor):
    """Beyond the support the sphere average is constant in rho."""
    grid = small_grid()
    g = lcq.bump_field(grid, radius=1.0)
    mass = float(grid.integrate(g.at_points(), N))
    radii = torch.tensor([5.0], dtype=torch.float64)
    conv = lcq.ConvolutionOperator(grid, kernel, N, radii=radii)
    assert conv.shape == (1, grid.n_nodes)
    assert float(conv(g)[0]) == pytest.approx(factor * mass, rel=1e-12)

    at_nodes = lcq.convolution_operator(grid, kernel, N)
    assert at_nodes.at(radii).matrix.shape == conv.matrix.shape


def test_convolution_at_origin():
    """(log(1/|.|) * g)(0) for g = (1 - r^2)^2_+ in the plane is 11 pi/36."""
    g = lcq.bump_field(small_grid(r_max=16.0), radius=1.0)
    convolved = lcq.radial_convolution(lcq.KernelSpec("log"), g, 2)
    assert isinstance(convolved, lcq.RadialField)
    assert float(convolved.values[0]) == pytest.approx(
        11 * np.pi / 36, rel=1e-2
    )


def test_convolution_is_linear():
    grid = small_grid()
    g = lcq.bump_field(grid, radius=1.0)
    h = lcq.bump_field(grid, radius=2.0, height=0.5)
    operator = lcq.convolution_operator(grid, lcq.KernelSpec("power", 0.5), 2)
    assert torch.allclose(operator(g + h), operator(g) + operator(h))
    # cached per grid, kernel and dimension
    assert (
        lcq.convolution_operator(grid, lcq.KernelSpec("power", 0.5), 2)
        is operator
    )


def test_radial_convolution_errors():
    grid = small_grid()
    zero = lcq.RadialField(grid, values=zeros(grid))
    assert lcq.radial_convolution(lcq.KernelSpec("log"), zero, 2).sup == 0.0
    with pytest.raises(NonpositiveFieldError):
        lcq.radial_convolution(
            lcq.KernelSpec("log"), -lcq.bump_field(grid), 2
        )
    slow = lcq.RadialField(
        small_grid(r_max=16.0), function=lambda r: 1 / (1 + r)
    )
    with pytest.raises(TailDivergenceError):
        lcq.radial_convolution(lcq.KernelSpec("log"), slow, 2)


def test_kernel_inequalities():
    t = torch.logspace(-6, 2, 1000, dtype=torch.float64)
    records = lcq.check_kernel_inequalities(1.0, 1.5, t)
    assert [record.check_id for record in records] == [
        "kernel-log-lower",
        "kernel-power-upper",
        "kernel-power-upper-stability",
    ]
    assert all(record.passed for record in records)
    # max of (1/t - 1) t^{3/2}, reached at t = 1/3
    assert records[1].measured == pytest.approx(
        2 / (3 * np.sqrt(3)), rel=1e-4
    )
    assert records[1].witness == pytest.approx(1 / 3, rel=2e-2)

    with pytest.raises(InvalidParameterError):
        lcq.check_kernel_inequalities(1.5, 2.0, t)
    with pytest.raises(InvalidParameterError):
        lcq.check_kernel_inequalities(0.5, 0.5, t)


@pytest.mark.parametrize("mu", [0.05, 0.25, 1.0])
def test_power_kernel_above_log(mu):
    t = torch.logspace(-8, 0, 500, dtype=torch.float64)
    records = lcq.check_kernel_inequalities(mu, 2 * mu, t)
    assert records[0].passed
    assert records[0].measured >= 0


def test_phi_power_bound():
    t = torch.logspace(-3, 1, 400, dtype=torch.float64)
    records = lcq.phi_power_bound_check(1.0, 1.5, 2.0, t, 2, 0.5)
    assert [record.check_id for record in records] == [
        "phi-power-bound",
        "phi-power-bound-stability",
    ]
    assert records[0].passed
    assert np.isfinite(records[0].measured)
    with pytest.raises(InvalidParameterError, match="1 < r < beta"):
        lcq.phi_power_bound_check(1.0, 2.0, 1.5, t, 2, 0.5)


def test_hls_ratio():
    grid = small_grid()
    f = lcq.bump_field(grid, radius=1.0)
    h = lcq.bump_field(grid, radius=2.0)
    # 1/q + mu/N + 1/r = 2 with N = 2, mu = 1, q = r = 4/3
    result = lcq.hls_ratio(f, h, 1.0, 4 / 3, 4 / 3, 2)
    assert result.lhs > 0
    assert result.ratio == pytest.approx(result.lhs / result.rhs)
    assert result.record().passed

    zero = lcq.RadialField(grid, values=zeros(grid))
    assert lcq.hls_ratio(zero, h, 1.0, 4 / 3, 4 / 3, 2).ratio == 0.0
    with pytest.raises(InvalidExponentError):
        lcq.hls_ratio(f, h, 1.0, 2.0, 2.0, 2)
