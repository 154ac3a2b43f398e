"""Tests for the Poisson potential, the decay fits and the local audits."""

import numpy as np
import pytest
import torch

import logchoquard as lcq
from logchoquard.errors import (
    InvalidParameterError,
    NonpositiveFieldError,
    WrongDimensionError,
)

from .utils import planar_nonlinearity, planar_params, small_grid, zeros

AUDIT_RADII = torch.tensor([2.0, 4.0, 6.0], dtype=torch.float64)


def bump_report(N=2):
    """Potential of (1 - r^2)^2_+, compactly supported well inside r_max."""
    density = lcq.bump_field(small_grid(r_max=16.0), radius=1.0)
    return lcq.potential_from_density(density, N, audit_radii=AUDIT_RADII)


def test_potential_of_bump():
    report = bump_report()
    # int (1 - r^2)^2 dx = pi/3, up to the interpolation error
    assert report.F_mass == pytest.approx(np.pi / 3, rel=1e-2)
    assert report.tail_mass == 0.0
    # beyond the support phi = -C_N F_mass log r exactly
    assert report.asymptotic_deviation < 1e-12
    assert report.audit_radii == (2.0, 4.0, 6.0)
    # C_N (log(1/|.|) * F)(0) = (1/2pi) 11 pi/36
    assert float(report.phi.values[0]) == pytest.approx(11 / 72, rel=1e-2)

    records = report.records()
    assert [record.check_id for record in records] == [
        "lgamma-norm-0.5",
        "lgamma-norm-1",
        "lgamma-norm-2",
        "log-moment",
    ]
    assert all(record.passed for record in records)
    data = report.as_dict()
    assert set(data["lgamma_norms"]) == {"0.5", "1", "2"}
    assert data["phi"]["n_nodes"] == report.phi.grid.n_nodes


def test_asymptotic_check():
    report = bump_report()
    record = lcq.asymptotic_check(report)
    assert record.witness == 6.0
    assert record.passed
    # phi is interpolated between the nodes
    assert lcq.asymptotic_check(report, 4.0).measured < 1e-2
    with pytest.raises(InvalidParameterError, match="exceed 1"):
        lcq.asymptotic_check(report, 0.5)


def test_asymptotic_check_zero_mass():
    grid = small_grid(r_max=16.0)
    zero = lcq.RadialField(grid, values=zeros(grid))
    report = lcq.potential_from_density(zero, 2, audit_radii=AUDIT_RADII)
    record = lcq.asymptotic_check(report)
    assert record.passed
    assert record.note.startswith("skipped")


def test_potential_errors():
    density = lcq.bump_field(small_grid(r_max=16.0), radius=1.0)
    with pytest.raises(NonpositiveFieldError):
        lcq.potential_from_density(-density, 2)
    report = bump_report()
    with pytest.raises(InvalidParameterError, match="gamma"):
        lcq.lgamma_norm(report.phi, 0.0, 2)


def test_lgamma_norm():
    report = bump_report()
    assert all(norm > 0 for norm in report.lgamma_norms.values())
    value = lcq.lgamma_norm(report.phi, 1.0, 2, F_mass=report.F_mass)
    assert value == report.lgamma_norms[1.0]
    # the analytic tail beyond r_max is positive
    assert value > lcq.lgamma_norm(report.phi, 1.0, 2)


def test_poisson_potential():
    nl = planar_nonlinearity()
    u = lcq.bump_field(small_grid(r_max=16.0), radius=1.0)
    report = lcq.poisson_potential(u, nl, 2)
    assert report.N == 2
    assert report.logF_integral > 0
    assert report.logF_integral == pytest.approx(
        lcq.logF_integral(u, nl, 2)
    )
    assert torch.allclose(report.density.values, nl.primitive(u.values))


def power_field(exponent, r_max=64.0):
    return lcq.RadialField(
        small_grid(r_max=r_max),
        function=lambda r: torch.clamp(r, min=1.0) ** -exponent,
    )


def test_decay_fit():
    fit = lcq.decay_fit(power_field(2.0), (1.0, 51.2), a=2.0)
    assert fit.exponent == pytest.approx(2.0, rel=1e-9)
    assert fit.sup_ratio == pytest.approx(1.0)
    assert fit.start_ratio == pytest.approx(1.0)
    assert not fit.super_polynomial
    assert fit.record().passed

    # a from (N, s): s (2N + 3) / (2 (N - s)) = 7/6 in the plane
    fit = lcq.decay_fit(power_field(2.0), N=2, s=0.5)
    assert fit.a == pytest.approx(7 / 6)
    assert fit.window == (1.6, pytest.approx(51.2))


def test_decay_fit_compact():
    grid = small_grid(r_max=64.0)
    fit = lcq.decay_fit(lcq.bump_field(grid, radius=1.0), a=1.0)
    assert fit.super_polynomial
    assert fit.sup_ratio == 0.0


def test_decay_fit_errors():
    u = power_field(2.0)
    with pytest.raises(InvalidParameterError, match="decades"):
        lcq.decay_fit(u, (1.0, 10.0), a=2.0)
    with pytest.raises(InvalidParameterError, match="the pair"):
        lcq.decay_fit(u, (1.0, 51.2))
    with pytest.raises(NonpositiveFieldError):
        lcq.decay_fit(-u, (1.0, 51.2), a=2.0)


def test_F_decay_check():
    """F(u) ~ u^{q+1} decays much faster than the exponents required."""
    records = lcq.F_decay_check(
        power_field(1.0), planar_nonlinearity(), planar_params()
    )
    assert [record.check_id for record in records] == [
        "primitive-decay-exponent",
        "primitive-decay-integrable",
    ]
    assert all(record.passed for record in records)
    assert records[0].measured > 11


@pytest.mark.parametrize("mu", [1.0, 0.25])
def test_gmu_convolution_bound(mu):
    u = lcq.bump_field(small_grid(r_max=16.0), radius=1.5)
    x = torch.linspace(0.1, 6.0, 12, dtype=torch.float64)
    record = lcq.gmu_convolution_bound(u, planar_nonlinearity(), mu, x, 2)
    assert record.check_id == "gmu-bound"
    assert record.passed


def test_laplace_residual():
    """-Delta phi = F in the plane, up to the O(h^2) stencil error."""
    report = bump_report()
    result = lcq.laplace_residual_2d(report)
    assert result.h == 0.05
    assert result.residual < 5e-2
    assert result.record(bound=5e-2).check_id == "laplace-residual-h-0.05"

    _, residuals = lcq.laplace_refinement_order(report)
    assert residuals[-1] < residuals[0]


def test_laplace_residual_errors():
    with pytest.raises(WrongDimensionError):
        lcq.laplace_residual_2d(bump_report(N=3))
    with pytest.raises(InvalidParameterError, match="stencil"):
        lcq.laplace_residual_2d(bump_report(), h=0.6)


def test_holder_bound():
    u = lcq.bump_field(small_grid(r_max=16.0), radius=1.0)
    value = lcq.holder_bound_rhs(u, 0.0, 0.5, 0.0, 2, 0.5)
    # the local sup over B_1 is u(0) = 1 and u vanishes outside B_1
    assert value == pytest.approx(1.0)
    assert np.isfinite(value)
    assert lcq.holder_bound_rhs(u, 1.0, 0.5, 0.0, 2, 0.5) > value
    record = lcq.holder_check(u, 1.0, 0.5, (0.0, 1.0, 3.0), 2, 0.5)
    assert record.passed
    with pytest.raises(InvalidParameterError):
        lcq.holder_bound_rhs(u, 1.0, 0.0, 0.0, 2, 0.5)
