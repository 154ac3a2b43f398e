"""Tests for the radial grids, fields and functionals."""

import numpy as np
import pytest
import torch
from hypothesis import given, settings
from hypothesis import strategies as st

import logchoquard as lcq
from logchoquard.errors import (
    GridMisalignedError,
    InputStructureError,
    InputTypeError,
    InvalidExponentError,
    InvalidParameterError,
    OverflowGuardError,
)

from .utils import planar_params, small_grid, zeros


def test_grid_nodes():
    """Graded nodes with the breakpoints as nodes."""
    grid = small_grid(breakpoints=(1 / 6, 1 / 3, 2.5))
    nodes = grid.nodes
    assert float(nodes[0]) == 0.0
    assert float(nodes[-1]) == 4.0
    assert bool(torch.all(torch.diff(nodes) > 0))
    for breakpoint in (1 / 6, 1 / 3, 2.5):
        assert grid.has_node(breakpoint)
        assert float(nodes[grid.node_index(breakpoint)]) == breakpoint
    assert grid.n_nodes == grid.n_segments + 1
    assert grid.points.shape == (grid.n_segments, grid.order)

    with pytest.raises(InvalidParameterError, match="outside the grid"):
        small_grid(breakpoints=(5.0,))
    with pytest.raises(InvalidParameterError):
        lcq.RadialGrid(nodes=np.array([0.0, 1.0, 1.0, 2.0]))
    with pytest.raises(InvalidParameterError, match="first node"):
        lcq.RadialGrid(nodes=np.array([0.5, 1.0, 2.0]))


def test_grid_spec_validation():
    """The parameter bundle rejects values outside their range."""
    with pytest.raises(InputTypeError):
        lcq.GridSpec(ratio=1.5)
    with pytest.raises(InputTypeError):
        lcq.GridSpec(r_max=0.5)
    with pytest.raises(InputTypeError):
        lcq.GridSpec(n_uniform=1)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_grid_integrate_volume(N):
    """Integrating 1 gives the volume of the ball of radius r_max."""
    grid = small_grid()
    volume = grid.integrate(torch.ones_like(grid.points), N)
    expected = lcq.unit_ball_volume(N) * grid.r_max**N
    assert float(volume) == pytest.approx(expected, rel=1e-12)


def test_grid_refine():
    grid = small_grid()
    fine = grid.refine()
    assert fine.n_segments == 2 * grid.n_segments
    assert bool(torch.equal(fine.nodes[::2], grid.nodes))
    assert fine.max_length == pytest.approx(grid.max_length / 2)
    assert fine != grid
    assert fine.refine() == grid.refine().refine()


def test_field_construction():
    grid = small_grid()
    with pytest.raises(InputStructureError):
        lcq.RadialField(grid)
    with pytest.raises(InputStructureError):
        lcq.RadialField(grid, values=zeros(grid), function=torch.exp)
    with pytest.raises(InvalidParameterError, match="nodal values"):
        lcq.RadialField(grid, values=torch.zeros(3, dtype=torch.float64))
    values = zeros(grid)
    values[2] = float("nan")
    with pytest.raises(InvalidParameterError, match="finite"):
        lcq.RadialField(grid, values=values)


def test_field_interpolation():
    """Linear functions are reproduced and fields vanish beyond r_max."""
    grid = small_grid()
    u = lcq.RadialField(grid, function=lambda r: 3 - 0.5 * r)
    r = torch.tensor([0.0, 0.3, 1.7, 3.99, 4.5], dtype=torch.float64)
    expected = torch.tensor([3.0, 2.85, 2.15, 1.005, 0.0], dtype=torch.float64)
    assert torch.allclose(u(r), expected, atol=1e-14)
    assert u.sup == 3.0
    assert (u - u).sup == 0.0
    assert (2 * u).sup == 6.0
    assert (-u).positive_part().sup == 0.0

    other = lcq.RadialField(small_grid(n_uniform=32), function=torch.exp)
    with pytest.raises(InvalidParameterError, match="same grid"):
        u + other


def test_field_csv(tmp_path):
    grid = small_grid()
    u = lcq.bump_field(grid, radius=2.0, height=0.7)
    path = tmp_path / "u.csv"
    u.to_csv(path)
    assert path.read_text().splitlines()[0] == "r,value"
    v = lcq.RadialField.from_csv(path, order=grid.order)
    assert v.grid == grid
    assert torch.equal(v.values, u.values)


def test_lp_norm():
    grid = small_grid()
    ones = lcq.RadialField(grid, function=torch.ones_like)
    assert lcq.lp_norm(ones, 2, N=2) == pytest.approx(
        (np.pi * 16) ** 0.5, rel=1e-12
    )
    V = lcq.RadialPotential(V_lower=2.0, V_upper=2.0)
    assert lcq.lp_norm(ones, 1, N=2, V=V) == pytest.approx(
        2 * np.pi * 16, rel=1e-12
    )
    with pytest.raises(InvalidParameterError):
        lcq.lp_norm(ones, 0.5, N=2)


def test_potential_shapes():
    constant = lcq.RadialPotential.from_params(planar_params(V_upper=3.0))
    r = torch.tensor([0.0, 1.0, 100.0], dtype=torch.float64)
    assert torch.all(constant(r) == 3.0)
    well = lcq.RadialPotential("well", V_lower=1.0, V_upper=3.0)
    values = well(r)
    assert float(values[0]) == 1.0
    assert float(values[1]) == pytest.approx(2.0)
    assert float(values[2]) == pytest.approx(3.0, rel=1e-3)
    assert well != constant
    with pytest.raises(InvalidParameterError):
        lcq.RadialPotential(V_lower=0.0)


def test_seminorm_zero_and_homogeneity():
    """[c u]^{N/s} = |c|^{N/s} [u]^{N/s}."""
    grid = small_grid()
    zero = lcq.RadialField(grid, values=zeros(grid))
    assert lcq.gagliardo_seminorm(zero, 0.5, 2) == 0.0
    u = lcq.bump_field(grid, radius=1.5)
    value = lcq.gagliardo_seminorm(u, 0.5, 2)
    assert value > 0
    assert lcq.gagliardo_seminorm(-2 * u, 0.5, 2) == pytest.approx(
        16 * value, rel=1e-12
    )


def test_seminorm_parts():
    """The split of the double integral adds up to the seminorm."""
    grid = small_grid()
    u = lcq.bump_field(grid, radius=1.5)
    quadrature = lcq.seminorm_quadrature(grid, 2, 0.5)
    parts = quadrature.parts(u.values)
    assert set(parts) == {"far", "diagonal", "adjacent", "exterior"}
    assert all(float(part) >= 0 for part in parts.values())
    total = sum(float(part) for part in parts.values())
    assert total == pytest.approx(lcq.gagliardo_seminorm(u, 0.5, 2))
    # cached per grid and parameters
    assert lcq.seminorm_quadrature(grid, 2, 0.5) is quadrature


def test_seminorm_singular_exponent():
    with pytest.raises(InvalidExponentError):
        lcq.SeminormQuadrature(small_grid(), 2, 1.0)


@pytest.mark.parametrize("make_field", [lcq.hat_field, lcq.bump_field])
def test_seminorm_oracle(make_field):
    """The radial reduction agrees with a Monte-Carlo estimate in the plane."""
    u = make_field(small_grid(), radius=1.5)
    record = lcq.seminorm_oracle_check(
        u, 0.5, 2, n_samples=10**6, n_sigma=3.0, check_id="oracle"
    )
    assert record.check_id == "oracle"
    assert record.anchor == "seminorm-radial-reduction"
    assert record.passed


def test_hat_field():
    grid = small_grid()
    u = lcq.hat_field(grid, radius=2.0, height=3.0)
    r = torch.tensor([0.0, 1.0, 3.0], dtype=torch.float64)
    assert torch.allclose(
        u(r), torch.tensor([3.0, 1.5, 0.0], dtype=torch.float64)
    )
    with pytest.raises(InvalidParameterError, match="radius"):
        lcq.hat_field(grid, radius=0.0)


def test_plateau():
    grid = small_grid(breakpoints=(1 / 6, 1 / 3))
    w = lcq.plateau_test_function(1 / 3, grid)
    r = torch.tensor([0.0, 1 / 6, 0.25, 1 / 3, 1.0], dtype=torch.float64)
    assert torch.allclose(
        w(r), torch.tensor([1.0, 1.0, 0.5, 0.0, 0.0], dtype=torch.float64)
    )
    with pytest.raises(GridMisalignedError):
        lcq.plateau_test_function(1 / 3, small_grid(breakpoints=()))
    with pytest.raises(InvalidParameterError):
        lcq.plateau_test_function(1.5, grid)


def test_plateau_checks():
    """The plateau norm stays below J_N(s, R) + K_N(s)."""
    params = planar_params()
    grid = small_grid(breakpoints=(1 / 6, 1 / 3))
    records = lcq.plateau_checks(params, grid, 1 / 3)
    assert [r.check_id for r in records] == [
        "plateau-seminorm",
        "plateau-potential",
        "plateau-norm",
    ]
    assert all(record.passed for record in records)
    seminorm, potential, norm = records
    assert norm.bound == pytest.approx(
        lcq.J_frak(2, 0.5, 1 / 3) + lcq.K_frak(2, 0.5)
    )
    assert norm.measured == pytest.approx(
        seminorm.measured + potential.measured
    )
    # pi/36 + 2 pi int_{1/6}^{1/3} (2 - 6r)^4 r dr, above the printed J
    exact = np.pi / 36 + 2 * np.pi * 7 / 1080
    assert potential.measured == pytest.approx(exact, rel=1e-6)
    assert potential.measured > lcq.J_frak(2, 0.5, 1 / 3)
    with pytest.raises(GridMisalignedError):
        lcq.plateau_checks(params, small_grid(breakpoints=()), 1 / 3)


def test_v_norm():
    params = planar_params()
    u = lcq.bump_field(small_grid(), radius=1.5, height=0.5)
    seminorm = lcq.gagliardo_seminorm(u, 0.5, 2)
    potential = lcq.lp_norm(u, 4, N=2) ** 4
    assert lcq.v_norm(u, params) == pytest.approx(seminorm + potential)


def test_phi_ns():
    """Phi_{N,s} removes the first terms of the exponential series."""
    # N/s = 4: the terms of order 0, 1 and 2 are removed
    assert float(lcq.phi_ns(1.0, 2, 0.5)) == pytest.approx(
        np.e - 2.5, rel=1e-14
    )
    assert float(lcq.phi_ns(0.5, 2, 0.5)) == pytest.approx(
        np.exp(0.5) - 1.625, rel=1e-12
    )
    below, above = lcq.phi_ns(
        torch.tensor([1 - 1e-12, 1.0], dtype=torch.float64), 2, 0.5
    )
    assert float(below) == pytest.approx(float(above), rel=1e-9)
    assert float(lcq.phi_ns(0.0, 2, 0.5)) == 0.0

    assert float(lcq.log_phi_ns(10.0, 2, 0.5)) == pytest.approx(
        np.log(np.exp(10.0) - 1 - 10 - 50), rel=1e-13
    )
    assert float(lcq.log_phi_ns(800.0, 2, 0.5)) == pytest.approx(800.0)
    with pytest.raises(OverflowGuardError):
        lcq.phi_ns(800.0, 2, 0.5)


@settings(deadline=None, max_examples=30)
@given(t=st.floats(min_value=1e-3, max_value=40.0))
def test_phi_ns_positive_increasing(t):
    values = lcq.phi_ns(
        torch.tensor([t, 1.01 * t], dtype=torch.float64), 2, 0.5
    )
    assert 0 < float(values[0]) < float(values[1])


def test_mt_functional():
    grid = small_grid()
    zero = lcq.RadialField(grid, values=zeros(grid))
    assert lcq.mt_functional(zero, 1.0, 2, 0.5) == 0.0
    u = lcq.bump_field(grid, radius=1.5)
    assert lcq.mt_functional(u, 2.0, 2, 0.5) > lcq.mt_functional(
        u, 1.0, 2, 0.5
    )
    with pytest.raises(InvalidParameterError):
        lcq.mt_functional(u, 0.0, 2, 0.5)

    assert lcq.mt_integrability_check(u, 8.0, 2, 0.5).passed
    record = lcq.mt_integrability_check(200.0 * u, 1.0, 2, 0.5)
    assert not record.passed
    assert record.measured == float("inf")


def test_tail_bound():
    grid = small_grid(r_max=16.0)
    compact = lcq.bump_field(grid, radius=1.0)
    tail = lcq.tail_bound(compact, 1, 2)
    assert tail.exponent == float("inf")
    assert tail.lp_tail == 0.0

    cubic = lcq.RadialField(
        grid, function=lambda r: torch.clamp(r, min=1.0) ** -3
    )
    tail = lcq.tail_bound(cubic, 1, 2)
    assert tail.exponent == pytest.approx(3.0, rel=1e-9)
    assert tail.amplitude == pytest.approx(1.0, rel=1e-9)
    assert tail.lp_tail == pytest.approx(2 * np.pi / 16, rel=1e-8)

    slow = lcq.RadialField(
        grid, function=lambda r: torch.clamp(r, min=1.0) ** -1
    )
    assert lcq.tail_bound(slow, 1, 2).lp_tail == float("inf")


def test_gagliardo_monte_carlo_zero():
    grid = small_grid()
    estimate = lcq.gagliardo_monte_carlo(
        lcq.RadialField(grid, values=zeros(grid)), 0.5, 2, n_samples=10
    )
    assert estimate.value == 0.0
    with pytest.raises(InvalidParameterError):
        lcq.gagliardo_monte_carlo(lcq.bump_field(grid), 1.0, 2, n_samples=10)
