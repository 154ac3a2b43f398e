"""Tests for the explicit constants."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

import logchoquard as lcq
from logchoquard.errors import (
    InputTypeError,
    InvalidDimensionError,
    InvalidParameterError,
)

from .utils import planar_params


def test_planar_closed_forms():
    """In the plane the constants have closed forms."""
    assert lcq.riesz_constant(2) == pytest.approx(1 / (2 * np.pi), rel=1e-15)
    assert lcq.unit_ball_volume(2) == pytest.approx(np.pi, rel=1e-15)
    assert lcq.sphere_measure(2) == pytest.approx(2 * np.pi, rel=1e-15)
    assert lcq.K_frak(2, 0.5) == pytest.approx(9.5 * np.pi**2, rel=1e-13)
    assert lcq.norm_cap(2, 0.5, 0.25) == pytest.approx(2.0)
    assert lcq.decay_exponent(2, 0.5) == pytest.approx(7 / 6)
    assert lcq.primitive_decay_exponent(2, 0.5) == pytest.approx(14 / 3)
    assert lcq.level_threshold(2, 0.5) == 0.125


def test_alpha_star_planar():
    """alpha* = 2 (6 pi^2 zeta(3))^(1/3) for N = 2 and s = 1/2."""
    alpha = lcq.alpha_star_upper(2, 0.5, 1e-10)
    closed = 2 * (6 * np.pi**2 * special.zeta(3)) ** (1 / 3)
    assert alpha.remainder < 1e-10
    assert abs(alpha.value - closed) < 1e-8
    assert alpha.value == pytest.approx(8.289, abs=1e-3)


@pytest.mark.parametrize("N", [2, 3])
def test_alpha_star_summation_orders(N):
    """Forward and compensated sums agree within 1e-8."""
    forward = lcq.alpha_star_upper(N, 0.5, 1e-10)
    kahan = lcq.alpha_star_upper(N, 0.5, 1e-10, summation="kahan")
    assert abs(kahan.value - forward.value) < 1e-8
    assert kahan.n_terms == forward.n_terms
    assert forward.remainder < 1e-10


def test_alpha_star_three_dimensions():
    """For N = 3, s = 1/2 the series is a combination of zeta values.

    (k + 1)(k + 2) / (3 + 2k)^6 = (m^2 - 1) / (4 m^6) with m = 2k + 3 odd,
    and the prefactor is 2 (4 pi)^2 Gamma(7) / 3! = 3840 pi^2.
    """
    series = 0.25 * (
        (1 - 2.0**-4) * special.zeta(4) - (1 - 2.0**-6) * special.zeta(6)
    )
    closed = 3 * (3840 * np.pi**2 * series) ** 0.2
    alpha = lcq.alpha_star_upper(3, 0.5, 1e-10)
    assert abs(alpha.value - closed) < 1e-8


def test_alpha_star_max_terms():
    """A tolerance that needs too many terms is reported."""
    with pytest.raises(lcq.errors.ToleranceNotReachedError):
        lcq.alpha_star_upper(2, 0.5, 1e-15, max_terms=2048)


def test_riesz_constant_three_dimensions():
    # 1 / (4 pi^{3/2} Gamma(3/2)) = 1 / (2 pi^2)
    assert lcq.riesz_constant(3) == pytest.approx(
        1 / (2 * np.pi**2), rel=1e-14
    )


def test_fractional_factorial():
    """Strict floor and falling products."""
    assert lcq.floor_strict(4) == 3
    assert lcq.floor_strict(4.5) == 4
    assert lcq.fractional_factorial(4) == 24.0
    assert lcq.fractional_factorial(2.5) == pytest.approx(2.5 * 1.5 * 0.5)
    with pytest.raises(InvalidParameterError):
        lcq.fractional_factorial(0.0)


def test_mu_N_forms():
    """The difference form of mu_N and the literal one."""
    # (4 - 3) / (4 * 24) * 0.25 / 1
    assert lcq.mu_N(2, 0.5, 0.25) == pytest.approx(0.25 / 96)
    # in the plane (1 - 2/N) vanishes so the literal form is zero
    assert lcq.mu_N(2, 0.5, 0.25, form="literal") == 0.0
    assert lcq.mu_N(3, 0.5, 0.3) <= 0.5 / 3


def test_seminorm_bounds_split():
    bounds = lcq.seminorm_bounds(2, 0.5)
    sphere = lcq.sphere_measure(2) ** 2
    expected = 2 * sphere * (bounds.I1 + bounds.I2 + bounds.I3) + sphere * (
        bounds.A1 + bounds.A2
    )
    assert bounds.split == pytest.approx(expected)
    assert bounds.I1 == bounds.A1


def test_J_frak_closed_form():
    """The printed closed form, and its surface-measure reading."""
    N, s, R = 2, 0.5, 1 / 3
    # omega_1 N s (N + 3s) R^2 / (4 (N + s)(N + 2s)) = 7 / 270
    assert lcq.J_frak(N, s, R) == pytest.approx(np.pi / 36 + 7 / 270)
    assert lcq.J_frak(N, s, R) == pytest.approx(0.11319, abs=1e-5)
    assert lcq.J_frak(N, s, R, sphere="N_omega") == pytest.approx(
        np.pi / 36 + 14 / 270
    )
    assert lcq.J_frak(N, s, R, 2.0) == pytest.approx(
        2 * lcq.J_frak(N, s, R)
    )

    # N = 3: omega_2 = pi, 3 s (3 + 3s) / (4 (3 + s)(3 + 2s)) = 27 / 224
    R = 1.0
    assert lcq.J_frak(3, 0.5, R) == pytest.approx(
        4 * np.pi / 3 / 8 + np.pi * 27 / 224
    )


def test_threshold_and_beta_0():
    N, s = 2, 0.5
    total = lcq.J_frak(N, s, 1 / 3) + lcq.K_frak(N, s)
    assert lcq.T_frak(N, s) == pytest.approx(
        (2 ** (s / N) * total) ** (-s / N)
    )
    assert lcq.beta_0(N, s) > 0
    assert lcq.beta_0(N, s, 2.0) > lcq.beta_0(N, s)


@settings(deadline=None, max_examples=25)
@given(
    N=st.integers(min_value=2, max_value=6),
    s=st.floats(min_value=0.05, max_value=0.95),
    fraction=st.floats(min_value=0.01, max_value=0.99),
)
def test_envelope_constants(N, s, fraction):
    """Signs and ordering of the constants on the parameter envelope."""
    lower = (1 - 2 / N) * s
    tau = lower + fraction * (s - lower)
    params = lcq.ProblemParams(N=N, s=s, tau=tau)
    assert params.tau_window == pytest.approx((lower, s))
    assert 0 < lcq.mu_N(N, s, tau) <= s / N
    assert lcq.norm_cap(N, s, tau) > 0
    assert lcq.decay_exponent(N, s) > N * s / (N - s)
    assert 0 < lcq.rim_radius_cap(N, s) < 1
    assert 0.5 < lcq.ray_scale_lower(N, s) < 1
    assert lcq.K_frak(N, s) > 0
    assert lcq.phi_exponent_index(N, s) >= N / s - 1e-9


def test_problem_params():
    params = planar_params()
    assert params.p == 4.0
    assert params.gamma_exp == pytest.approx(4 / 3)
    assert params.ps_factor == pytest.approx(0.25)
    assert params == lcq.ProblemParams(N=2, s=0.5, tau=0.25)
    assert hash(params) == hash(planar_params())
    assert "tau=0.25" in repr(params)


def test_problem_params_errors():
    with pytest.raises(InvalidDimensionError):
        lcq.ProblemParams(N=1, s=0.5, tau=0.25)
    with pytest.raises(InvalidParameterError, match="fractional order"):
        lcq.ProblemParams(N=2, s=1.0, tau=0.25)
    with pytest.raises(InvalidParameterError, match="growth window"):
        lcq.ProblemParams(N=2, s=0.5, tau=0.6)
    with pytest.raises(InvalidParameterError, match="growth window"):
        lcq.ProblemParams(N=3, s=0.6, tau=0.1)
    with pytest.raises(InvalidParameterError, match="potential bounds"):
        lcq.ProblemParams(N=2, s=0.5, tau=0.25, V_lower=2.0, V_upper=1.0)
    with pytest.raises(InputTypeError):
        lcq.ProblemParams(N=2.0, s=0.5, tau=0.25)


def test_constants_bundle():
    """The bundle gathers the constants with their provenance."""
    params = planar_params()
    report = lcq.constants_bundle(params)
    assert report.norm_cap == 2.0
    assert report.C_N == pytest.approx(1 / (2 * np.pi))
    assert report.K_frak == pytest.approx(9.5 * np.pi**2)
    assert report.decay_a == pytest.approx(7 / 6)
    assert report.mu_N == report.mu_N_difference
    assert report.R == pytest.approx(1 / 3)
    assert report.J_frak == pytest.approx(np.pi / 36 + 7 / 270)
    assert report.J_frak_surface == pytest.approx(np.pi / 36 + 14 / 270)

    data = report.as_dict()
    assert set(data["provenance"]) == set(lcq.constants.bundle.PROVENANCE)
    for key, value in data["provenance"].items():
        assert key in data
        assert value.split(":")[0] in lcq.ANCHORS

    # R only enters J_frak
    other = lcq.constants_bundle(params, 0.25)
    assert other.J_frak != report.J_frak
    assert other.T_N == report.T_N
    assert other.beta_0 == report.beta_0

    with pytest.raises(InvalidParameterError):
        lcq.constants_bundle(params, 1.5)


def test_constants_bundle_literal_warns():
    """The literal reading of mu_N is empty in the plane."""
    with pytest.warns(UserWarning, match="ratio window is empty"):
        report = lcq.constants_bundle(planar_params(), mu_form="literal")
    assert report.mu_N == 0.0


def test_constants_checks():
    params = planar_params()
    report = lcq.constants_bundle(params)
    records = lcq.constants_checks(params, report)
    ids = [record.check_id for record in records]
    assert ids == [
        "tau-window",
        "constants-positive",
        "alpha-star-remainder",
        "mu-N-below-s/N",
        "decay-above-Ns/(N-s)",
        "riesz-planar",
        "alpha-star-zeta",
        "K-frak-planar",
    ]
    assert all(record.passed for record in records)

    params = lcq.ProblemParams(N=3, s=0.5, tau=0.3)
    records = lcq.constants_checks(params, lcq.constants_bundle(params))
    assert "riesz-planar" not in [record.check_id for record in records]
    assert all(record.passed for record in records)
