"""Tests for the nonlinearities and the audit of their growth."""

import numpy as np
import pytest
import torch
from scipy import integrate

import logchoquard as lcq
from logchoquard.errors import (
    InvalidExponentError,
    InvalidParameterError,
    OverflowGuardError,
    UnreachableTargetError,
)

from .utils import planar_nonlinearity, planar_params


def test_base_nonlinearity_is_abstract():
    with pytest.raises(NotImplementedError):
        lcq.BaseNonlinearity()


def test_model_values():
    nl = lcq.make_model_nonlinearity(2, 0.5, lam=2.0, alpha=1.0, q=4.0)
    assert float(nl.f(1.0)) == pytest.approx(2 * np.e, rel=1e-15)
    t = torch.tensor([-1.0, 0.0, 0.5], dtype=torch.float64)
    values = nl.f(t)
    assert float(values[0]) == 0.0
    assert float(values[1]) == 0.0
    assert float(values[2]) == pytest.approx(
        2 * 0.5**4 * np.exp(0.5 ** (4 / 3))
    )
    assert float(nl.with_amplitude(6.0).f(1.0)) == pytest.approx(6 * np.e)
    assert nl.as_dict()["lambda"] == 2.0
    assert nl.as_dict()["gamma"] == pytest.approx(4 / 3)


@pytest.mark.parametrize("t", [0.3, 1.5, 4.0])
def test_model_primitive(t):
    """F agrees with an adaptive quadrature of f."""
    nl = planar_nonlinearity()
    expected, _ = integrate.quad(
        lambda x: x**10 * np.exp(x ** (4 / 3)), 0, t, epsrel=1e-13
    )
    assert float(nl.primitive(t)) == pytest.approx(expected, rel=1e-9)
    assert float(nl.log_primitive(t)) == pytest.approx(
        np.log(expected), rel=1e-9
    )


def test_model_derivatives():
    nl = planar_nonlinearity()
    t = torch.linspace(0.1, 3.0, 20, dtype=torch.float64, requires_grad=True)
    nl.primitive(t).sum().backward()
    assert torch.allclose(t.grad, nl.f(t.detach()), rtol=1e-12)

    x = t.detach()
    h = 1e-6
    fd = (nl.f(x + h) - nl.f(x - h)) / (2 * h)
    assert torch.allclose(nl.df(x), fd, rtol=1e-6)


def test_model_ratio_limits():
    """F f'/f^2 tends to q/(q+1) at 0 and to 1 at infinity."""
    nl = planar_nonlinearity()
    assert float(nl.ratio(1e-6)) == pytest.approx(10 / 11, rel=1e-5)
    assert float(nl.rho(1e-6)) == pytest.approx(1 / 11, rel=1e-5)
    assert float(nl.ratio(1e3)) == pytest.approx(1.0, abs=1e-2)
    # the ratio is available beyond the overflow guard
    assert np.isfinite(float(nl.ratio(1e4)))


def test_model_overflow_guard():
    nl = planar_nonlinearity()
    with pytest.raises(OverflowGuardError):
        nl.f(200.0)
    # log-space evaluation stays finite
    expected = 10 * np.log(200.0) + 200.0 ** (4 / 3)
    assert float(nl.log_f(200.0)) == pytest.approx(expected, rel=1e-14)
    assert np.isfinite(float(nl.log_primitive(200.0)))


def test_model_errors():
    with pytest.raises(InvalidExponentError, match="N/s - 1"):
        lcq.make_model_nonlinearity(2, 0.5, q=3.0)
    with pytest.raises(InvalidParameterError):
        lcq.make_model_nonlinearity(2, 0.5, lam=0.0)
    with pytest.raises(InvalidParameterError):
        lcq.make_model_nonlinearity(2, 0.5, alpha=-1.0)
    with pytest.warns(UserWarning, match="Trudinger-Moser bound"):
        lcq.make_model_nonlinearity(2, 0.5, alpha=9.0)


def test_shape_factor_interpolant():
    nl = planar_nonlinearity()
    assert nl.shape.error < 1e-11
    # cached per exponent pair
    assert lcq.shape_factor(nl.shape.a, nl.shape.gamma) is nl.shape


def test_callable_nonlinearity():
    nl = lcq.CallableNonlinearity(lambda t: t**3)
    assert float(nl.primitive(2.0)) == pytest.approx(4.0, rel=1e-12)
    assert float(nl.primitive(0.5)) == pytest.approx(0.5**4 / 4, rel=1e-12)
    assert float(nl.primitive(-1.0)) == 0.0
    assert float(nl.f(-1.0)) == 0.0
    assert float(nl.df(2.0)) == pytest.approx(12.0, rel=1e-6)
    assert float(nl.ratio(2.0)) == pytest.approx(0.75, rel=1e-6)

    exact = lcq.CallableNonlinearity(lambda t: t**3, lambda t: 3 * t**2)
    assert float(exact.df(2.0)) == 12.0

    t = torch.tensor([0.5, 1.5], dtype=torch.float64, requires_grad=True)
    nl.primitive(t).sum().backward()
    assert torch.allclose(t.grad, t.detach() ** 3)

    with pytest.raises(InvalidParameterError):
        lcq.CallableNonlinearity(lambda t: t**3, t_min=1.0, t_max=0.5)


def test_verify_assumptions_model():
    """The model family satisfies the growth and limit assumptions."""
    params = planar_params()
    report = lcq.verify_assumptions(planar_nonlinearity(), params)
    records = {record.check_id: record for record in report.records()}
    assert list(records) == [
        "growth-at-zero",
        "exponential-growth",
        "ratio-lower",
        "ratio-upper",
        "ratio-below-1+s/N",
        "ratio-limit",
        "beta-growth",
        "small-growth-consequence",
        "primitive-bound",
        "primitive-small",
    ]
    # the unit amplitude is far below the calibrated one
    failed = {key for key, record in records.items() if not record.passed}
    assert failed == {"beta-growth"}
    assert report.small_t_slope == pytest.approx(10.0, rel=1e-4)
    assert report.ratio_lower == 0.75
    assert report.lower_margin > 0
    # sup of F f'/f^2 is close to 1 + 1/(48 q) for gamma = 4/3
    assert report.ratio_upper == pytest.approx(1 + 1 / 384)
    assert report.ratio_sup == pytest.approx(1 + 1 / 480, abs=2e-4)
    assert report.upper_margin > 0
    assert report.primitive_ratio_max < report.primitive_ratio_bound
    assert report.T_N == pytest.approx(lcq.T_frak(2, 0.5))


def test_verify_assumptions_calibrated():
    """With the calibrated amplitude every record passes."""
    params = planar_params()
    nl = lcq.calibrate_amplitude(
        2,
        0.5,
        1.01 * lcq.beta_0(2, 0.5),
        nonlinearity=planar_nonlinearity(),
        return_nonlinearity=True,
    )
    report = lcq.verify_assumptions(nl, params)
    for record in report.records():
        assert record.passed, record.check_id
    assert report.passed


def test_verify_assumptions_small_power():
    """A small power q pushes F f'/f^2 above 1 + mu_N."""
    params = planar_params()
    report = lcq.verify_assumptions(planar_nonlinearity(q=3.5), params)
    records = {record.check_id: record for record in report.records()}
    assert not records["ratio-upper"].passed
    assert records["ratio-upper"].margin < 0
    assert report.ratio_sup > report.ratio_upper
    assert records["ratio-below-1+s/N"].passed
    assert not report.passed


def test_verify_assumptions_grid():
    params = planar_params()
    grid = torch.logspace(-2, 1, 100, dtype=torch.float64)
    with pytest.raises(InvalidParameterError, match="cover"):
        lcq.verify_assumptions(planar_nonlinearity(), params, grid)


def test_calibrate_amplitude():
    """The calibrated amplitude reaches the target lower bound."""
    params = planar_params()
    target = 1.01 * lcq.beta_0(2, 0.5)
    nl = lcq.calibrate_amplitude(2, 0.5, target, return_nonlinearity=True)
    assert isinstance(nl, lcq.ModelNonlinearity)
    assert nl.lam > 1.0
    report = lcq.verify_assumptions(nl, params)
    assert report.beta >= target * (1 - 1e-12)
    # beta scales as lambda^2
    assert report.beta <= target * (1 + 1e-6) ** 2 * (1 + 1e-9)
    records = {record.check_id: record for record in report.records()}
    assert records["beta-growth"].passed


def test_calibrate_amplitude_errors():
    beta_0 = lcq.beta_0(2, 0.5)
    with pytest.raises(InvalidParameterError, match="beta_0"):
        lcq.calibrate_amplitude(2, 0.5, 0.5 * beta_0)
    with pytest.raises(UnreachableTargetError):
        lcq.calibrate_amplitude(2, 0.5, 2 * beta_0, cap=10.0)
