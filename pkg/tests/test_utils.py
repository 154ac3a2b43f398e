"""Tests for the numerical utilities."""

import numpy as np
import pytest
import torch
from hypothesis import given, settings
from hypothesis import strategies as st

import logchoquard as lcq


def test_kahan_sum():
    """Compensated summation recovers the small terms lost by naive sums."""
    values = [1.0] + [1e-16] * 10_000
    naive = 0.0
    for value in values:
        naive += value
    assert naive == 1.0
    assert lcq.kahan_sum(values) == pytest.approx(1.0 + 1e-12, rel=1e-15)
    assert lcq.kahan_sum(np.array([])) == 0.0


def test_as_tensor():
    out = lcq.as_tensor([1, 2, 3])
    assert out.dtype == lcq.float_dtype
    out = lcq.as_tensor(torch.tensor([1.0], dtype=torch.float32))
    assert out.dtype == lcq.float_dtype


@settings(deadline=None, max_examples=25)
@given(
    slope=st.floats(min_value=-5, max_value=5),
    scale=st.floats(min_value=1e-3, max_value=1e3),
)
def test_loglog_slope(slope, scale):
    x = np.logspace(-2, 2, 9)
    y = scale * x**slope
    assert lcq.loglog_slope(x, y) == pytest.approx(slope, abs=1e-9)


def test_empirical_order():
    h = [0.1, 0.05, 0.025]
    errors = [3 * step**2 for step in h]
    assert lcq.empirical_order(h, errors) == pytest.approx(2.0)


def test_positive_part():
    values = torch.tensor([-1.0, 0.0, 2.0], dtype=lcq.float_dtype)
    assert torch.equal(
        lcq.positive_part(values),
        torch.tensor([0.0, 0.0, 2.0], dtype=lcq.float_dtype),
    )
