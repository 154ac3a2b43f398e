"""Tests for the input validation decorators."""

from logging import info

import numpy as np
import pytest
import torch

import logchoquard as lcq
from logchoquard.errors import InputStructureError, InputTypeError
from logchoquard.types import Float1dTensor, Int1dTensor


@lcq.one_and_only_one(["values", "function"])
@lcq.typecheck
def func_one_and_only_one(
    values: float | None = None, function: float | None = None
):
    """One_and_only_one example."""
    info("values = %s", values)
    info("function = %s", function)


def test_one_and_only_one_decorator(func=func_one_and_only_one):
    """Test the one_and_only_one decorator.

    This test checks that the one_and_only_one decorator raises an error
    when the function is called with more than one of the arguments
    specified in the decorator or when none of the arguments is specified.

    """
    func(values=1.0)  # ok
    func(function=1.0)  # ok
    with pytest.raises(InputStructureError):
        func(2.0)  # not ok (must be passed as keyword)
    with pytest.raises(InputStructureError):
        func(values=1.0, function=1.0)  # not ok (both are specified)
    with pytest.raises(InputStructureError):
        func()  # not ok (no argument is specified)
    with pytest.raises(InputTypeError):
        func(values="dog")  # not ok : wrong type


@lcq.no_more_than_one(["endpoint", "initial_path"])
@lcq.typecheck
def func_no_more_than_one(
    endpoint: int | None = None, initial_path: int | None = None
):
    """No_more_than_one example."""
    info("endpoint = %s", endpoint)
    info("initial_path = %s", initial_path)


def test_no_more_than_one(func=func_no_more_than_one):
    """Test the no_more_than_one decorator.

    This test checks that the no_more_than_one decorator raises an error
    when the function is called with more than one of the arguments
    specified in the decorator.

    """
    func(endpoint=1)  # ok
    func(initial_path=1)  # ok
    func()  # ok
    func(2)  # ok (only keyword arguments are counted)
    with pytest.raises(InputStructureError):
        func(endpoint=1, initial_path=1)  # not ok (both are specified)
    with pytest.raises(InputTypeError):
        func(endpoint="dog")  # not ok : wrong type


@lcq.convert_inputs
@lcq.typecheck
def func_convert(a: Float1dTensor, b: Int1dTensor | None = None):
    return a if b is None else a[b]


def test_convert_inputs():
    """Numpy arrays become tensors with the package dtypes."""
    out = func_convert(np.array([0.5, 1.5], dtype=np.float32))
    assert isinstance(out, torch.Tensor)
    assert out.dtype == lcq.float_dtype
    out = func_convert(
        torch.tensor([0.5, 1.5, 2.5]), b=np.array([0, 2], dtype=np.int32)
    )
    assert torch.equal(out, torch.tensor([0.5, 2.5], dtype=lcq.float_dtype))
    with pytest.raises(InputTypeError):
        func_convert(np.zeros((2, 2)))


def test_typecheck_disabled(monkeypatch):
    """With type checking disabled the function is returned unchanged."""
    monkeypatch.setattr(lcq.globals, "typecheck_enabled", False)

    def unchecked(a: Float1dTensor):
        return a

    assert lcq.typecheck(unchecked) is unchecked
    assert unchecked("dog") == "dog"

    monkeypatch.setattr(lcq.globals, "typecheck_enabled", True)
    with pytest.raises(InputTypeError):
        lcq.typecheck(unchecked)("dog")


def test_exclusive_messages():
    """The error names the function and the conflicting arguments."""
    with pytest.raises(InputStructureError, match="func_one_and_only_one"):
        func_one_and_only_one()
    with pytest.raises(InputStructureError, match=r"got \['endpoint'"):
        func_no_more_than_one(endpoint=1, initial_path=2)
