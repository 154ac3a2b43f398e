"""Abstract class for nonlinearities f with primitive F."""

from __future__ import annotations

import torch

from ..input_validation import typecheck
from ..types import FloatTensor, Number
from ..utils import as_tensor


class _Primitive(torch.autograd.Function):
    """F(t) with derivative f(t) for the backward pass."""

    @staticmethod
    def forward(ctx, t, nonlinearity):
        ctx.save_for_backward(t)
        ctx.nonlinearity = nonlinearity
        return nonlinearity._primitive(t.detach())

    @staticmethod
    def backward(ctx, grad_output):
        (t,) = ctx.saved_tensors
        return grad_output * ctx.nonlinearity._f(t.detach()), None


class BaseNonlinearity:
    """Base class for the nonlinearities f of the Choquard term.

    A nonlinearity vanishes on (-inf, 0] and is positive on (0, inf).
    Subclasses implement `_f`, `_df` and `_primitive` on tensors; the public
    evaluators accept numbers, arrays or tensors and return tensors. The
    primitive is differentiable, its derivative being f.

    This class is not meant to be used directly, if the constructor is called
    it raises an error.

    Raises
    ------
    NotImplementedError
        this class is abstract and should not be instantiated
    """

    @typecheck
    def __init__(self) -> None:
        msg = (
            "BaseNonlinearity is an abstract class and should not be"
            + " instantiated"
        )
        raise NotImplementedError(msg)

    def _f(self, t: FloatTensor) -> FloatTensor:
        raise NotImplementedError

    def _df(self, t: FloatTensor) -> FloatTensor:
        raise NotImplementedError

    def _primitive(self, t: FloatTensor) -> FloatTensor:
        raise NotImplementedError

    def f(self, t: FloatTensor | Number) -> FloatTensor:
        """The nonlinearity f(t)."""
        return self._f(as_tensor(t))

    def df(self, t: FloatTensor | Number) -> FloatTensor:
        """Derivative f'(t)."""
        return self._df(as_tensor(t))

    def primitive(self, t: FloatTensor | Number) -> FloatTensor:
        """Primitive F(t) = int_0^t f, differentiable with derivative f."""
        if not (isinstance(t, torch.Tensor) and t.requires_grad):
            t = as_tensor(t)
        return _Primitive.apply(t, self)

    def ratio(self, t: FloatTensor | Number) -> FloatTensor:
        """Ambrosetti-Rabinowitz type ratio F(t) f'(t) / f(t)^2 for t > 0."""
        t = as_tensor(t)
        return self._primitive(t) * self._df(t) / self._f(t) ** 2

    def log_f(self, t: FloatTensor | Number) -> FloatTensor:
        """log f(t) for t > 0."""
        return torch.log(self.f(t))

    def log_primitive(self, t: FloatTensor | Number) -> FloatTensor:
        """log F(t) for t > 0."""
        return torch.log(self._primitive(as_tensor(t)))

    def as_dict(self) -> dict:
        return {"kind": type(self).__name__}
