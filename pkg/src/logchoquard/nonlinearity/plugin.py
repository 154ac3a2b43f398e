"""Nonlinearity given by a user supplied evaluator of f."""

from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np
import torch
from scipy import integrate

from ..errors import InvalidParameterError
from ..input_validation import typecheck
from ..types import FloatTensor, Number, float_dtype
from .base import BaseNonlinearity

logger = logging.getLogger(__name__)


class CallableNonlinearity(BaseNonlinearity):
    """Nonlinearity from a numpy evaluator of f.

    F is obtained by adaptive quadrature: the cumulative integral is cached
    at the nodes of a log-spaced reference grid and completed by one
    quadrature from the closest node below. f' is taken from ``df`` when
    given, from centered finite differences otherwise.

    Parameters
    ----------
    f
        vectorized function of a float64 array, positive on (0, inf)
    df
        derivative of f (optional)
    t_min, t_max
        range of the reference grid
    n_nodes
        number of reference nodes
    rtol
        relative tolerance of the quadratures

    Examples
    --------
    >>> nl = lcq.CallableNonlinearity(lambda t: t**3)
    >>> round(float(nl.primitive(2.0)), 12)
    4.0
    """

    @typecheck
    def __init__(
        self,
        f: Callable,
        df: Callable | None = None,
        *,
        t_min: Number = 1e-6,
        t_max: Number = 1e3,
        n_nodes: int = 200,
        rtol: Number = 1e-12,
    ) -> None:
        if not 0 < t_min < t_max:
            msg = f"Invalid reference range [{t_min}, {t_max}]"
            raise InvalidParameterError(msg)
        self.function = f
        self.derivative = df
        self.rtol = float(rtol)
        self.reference = np.concatenate(
            [[0.0], np.geomspace(t_min, t_max, n_nodes)]
        )
        pieces = [
            self._quad(a, b)
            for a, b in zip(self.reference[:-1], self.reference[1:])
        ]
        self.cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
        logger.debug("Cached the primitive on %d reference nodes", n_nodes)

    def _quad(self, a: float, b: float) -> float:
        value, _ = integrate.quad(
            lambda t: float(self.function(np.float64(t))),
            a,
            b,
            epsabs=0.0,
            epsrel=self.rtol,
            limit=200,
        )
        return value

    def _numpy_f(self, t: np.ndarray) -> np.ndarray:
        values = np.asarray(self.function(np.where(t > 0, t, 1.0)))
        return np.where(t > 0, values, 0.0)

    def _f(self, t: FloatTensor) -> FloatTensor:
        values = self._numpy_f(t.detach().cpu().numpy())
        return torch.as_tensor(values, dtype=float_dtype)

    def _df(self, t: FloatTensor) -> FloatTensor:
        tn = t.detach().cpu().numpy()
        if self.derivative is not None:
            values = np.asarray(self.derivative(np.where(tn > 0, tn, 1.0)))
        else:
            h = 1e-6 * np.maximum(np.abs(tn), 1e-3)
            values = (self._numpy_f(tn + h) - self._numpy_f(tn - h)) / (2 * h)
        values = np.where(tn > 0, values, 0.0)
        return torch.as_tensor(values, dtype=float_dtype)

    def _primitive(self, t: FloatTensor) -> FloatTensor:
        tn = t.detach().cpu().numpy()
        flat = tn.reshape(-1)
        out = np.zeros_like(flat)
        for i, value in enumerate(flat):
            if value <= 0:
                continue
            k = np.searchsorted(self.reference, value, side="right") - 1
            out[i] = self.cumulative[k] + self._quad(self.reference[k], value)
        return torch.as_tensor(out.reshape(tn.shape), dtype=float_dtype)

    def as_dict(self) -> dict:
        return {
            "kind": "callable",
            "function": getattr(
                self.function, "__name__", repr(self.function)
            ),
        }
