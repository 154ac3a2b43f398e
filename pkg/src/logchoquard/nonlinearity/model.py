"""Model nonlinearity f(t) = lambda t^q exp(alpha t^{N/(N-s)})."""

from __future__ import annotations

import logging
from functools import cache, lru_cache
from warnings import warn

import numpy as np
import torch
from numpy.polynomial import Chebyshev
from scipy import integrate

from ..constants import alpha_star_upper
from ..errors import (
    InvalidExponentError,
    InvalidParameterError,
    OverflowGuardError,
)
from ..input_validation import typecheck
from ..types import FloatTensor, Number, float_dtype
from .base import BaseNonlinearity

logger = logging.getLogger(__name__)

# exp(W) is evaluated directly up to this exponent
EXP_GUARD = 700.0
# scale of the map W = W_SCALE z / (1 - z) used by the interpolant
W_SCALE = 10.0


def _shape_integral(W: float, a: float) -> float:
    """int_0^1 xi^{a-1} exp(-W (1 - xi)) d xi by adaptive quadrature."""
    value, _ = integrate.quad(
        lambda xi: xi ** (a - 1) * np.exp(-W * (1 - xi)),
        0.0,
        1.0,
        epsabs=0.0,
        epsrel=1e-13,
        limit=400,
        points=[max(0.0, 1 - 10 / W)] if W > 10 else None,
    )
    return value


class ShapeFactor:
    """Interpolant of rho(W) = (1/gamma) int_0^1 xi^{a-1} e^{-W(1-xi)} d xi.

    The primitive of the model family is F(t) = rho(W) t f(t) with
    W = alpha t^gamma and a = (q + 1) / gamma. On [0, EXP_GUARD] the smooth
    function h = gamma (a + W) rho(W), equal to 1 at 0 and at infinity, is
    interpolated by a Chebyshev series in z = W / (W + W_SCALE) whose degree
    is doubled until the relative error at the midpoints is below ``rtol``.
    Beyond, the asymptotic expansion in 1/W is used.
    """

    def __init__(self, a: float, gamma: float, rtol: float = 1e-11) -> None:
        self.a = a
        self.gamma = gamma
        z_max = EXP_GUARD / (EXP_GUARD + W_SCALE)

        def h(z):
            z = np.atleast_1d(z)
            W = W_SCALE * z / (1 - z)
            values = np.array([_shape_integral(w, a) for w in W])
            return (a + W) * values

        degree = 32
        while True:
            series = Chebyshev.interpolate(h, degree, domain=[0.0, z_max])
            check = np.linspace(0.0, z_max, 2 * degree + 1)[1::2]
            error = np.max(np.abs(series(check) / h(check) - 1))
            logger.debug(
                "Shape factor interpolant: degree %d, error %.2e",
                degree,
                error,
            )
            if error < rtol or degree >= 512:
                break
            degree *= 2
        if error >= rtol:
            warn(
                f"Shape factor interpolant reached relative error {error:.2e}"
                + f" > {rtol:.0e}",
                stacklevel=2,
            )
        self.series = series
        self.degree = degree
        self.error = float(error)

    def __call__(self, W: np.ndarray) -> np.ndarray:
        W = np.asarray(W, dtype=np.float64)
        a, gamma = self.a, self.gamma
        out = np.empty_like(W)
        inside = W <= EXP_GUARD
        Wi = W[inside]
        out[inside] = self.series(Wi / (Wi + W_SCALE)) / (gamma * (a + Wi))
        Wo = W[~inside]
        # asymptotic series of int_0^1 (1 - eta)^{a-1} e^{-W eta} d eta
        total = np.zeros_like(Wo)
        term = 1 / Wo
        for k in range(8):
            total += term
            term = -term * (a - 1 - k) / Wo
        out[~inside] = total / gamma
        return out


@lru_cache(maxsize=32)
def shape_factor(a: float, gamma: float) -> ShapeFactor:
    logger.info(
        "Building the primitive interpolant for a=%g, gamma=%g", a, gamma
    )
    return ShapeFactor(a, gamma)


@cache
def _alpha_star(N: int, s: float) -> float:
    return alpha_star_upper(N, s).value


class ModelNonlinearity(BaseNonlinearity):
    """f(t) = lambda t^q exp(alpha t^gamma) for t > 0, 0 otherwise.

    gamma = N / (N - s) is the Moser-Trudinger exponent. The primitive is
    F(t) = rho(alpha t^gamma) t f(t) where rho is the `ShapeFactor`, so
    that F f' / f^2 = rho(W) (q + gamma W) with W = alpha t^gamma.

    Parameters
    ----------
    N
        dimension
    s
        fractional order
    lam
        amplitude lambda > 0
    alpha
        exponential rate, 0 < alpha <= alpha*_{s,N}
    q
        power at the origin, q > N/s - 1

    Raises
    ------
    InvalidExponentError
        if q <= N/s - 1
    InvalidParameterError
        if lam or alpha is not positive
    """

    @typecheck
    def __init__(
        self,
        *,
        N: int,
        s: Number,
        lam: Number = 1.0,
        alpha: Number = 1.0,
        q: Number = 10.0,
    ) -> None:
        if q <= N / s - 1:
            msg = (
                f"The power q must exceed N/s - 1 = {N / s - 1} so that"
                + f" f(t) = o(t^(N/s-1)) at 0, got q={q}"
            )
            raise InvalidExponentError(msg)
        if lam <= 0 or alpha <= 0:
            msg = f"lambda and alpha must be positive, got {lam} and {alpha}"
            raise InvalidParameterError(msg)
        if alpha > _alpha_star(N, float(s)):
            warn(
                f"alpha={alpha} exceeds the Trudinger-Moser bound"
                + f" {_alpha_star(N, float(s)):.6g}",
                stacklevel=2,
            )
        self.N = N
        self.s = float(s)
        self.lam = float(lam)
        self.alpha = float(alpha)
        self.q = float(q)
        self.gamma_exp = N / (N - s)
        a = (self.q + 1) / self.gamma_exp
        self.shape = shape_factor(a, self.gamma_exp)

    def _split(self, t: FloatTensor, guard: bool = True):
        positive = t > 0
        tp = torch.where(positive, t, torch.ones_like(t))
        W = self.alpha * tp**self.gamma_exp
        if guard and torch.any(W[positive] > EXP_GUARD):
            msg = (
                f"exp argument {float(W[positive].max()):.6g} exceeds the"
                + f" overflow guard {EXP_GUARD}, use the log-space evaluators"
            )
            raise OverflowGuardError(msg)
        return positive, tp, W

    def rho(self, t: FloatTensor | Number) -> FloatTensor:
        """Shape factor F(t) / (t f(t)), equal to 1/(q+1) at 0."""
        t = torch.as_tensor(t, dtype=float_dtype)
        _, _, W = self._split(t, guard=False)
        values = self.shape(W.detach().cpu().numpy())
        return torch.as_tensor(values, dtype=float_dtype)

    def _f(self, t: FloatTensor) -> FloatTensor:
        positive, tp, W = self._split(t)
        values = self.lam * tp**self.q * torch.exp(W)
        return torch.where(positive, values, torch.zeros_like(values))

    def _df(self, t: FloatTensor) -> FloatTensor:
        positive, tp, W = self._split(t)
        values = (
            self.lam
            * tp ** (self.q - 1)
            * torch.exp(W)
            * (self.q + self.gamma_exp * W)
        )
        return torch.where(positive, values, torch.zeros_like(values))

    def _primitive(self, t: FloatTensor) -> FloatTensor:
        positive, tp, _ = self._split(t)
        values = self.rho(tp) * tp * self._f(tp)
        return torch.where(positive, values, torch.zeros_like(values))

    def ratio(self, t: FloatTensor | Number) -> FloatTensor:
        """F f' / f^2 = rho(W) (q + gamma W), valid for every t > 0."""
        t = torch.as_tensor(t, dtype=float_dtype)
        _, _, W = self._split(t, guard=False)
        return self.rho(t) * (self.q + self.gamma_exp * W)

    def log_f(self, t: FloatTensor | Number) -> FloatTensor:
        t = torch.as_tensor(t, dtype=float_dtype)
        _, tp, W = self._split(t, guard=False)
        return np.log(self.lam) + self.q * torch.log(tp) + W

    def log_primitive(self, t: FloatTensor | Number) -> FloatTensor:
        t = torch.as_tensor(t, dtype=float_dtype)
        _, tp, _ = self._split(t, guard=False)
        return torch.log(self.rho(tp)) + torch.log(tp) + self.log_f(tp)

    def with_amplitude(self, lam: Number) -> ModelNonlinearity:
        """Same nonlinearity with another amplitude."""
        return ModelNonlinearity(
            N=self.N, s=self.s, lam=lam, alpha=self.alpha, q=self.q
        )

    def as_dict(self) -> dict:
        return {
            "kind": "model",
            "N": self.N,
            "s": self.s,
            "lambda": self.lam,
            "alpha": self.alpha,
            "q": self.q,
            "gamma": self.gamma_exp,
        }

    def __repr__(self) -> str:
        return (
            f"ModelNonlinearity(N={self.N}, s={self.s}, lam={self.lam:.6g},"
            + f" alpha={self.alpha}, q={self.q})"
        )


@typecheck
def make_model_nonlinearity(
    N: int,
    s: Number,
    lam: Number = 1.0,
    alpha: Number = 1.0,
    q: Number = 10.0,
) -> ModelNonlinearity:
    """Model nonlinearity lambda t^q exp(alpha t^{N/(N-s)}).

    Raises
    ------
    InvalidExponentError
        if q <= N/s - 1

    Examples
    --------
    >>> nl = lcq.make_model_nonlinearity(2, 0.5, lam=1.0, alpha=1.0, q=4.0)
    >>> float(nl.f(1.0))  # e
    2.718281828459045
    """
    return ModelNonlinearity(N=N, s=s, lam=lam, alpha=alpha, q=q)
