"""Parameter envelope of the logarithmic Choquard problem."""

from __future__ import annotations

from ..errors import InvalidDimensionError, InvalidParameterError
from ..input_validation import typecheck
from ..types import Number


class ProblemParams:
    """Dimension, fractional order, growth exponent and potential bounds.

    The envelope is the one of the existence theory: the energy space is
    W^{s,N/s}(R^N) with the critical exponent p = N/s, the growth exponent
    tau lives in ((1 - 2/N) s, s) and the potential is pinched between two
    positive constants.

    Parameters
    ----------
    N
        dimension, N >= 2
    s
        fractional order in (0, 1)
    tau
        growth exponent in ((1 - 2/N) s, s)
    V_lower
        lower bound of the potential, positive
    V_upper
        upper bound of the potential, V_upper >= V_lower

    Raises
    ------
    InvalidDimensionError
        if N < 2
    InvalidParameterError
        if s, tau or the potential bounds are outside their envelope

    Examples
    --------
    >>> params = lcq.ProblemParams(N=2, s=0.5, tau=0.25)
    >>> params.p
    4.0
    """

    @typecheck
    def __init__(
        self,
        *,
        N: int,
        s: Number,
        tau: Number,
        V_lower: Number = 1.0,
        V_upper: Number = 1.0,
    ) -> None:
        if N < 2:
            msg = f"The dimension N must be at least 2, got N={N}"
            raise InvalidDimensionError(msg)
        if not 0 < s < 1:
            msg = f"The fractional order s must lie in (0, 1), got s={s}"
            raise InvalidParameterError(msg)
        lower = (1 - 2 / N) * s
        if not lower < tau < s:
            msg = (
                f"tau={tau} is outside the growth window ((1-2/N)s, s)"
                + f" = ({lower}, {s})"
            )
            raise InvalidParameterError(msg)
        if not 0 < V_lower <= V_upper:
            msg = (
                "The potential bounds must satisfy 0 < V_lower <= V_upper,"
                + f" got V_lower={V_lower}, V_upper={V_upper}"
            )
            raise InvalidParameterError(msg)

        self.N = N
        self.s = float(s)
        self.tau = float(tau)
        self.V_lower = float(V_lower)
        self.V_upper = float(V_upper)

    @property
    def p(self) -> float:
        """Critical integrability exponent N/s."""
        return self.N / self.s

    @property
    def gamma_exp(self) -> float:
        """Exponent N/(N - s) of the Moser-Trudinger functional."""
        return self.N / (self.N - self.s)

    @property
    def tau_window(self) -> tuple[float, float]:
        """Admissible interval ((1 - 2/N) s, s) for tau."""
        return ((1 - 2 / self.N) * self.s, self.s)

    @property
    def ps_factor(self) -> float:
        """tau - (1 - 2/N) s, the factor of the uniform norm bound."""
        return self.tau - (1 - 2 / self.N) * self.s

    def as_dict(self) -> dict[str, float]:
        """Plain dictionary of the parameters."""
        return {
            "N": self.N,
            "s": self.s,
            "tau": self.tau,
            "V_lower": self.V_lower,
            "V_upper": self.V_upper,
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProblemParams):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash(tuple(self.as_dict().values()))

    def __repr__(self) -> str:
        fields = ", ".join(f"{k}={v}" for k, v in self.as_dict().items())
        return f"ProblemParams({fields})"
