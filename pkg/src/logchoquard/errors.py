"""Custom errors for the logchoquard package."""

from beartype.roar import BeartypeCallHintParamViolation
from jaxtyping import TypeCheckError

InputTypeError = (TypeCheckError, BeartypeCallHintParamViolation)


class LogChoquardError(Exception):
    """Base class of the errors raised by logchoquard."""


class InputStructureError(LogChoquardError):
    """Raised when the input structure is not valid."""


class NotFittedError(LogChoquardError):
    """Raised when a solver is used before being fitted."""


# Precondition violations


class InvalidParameterError(LogChoquardError, ValueError):
    """Raised when a parameter is outside its admissible envelope."""


class InvalidDimensionError(InvalidParameterError):
    """Raised when the dimension N is smaller than 2."""


class WrongDimensionError(InvalidParameterError):
    """Raised when an operation is only defined in another dimension."""


class InvalidExponentError(InvalidParameterError):
    """Raised when exponents violate a growth or scaling relation."""


class GridMisalignedError(InvalidParameterError):
    """Raised when a radius that must be a grid node is not."""


class KernelDomainError(InvalidParameterError):
    """Raised when a kernel is evaluated where it is unbounded."""


class NonpositiveFieldError(InvalidParameterError):
    """Raised when a strictly positive field is expected."""


class ConfigError(LogChoquardError, ValueError):
    """Raised when a run configuration cannot be parsed or validated.

    ``line`` is the line of the offending key in the file, when known.
    """

    def __init__(self, msg: str, line: int | None = None) -> None:
        if line is not None:
            msg = f"line {line}: {msg}"
        super().__init__(msg)
        self.line = line


# Numerical failures


class OverflowGuardError(LogChoquardError, ArithmeticError):
    """Raised when an exponential argument exceeds the overflow guard."""


class TailDivergenceError(LogChoquardError, ArithmeticError):
    """Raised when a tail integral beyond the grid cutoff diverges."""


class ToleranceNotReachedError(LogChoquardError, RuntimeError):
    """Raised when a series does not reach the requested tolerance."""


class UnreachableTargetError(LogChoquardError, RuntimeError):
    """Raised when a calibration target cannot be reached."""


class NoDescentError(LogChoquardError, RuntimeError):
    """Raised when no point with negative energy is found along a ray."""


class MaxIterationsError(LogChoquardError, RuntimeError):
    """Raised when an iterative solver hits its iteration cap."""


class PathCollapseError(LogChoquardError, RuntimeError):
    """Raised when the maximizer of a mountain-pass path is an endpoint."""
