"""Runtime type checking of the public functions."""

from beartype import beartype
from jaxtyping import jaxtyped

from .. import globals as _globals


def typecheck(func):
    """Check the annotations of ``func`` at every call.

    jaxtyping checks the dtypes and shapes of the tensor annotations,
    beartype everything else. When ``typecheck_enabled`` is False at
    decoration time (``LOGCHOQUARD_TYPECHECK=0``), ``func`` is returned
    unchanged.

    Parameters
    ----------
    func : callable
        The function to decorate.

    Returns
    -------
    callable
        The decorated function.
    """
    if not _globals.typecheck_enabled:
        return func
    return jaxtyped(typechecker=beartype)(func)
