"""Keyword arguments that exclude each other.

A radial field is built either from nodal values or from a function of the
radius, and a saddle search starts either from an endpoint or from an
initial path:

.. code-block:: python

    @one_and_only_one(["values", "function"])
    def build(grid, *, values=None, function=None):
        pass


    build(grid, values=v)  # OK
    build(grid, values=v, function=g)  # InputStructureError

Only keyword arguments are counted.
"""

from collections.abc import Callable
from functools import wraps

from ..errors import InputStructureError


def _exclusive(parameters: list[str], *, required: bool) -> Callable:
    """Decorator counting the not-None keyword arguments among parameters.

    More than one is always an error; none is an error when ``required``.
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            given = [
                key
                for key in parameters
                if kwargs.get(key, None) is not None
            ]
            if len(given) > 1:
                msg = (
                    f"{func.__name__} accepts at most one of {parameters},"
                    + f" got {given}"
                )
                raise InputStructureError(msg)
            if required and not given:
                msg = (
                    f"{func.__name__} requires one of {parameters} as a"
                    + " keyword argument"
                )
                raise InputStructureError(msg)
            return func(*args, **kwargs)

        # beartype reads the annotations of the wrapper
        wrapper.__annotations__ = func.__annotations__
        return wrapper

    return decorator


def one_and_only_one(parameters: list[str]) -> Callable:
    """Exactly one of ``parameters`` must be passed, by keyword, not None.

    Raises
    ------
    InputStructureError
        If none or several of them are given.
    """
    return _exclusive(parameters, required=True)


def no_more_than_one(parameters: list[str]) -> Callable:
    """At most one of ``parameters`` may be passed not None.

    Raises
    ------
    InputStructureError
        If several of them are given.
    """
    return _exclusive(parameters, required=False)
