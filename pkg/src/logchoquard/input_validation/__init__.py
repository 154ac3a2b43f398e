"""Input validation module

This module contains the input validation decorators used in the library.

Notes
-----
When writing a new decorator, use `functools.wraps` so that the decorated
function keeps its metadata (name, docstring, annotations). Beartype relies
on the annotations to perform type checking.
"""

from .converters import convert_inputs
from .notnone_rules import no_more_than_one, one_and_only_one
from .typechecking import typecheck
