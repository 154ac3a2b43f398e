"""Converters for arguments."""

from functools import wraps

import numpy as np
import torch

from ..types import float_dtype, int_dtype


def _convert_arg(x):
    """Convert an array argument to a tensor with the package dtypes.

    Numpy arrays become tensors, floating tensors are cast to the package
    float dtype (float64 by default) and integer tensors to int64. Any other
    argument is returned unchanged.

    Parameters
    ----------
    x
        the argument

    Raises
    ------
    ValueError
        if the input is a complex array

    Returns
    -------
    Any
        the converted argument
    """
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            msg = "Complex arrays are not supported"
            raise ValueError(msg)
        x = torch.from_numpy(np.ascontiguousarray(x))

    if isinstance(x, torch.Tensor):
        if torch.is_complex(x):
            msg = "Complex arrays are not supported"
            raise ValueError(msg)
        if torch.is_floating_point(x):
            if x.dtype != float_dtype:
                return x.to(float_dtype)
        elif x.dtype != int_dtype and x.dtype != torch.bool:
            return x.to(int_dtype)

    return x


def convert_inputs(func: callable):
    """Convert a function's array inputs to tensors.

    Numpy arrays are converted to torch tensors with the package dtypes
    before the call, so that the function can be used with numpy arrays or
    torch tensors indifferently. Used together with `typecheck`, it must be
    the outer decorator:

    .. code-block:: python

        import numpy as np
        import logchoquard as lcq
        from logchoquard.types import Float1dTensor


        @lcq.convert_inputs
        @lcq.typecheck
        def foo(a: Float1dTensor) -> Float1dTensor:
            return a


        foo(np.zeros(10))  # OK
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        new_args = [_convert_arg(arg) for arg in args]
        new_kwargs = {
            key: _convert_arg(value) for key, value in kwargs.items()
        }
        return func(*new_args, **new_kwargs)

    return wrapper
