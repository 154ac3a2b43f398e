"""Linear operators with diagonal scalings."""

from __future__ import annotations

import torch

from ..errors import InvalidParameterError


class LinearOperator:
    """Matrix with optional input and output diagonal scalings.

    ``A @ x`` is ``output_scaling * (matrix @ (input_scaling * x))``; the
    scalings default to the identity.

    Parameters
    ----------
    matrix
        the (M, N) matrix to wrap
    input_scaling
        diagonal of shape (N,) applied before the matrix
    output_scaling
        diagonal of shape (M,) applied after the matrix
    """

    def __init__(
        self,
        matrix: torch.Tensor,
        input_scaling: torch.Tensor | None = None,
        output_scaling: torch.Tensor | None = None,
    ) -> None:
        M, N = matrix.shape
        if input_scaling is not None and input_scaling.shape != (N,):
            msg = f"Input scaling must have shape ({N},)"
            raise InvalidParameterError(msg)
        if output_scaling is not None and output_scaling.shape != (M,):
            msg = f"Output scaling must have shape ({M},)"
            raise InvalidParameterError(msg)

        self.matrix = matrix
        self.input_scaling = input_scaling
        self.output_scaling = output_scaling

    def __matmul__(self, other: torch.Tensor) -> torch.Tensor:
        """Apply to a vector or to a batch stored along the first dimension."""
        if other.shape[0] != self.matrix.shape[1]:
            msg = (
                f"Cannot apply a {tuple(self.shape)} operator to an input of"
                + f" shape {tuple(other.shape)}"
            )
            raise InvalidParameterError(msg)
        if other.ndim > 2:
            flat = self @ other.reshape(other.shape[0], -1)
            return flat.reshape(self.shape[0], *other.shape[1:])

        i_s = self.input_scaling if self.input_scaling is not None else 1
        o_s = self.output_scaling if self.output_scaling is not None else 1
        if other.ndim == 2:
            if self.input_scaling is not None:
                i_s = i_s.view(-1, 1)
            if self.output_scaling is not None:
                o_s = o_s.view(-1, 1)
        return o_s * (self.matrix @ (i_s * other))

    @property
    def T(self) -> LinearOperator:
        """Transposed operator."""
        return LinearOperator(
            self.matrix.T,
            input_scaling=self.output_scaling,
            output_scaling=self.input_scaling,
        )

    @property
    def shape(self) -> torch.Size:
        return self.matrix.shape

    def dense(self) -> torch.Tensor:
        """Matrix with the scalings folded in."""
        matrix = self.matrix
        if self.input_scaling is not None:
            matrix = matrix * self.input_scaling[None, :]
        if self.output_scaling is not None:
            matrix = matrix * self.output_scaling[:, None]
        return matrix
