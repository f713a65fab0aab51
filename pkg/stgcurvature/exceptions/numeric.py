from __future__ import annotations

from typing import Any

from ..types import FuncExceptT, SupportsString
from .base import CustomRuntimeError, CustomValueError

__all__ = [
    'ParameterRangeError',
    'NonPositiveError',
    'SymmetryError',
    'ResidualTooLargeError',
    'SingularSystemError',
    'InvalidConfigError'
]


class ParameterRangeError(CustomValueError):
    """Raised when a numeric parameter (dimension, exponent, resolution, tolerance) is out of range."""


class NonPositiveError(CustomValueError):
    """Raised when a quantity required to be strictly positive has a nonpositive entry."""

    def __init__(
        self, message: SupportsString, func: FuncExceptT | None = None, node: int | None = None,
        value: float | None = None, **kwargs: Any
    ) -> None:
        """
        :param message: Message of the error.
        :param func:    Function this error was raised from.
        :param node:    Index of the first offending node, if known.
        :param value:   Value found at that node.
        """

        self.node = node
        self.value = value

        super().__init__(message, func, None, **({'node': node, 'value': value} | kwargs))


class SymmetryError(CustomValueError):
    """Raised when a function required to be antipodally symmetric is not."""


class ResidualTooLargeError(CustomValueError):
    """Raised when an operation needs a critical point and gets a function with a large Euler–Lagrange residual."""


class SingularSystemError(CustomRuntimeError):
    """Raised when an unregularized linear solve hits a singular system."""


class InvalidConfigError(CustomValueError):
    """Raised when a configuration document is malformed or violates the problem hypotheses."""
