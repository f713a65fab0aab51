from __future__ import annotations

from typing import Any, Iterable

from ..types import FuncExceptT, SupportsString, T
from .base import CustomValueError

__all__ = [
    'MismatchError', 'GridMismatchError'
]


class MismatchError(CustomValueError):
    """Raised when there's a mismatch between two or more values."""

    @classmethod
    def _item_to_name(cls, item: Any) -> str:
        return str(item)

    @classmethod
    def _reduce(cls, items: Iterable[T]) -> tuple[str]:
        return tuple[str](dict.fromkeys(map(cls._item_to_name, items)).keys())  # type: ignore

    def __init__(
        self, func: FuncExceptT, items: Iterable[T], message: SupportsString = 'All items must be equal!',
        reason: Any = '{reduced_items}', **kwargs: Any
    ) -> None:
        super().__init__(message, func, reason, **kwargs, reduced_items=iter(self._reduce(items)))


class GridMismatchError(MismatchError):
    """Raised when a grid function is used with a grid (or array) it does not live on."""

    @classmethod
    def _item_to_name(cls, item: Any) -> str:
        if hasattr(item, 'n') and hasattr(item, 'resolution'):
            return f'S^{item.n} grid (resolution={item.resolution}, id={id(item):#x})'

        return str(item)

    def __init__(
        self, func: FuncExceptT, items: Iterable[T],
        message: SupportsString = 'Grid functions must live on the same grid!', **kwargs: Any
    ) -> None:
        super().__init__(func, items, message, **kwargs)

    @classmethod
    def check_same(cls, func: FuncExceptT, *grids: Any) -> None:
        """Raise unless every passed grid is the very same object."""

        if any(grid is not grids[0] for grid in grids[1:]):
            raise cls(func, grids)

    @classmethod
    def check_length(cls, func: FuncExceptT, expected: int, *lengths: int) -> None:
        """Raise unless every length equals the expected node count."""

        if any(length != expected for length in lengths):
            raise cls(
                func, (expected, *lengths), 'Array lengths must match the node count!'
            )
