from __future__ import annotations

from abc import abstractmethod
from typing import Protocol, runtime_checkable

__all__ = [
    'SupportsString'
]


@runtime_checkable
class SupportsString(Protocol):
    @abstractmethod
    def __str__(self) -> str:
        ...
