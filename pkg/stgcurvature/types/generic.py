from __future__ import annotations

from enum import Enum, auto
from typing import Any, Callable, Literal, TypeAlias

__all__ = [
    'MissingT', 'MISSING',

    'FuncExceptT'
]


class MissingTBase(Enum):
    MissingT = auto()


MissingT: TypeAlias = Literal[MissingTBase.MissingT]
MISSING = MissingTBase.MissingT

FuncExceptT = str | Callable[..., Any] | tuple[Callable[..., Any] | str, str]
"""
This type is used in specific functions that can throw an exception.
```
def check_positive(f: GridFunction, *, func: FuncExceptT) -> None:
    ...
    if (f.values <= 0).any():
        raise NonPositiveError('f must be strictly positive!', func)

def weighted_p_norm(ctx, f) -> float:
    check_positive(f, func=weighted_p_norm)
```
If an error occurs, this will print a clear error ->\n
``ValueError: (weighted_p_norm) f must be strictly positive!``
"""
