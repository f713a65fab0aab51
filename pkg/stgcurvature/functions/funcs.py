from __future__ import annotations

from typing import Any, Mapping, overload

from ..exceptions import CustomRuntimeError
from ..types import MISSING, MissingT, T

__all__ = [
    'fallback', 'mapping_fallback'
]


fallback_missing = object()


@overload
def fallback(value: T | None, fallback: T) -> T:
    ...


@overload
def fallback(value: T | None, fallback0: T | None, default: T) -> T:
    ...


@overload
def fallback(value: T | None, *fallbacks: T | None) -> T | MissingT:
    ...


@overload
def fallback(value: T | None, *fallbacks: T | None, default: T) -> T:
    ...


def fallback(value: T | None, *fallbacks: T | None, default: T = fallback_missing) -> T | MissingT:  # type: ignore
    """
    Utility function that returns a value or a fallback if the value is None.

    Example:

    .. code-block:: python

        >>> fallback(None, 1e-8)
        1e-08
        >>> fallback(1e-6, 1e-8)
        1e-06

    :param value:               Input value to evaluate. Can be None.
    :param fallbacks:           Values tried in order when the input value is None.

    :return:                    Input value or the first fallback that is not None.
    """

    if value is not None:
        return value

    for fallback in fallbacks:
        if fallback is not None:
            return fallback

    if default is not fallback_missing:
        return default
    elif len(fallbacks) > 2:
        return MISSING

    raise CustomRuntimeError('You need to specify a default/fallback value!', fallback)


def mapping_fallback(mapping: Mapping[str, Any] | None, key: str, default: T) -> T:
    """Look a key up in an optional (JSON) mapping, falling back to a default for missing or null entries."""

    if mapping is None:
        return default

    value = mapping.get(key, None)

    return default if value is None else value  # type: ignore[no-any-return]
