from __future__ import annotations

from typing import Any, Callable, Sequence, TypeAlias, TypeVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    'T', 'F',

    'FloatArray', 'IntArray',

    'PointLike', 'PointsLike',

    'SphereFunc',

    'ArrayLike'
]

T = TypeVar('T')

F = TypeVar('F', bound=Callable[..., Any])

FloatArray: TypeAlias = NDArray[np.float64]
IntArray: TypeAlias = NDArray[np.intp]

PointLike: TypeAlias = Sequence[float] | FloatArray
"""A single point, in R^n or embedded in R^{n+1}."""

PointsLike: TypeAlias = Sequence[Sequence[float]] | FloatArray
"""A stack of points, one per row."""

SphereFunc: TypeAlias = Callable[[FloatArray], FloatArray]
"""Function of embedded sphere coordinates, shape (m, n + 1) -> (m,)."""
