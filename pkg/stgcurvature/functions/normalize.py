from __future__ import annotations

from fractions import Fraction
from typing import Iterator

import numpy as np

from ..types import F, FloatArray, PointLike, PointsLike, SupportsString

__all__ = [
    'as_points',
    'norm_func_name', 'norm_display_name'
]


def as_points(points: PointsLike | PointLike, dim: int | None = None) -> FloatArray:
    """
    Normalize a point or a stack of points to a 2D float64 array, one point per row.

    :param points:  A single point, or a sequence of points.
    :param dim:     Ambient dimension. Needed to tell a stack of scalars (points in R¹)
                    apart from a single point in higher dimension.

    :return:        Array of shape (count, dim).
    """

    arr = np.asarray(points, dtype=np.float64)

    if arr.ndim == 0:
        return arr.reshape(1, 1)

    if arr.ndim == 1:
        if dim == 1:
            return arr.reshape(-1, 1)

        return arr.reshape(1, -1)

    return arr


def norm_func_name(func_name: SupportsString | F) -> str:
    """Normalize a class, function, or other object to obtain its name"""

    if isinstance(func_name, str):
        return func_name.strip()

    if not isinstance(func_name, type) and not callable(func_name):
        return str(func_name).strip()

    func = func_name

    if hasattr(func_name, '__name__'):
        func_name = func.__name__
    elif hasattr(func_name, '__qualname__'):
        func_name = func.__qualname__

    if callable(func):
        if hasattr(func, '__self__'):
            func = func.__self__ if isinstance(func.__self__, type) else func.__self__.__class__
            func_name = f'{func.__name__}.{func_name}'

    return str(func_name).strip()


def norm_display_name(obj: object) -> str:
    """Get a fancy name from any object. Floats and small arrays are printed compactly."""

    if isinstance(obj, Iterator):
        return ', '.join(norm_display_name(v) for v in obj).strip()

    if isinstance(obj, Fraction):
        return f'{obj.numerator}/{obj.denominator}'

    if isinstance(obj, (float, np.floating)):
        return f'{float(obj):.6g}'

    if isinstance(obj, np.ndarray):
        if obj.size > 8:
            return f'array(shape={obj.shape}, min={obj.min():.6g}, max={obj.max():.6g})'

        return '[' + ', '.join(norm_display_name(v) for v in obj.ravel().tolist()) + ']'

    if isinstance(obj, dict):
        return '(' + ', '.join(f'{k}={norm_display_name(v)}' for k, v in obj.items()) + ')'

    return norm_func_name(obj)
