from __future__ import annotations

from typing import overload

import numpy as np

from ..exceptions import ParameterRangeError
from ..functions import as_points
from ..kernels import check_alpha, chordal_distance
from ..types import FloatArray, PointLike, PointsLike

__all__ = [
    'inverse_projection', 'stereographic_projection',

    'conformal_factor',

    'verify_distance_identity'
]


def inverse_projection(x: PointsLike | PointLike, n: int | None = None) -> FloatArray:
    """
    Map points of R^n onto the unit sphere S^n ⊂ R^{n+1}:

        ξ^j = 2 x^j / (1 + |x|²),  ξ^{n+1} = (1 - |x|²) / (1 + |x|²).

    0 goes to the north pole (0, ..., 0, 1), the unit sphere to the equator, and |x| → ∞ to the south pole.

    :param x:   A point, or a stack of points one per row.
    :param n:   Dimension of the flat space. Only needed for a 1D array of points on the line.

    :return:    Array of the same leading shape as x, with one more coordinate.
    """

    pts = as_points(x, n)

    sq = np.sum(pts * pts, axis=1)
    denom = 1 + sq

    xi = np.concatenate([2 * pts / denom[:, None], ((1 - sq) / denom)[:, None]], axis=1)

    if np.ndim(x) == 0 or (np.ndim(x) == 1 and n != 1):
        return xi[0]

    return xi


def stereographic_projection(xi: PointsLike | PointLike) -> FloatArray:
    """
    Inverse of :py:func:`inverse_projection`: x^j = ξ^j / (1 + ξ^{n+1}).

    :raises ParameterRangeError:    A point is the south pole, which has no image.
    """

    pts = as_points(xi)

    denom = 1 + pts[:, -1]

    if np.any(denom <= 0):
        raise ParameterRangeError(
            'The south pole has no stereographic image!', stereographic_projection,
            int(np.flatnonzero(denom <= 0)[0])
        )

    x = pts[:, :-1] / denom[:, None]

    if np.ndim(xi) == 1:
        return x[0]

    return x


@overload
def conformal_factor(x: PointLike, n: int, alpha: float) -> float:
    ...


@overload
def conformal_factor(x: PointsLike, n: int, alpha: float) -> FloatArray:
    ...


def conformal_factor(x: PointsLike | PointLike, n: int, alpha: float) -> float | FloatArray:
    """
    φ(x) = (2 / (1 + |x|²))^{(n - α)/2}, the factor relating the flat and round operators.

    A single point (or a scalar on the line) gives a float, a stack of points an array.
    """

    check_alpha(n, alpha, conformal_factor)

    pts = as_points(x, n)

    phi = (2 / (1 + np.sum(pts * pts, axis=1))) ** ((n - alpha) / 2)

    if np.ndim(x) == 0 or (np.ndim(x) == 1 and n != 1):
        return float(phi[0])

    return phi


def verify_distance_identity(x: PointsLike | PointLike, y: PointsLike | PointLike, n: int | None = None) -> float:
    """
    Residual of |S(x) - S(y)| = [4 |x - y|² / ((1 + |x|²)(1 + |y|²))]^{1/2}.

    Pairs are matched row by row; the largest residual is returned.
    """

    xs, ys = as_points(x, n), as_points(y, n)

    lhs = chordal_distance(inverse_projection(xs, xs.shape[1]), inverse_projection(ys, ys.shape[1]))

    rhs = np.sqrt(
        4 * np.sum((xs - ys) ** 2, axis=1) / ((1 + np.sum(xs * xs, axis=1)) * (1 + np.sum(ys * ys, axis=1)))
    )

    return float(np.max(np.abs(lhs - rhs)))
