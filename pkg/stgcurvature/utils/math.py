from __future__ import annotations

from math import pi

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import gamma

__all__ = [
    'sphere_area',

    'relative_discrepancy'
]


def sphere_area(n: int) -> float:
    """Surface measure |S^n| of the unit n-sphere in R^{n+1}; |S^0| = 2."""

    return float(2 * pi ** ((n + 1) / 2) / gamma((n + 1) / 2))


def relative_discrepancy(lhs: ArrayLike, rhs: ArrayLike, *, floor: float = 0.0) -> float:
    """
    Largest entrywise |lhs - rhs| relative to the larger of the two magnitudes.

    Entries where both sides are below ``floor`` in magnitude compare as exact; if both sides
    vanish identically the discrepancy is 0.
    """

    lhs_a = np.asarray(lhs, dtype=np.float64)
    rhs_a = np.asarray(rhs, dtype=np.float64)

    scale = np.maximum(np.abs(lhs_a), np.abs(rhs_a))
    diff = np.abs(lhs_a - rhs_a)

    mask = scale > floor

    if not mask.any():
        return 0.0

    return float(np.max(diff[mask] / scale[mask]))
