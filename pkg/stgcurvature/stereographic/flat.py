from __future__ import annotations

from dataclasses import dataclass
from math import pi
from typing import Iterable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.spatial.distance import cdist

from ..exceptions import GridMismatchError, ParameterRangeError
from ..functions import as_points
from ..kernels import check_alpha, normalization_constant
from ..types import FloatArray, PointsLike

__all__ = [
    'FlatGrid',

    'radial_rule', 'build_flat_grid',

    'flat_potential', 'apply_flat_operator'
]


@dataclass(frozen=True, eq=False)
class FlatGrid:
    """Quadrature nodes on the ball |x| <= truncation_radius of R^n."""

    n: int
    points: FloatArray
    weights: FloatArray
    truncation_radius: float

    def __post_init__(self) -> None:
        GridMismatchError.check_length(self.__class__, self.weights.size, self.points.shape[0])

        if np.any(self.weights <= 0):
            raise ParameterRangeError('Flat quadrature weights must be positive!', self.__class__)

        if np.any(np.linalg.norm(self.points, axis=1) > self.truncation_radius):
            raise ParameterRangeError('Flat nodes must lie inside the truncation ball!', self.__class__)

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def __len__(self) -> int:
        return self.size


def radial_rule(
    truncation_radius: float, core_radius: float = 1.0, core_panels: int = 8, growth: float = 1.25,
    order: int = 16, breakpoints: Iterable[float] = ()
) -> tuple[FloatArray, FloatArray]:
    """
    Composite Gauss–Legendre rule on [0, truncation_radius].

    Panels are uniform on [0, core_radius]; past it each panel is ``growth`` times wider than the last,
    the final one clipped at the truncation radius. Extra breakpoints split the panels containing them.

    :return:    Nodes and weights for ∫_0^T g(r) dr.
    """

    if not 0 < core_radius <= truncation_radius:
        raise ParameterRangeError(
            'Core radius must be in (0, truncation radius]!', radial_rule, core_radius
        )

    if core_panels < 1 or order < 1 or growth < 1:
        raise ParameterRangeError(
            'Panels and order must be positive and growth at least 1!', radial_rule,
            dict(core_panels=core_panels, order=order, growth=growth)
        )

    width = core_radius / core_panels
    edges = list(np.linspace(0.0, core_radius, core_panels + 1))

    while edges[-1] < truncation_radius:
        width *= growth
        edges.append(min(edges[-1] + width, truncation_radius))

    extra = [b for b in breakpoints if 0 < b < truncation_radius]

    edges_a = np.unique(np.concatenate([edges, extra]))

    t, w = leggauss(order)

    left, right = edges_a[:-1, None], edges_a[1:, None]
    half = (right - left) / 2

    return (left + half * (t + 1)).ravel(), (half * w).ravel()


def build_flat_grid(
    n: int, truncation_radius: float, core_radius: float = 1.0, core_panels: int = 8, growth: float = 1.25,
    order: int = 16, angles: int = 64, breakpoints: Iterable[float] = ()
) -> FlatGrid:
    """
    Graded quadrature on the ball of radius ``truncation_radius`` in R^n, n = 1 or 2.

    The line mirrors the radial rule to both half-lines. The plane is a polar product of the radial rule
    with ``angles`` uniform angles; the Jacobian r is folded into the weights.

    :raises ParameterRangeError:    n is neither 1 nor 2, or the rule parameters are out of range.
    """

    if n not in (1, 2):
        raise ParameterRangeError('Flat grids are available for n = 1 and n = 2 only!', build_flat_grid, n)

    r, w = radial_rule(truncation_radius, core_radius, core_panels, growth, order, breakpoints)

    if n == 1:
        points = np.concatenate([-r[::-1], r])[:, None]
        weights = np.concatenate([w[::-1], w])
    else:
        if angles < 3:
            raise ParameterRangeError('At least 3 angles are needed!', build_flat_grid, angles)

        phi = 2 * pi * np.arange(angles) / angles

        points = np.stack([
            np.outer(r, np.cos(phi)).ravel(), np.outer(r, np.sin(phi)).ravel()
        ], axis=1)
        weights = np.repeat(w * r * (2 * pi / angles), angles)

    return FlatGrid(n, points, weights, float(truncation_radius))


def flat_potential(
    fgrid: FlatGrid, exponent: float, h: FloatArray, targets: PointsLike | None = None, block: int = 1024
) -> FloatArray:
    """
    Σ_j |x_i - y_j|^{exponent} h_j w_j over the flat grid, evaluated blockwise over the targets.

    Coincident target and node pairs are skipped, so negative exponents are allowed.
    """

    hw = np.asarray(h, dtype=np.float64).reshape(-1) * fgrid.weights

    GridMismatchError.check_length(flat_potential, fgrid.size, hw.size)

    pts = fgrid.points if targets is None else as_points(targets, fgrid.n)

    out = np.empty(pts.shape[0])

    for start in range(0, pts.shape[0], block):
        dist = cdist(pts[start:start + block], fgrid.points)

        with np.errstate(divide='ignore'):
            kernel = np.where(dist > 0, dist, np.inf) ** exponent if exponent < 0 else dist ** exponent

        out[start:start + block] = kernel @ hw

    return out


def apply_flat_operator(
    fgrid: FlatGrid, alpha: float, h: FloatArray, targets: PointsLike | None = None
) -> FloatArray:
    """
    Flat-space operator c_{n,α} Σ_j |x_i - y_j|^{α-n} h_j w_j over the truncation ball.

    Truncation error is the caller's business: bubble and covariance checks add their own tail models.

    :param targets:     Evaluation points; the grid nodes when omitted.
    """

    check_alpha(fgrid.n, alpha, apply_flat_operator)

    return normalization_constant(fgrid.n, alpha) * flat_potential(fgrid, alpha - fgrid.n, h, targets)
