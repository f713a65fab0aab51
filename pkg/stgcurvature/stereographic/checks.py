from __future__ import annotations

from math import pi

import numpy as np

from ..exceptions import ParameterRangeError
from ..functions import as_points, fallback
from ..kernels import check_alpha, evaluate_tilde_I, normalization_constant
from ..sphere import GridFunction, build_grid
from ..types import FloatArray, PointsLike, SphereFunc
from ..utils import relative_discrepancy, sphere_area
from .flat import build_flat_grid, flat_potential
from .projection import conformal_factor, inverse_projection

__all__ = [
    'BUBBLE_MULTIPLIER',

    'bubble_profile', 'bubble_tail',
    'bubble_residual',

    'verify_sphere_covariance'
]

BUBBLE_MULTIPLIER = 2 / pi
"""(2/π) ∫_{R²} |x - y|² u_ε^{-3}(y) dy = u_ε(x)."""


def bubble_profile(eps: float, x: PointsLike) -> FloatArray:
    """u_ε(x) = (ε² + |x|²) / ε on R²."""

    pts = as_points(x, 2)

    return (eps * eps + np.sum(pts * pts, axis=1)) / eps


def bubble_tail(eps: float, x: PointsLike, truncation_radius: float) -> FloatArray:
    """
    Closed form of ∫_{|y| > T} |x - y|² u_ε^{-3}(y) dy.

    With s₀ = ε² + T² this is 2π ε³ [1/(2 s₀) - ε²/(4 s₀²) + |x|²/(4 s₀²)];
    the cross term vanishes by symmetry.
    """

    pts = as_points(x, 2)
    s0 = eps * eps + truncation_radius * truncation_radius

    r2 = np.sum(pts * pts, axis=1)

    return 2 * pi * eps ** 3 * (1 / (2 * s0) + (r2 - eps * eps) / (4 * s0 * s0))


def bubble_residual(
    eps: float, sample_points: PointsLike, truncation_radius: float | None = None, tail_correction: bool = True,
    core_panels: int = 16, order: int = 16, angles: int = 16
) -> float:
    """
    Check the planar bubble identity u_ε = (2/π) ∫ |x - y|² u_ε^{-3}(y) dy at sample points.

    The integral is computed on a polar grid graded around the bubble scale ε, truncated at
    ``truncation_radius`` (default 100 ε), with the closed-form tail added when ``tail_correction`` is set.

    :return:    max over samples of |(2/π) T(x) - u_ε(x)| / u_ε(x).

    :raises ParameterRangeError:    Nonpositive ε or truncation radius.
    """

    if not eps > 0:
        raise ParameterRangeError('The bubble scale must be positive!', bubble_residual, eps)

    radius = fallback(truncation_radius, 100 * eps)

    if not radius > 0:
        raise ParameterRangeError('The truncation radius must be positive!', bubble_residual, radius)

    fgrid = build_flat_grid(
        2, radius, core_radius=min(4 * eps, radius), core_panels=core_panels, order=order, angles=angles
    )

    samples = as_points(sample_points, 2)

    density = bubble_profile(eps, fgrid.points) ** -3

    integral = flat_potential(fgrid, 2.0, density, samples)

    if tail_correction:
        integral = integral + bubble_tail(eps, samples, radius)

    u = bubble_profile(eps, samples)

    return float(np.max(np.abs(BUBBLE_MULTIPLIER * integral - u) / u))


def verify_sphere_covariance(
    u: SphereFunc, n: int, alpha: float, samples: PointsLike | None = None, truncation_radius: float = 50.0,
    sphere_resolution: int | None = None, core_panels: int = 16, order: int = 16, angles: int = 64,
    refinement: int = 0
) -> float:
    """
    Check the stereographic covariance of the normalized operator,

        ĨI_α(u)(S(x)) = φ(x)^{-1} c_{n,α} ∫_{R^n} |x - y|^{α-n} φ(y)^{(n+α)/(n-α)} u(S(y)) dy,

    at flat sample points x, for α > n and n ∈ {1, 2}.

    The left side is the singularity-subtracted quadrature on a sphere grid evaluated at S(x);
    the right side is a graded flat quadrature on |y| <= T plus the leading tail
    c 2^{(n+α)/2} u(south pole) |S^{n-1}| T^{-n} / n.

    :param u:                   Continuous bounded function of the embedded sphere coordinates,
                                called with arrays of shape (count, n + 1).
    :param samples:             Flat points; defaults to a handful in the unit ball and beyond.
    :param truncation_radius:   Flat truncation radius T.
    :param sphere_resolution:   Resolution of the left-side sphere grid.
    :param refinement:          Each step doubles T, the flat panels, the angles and the sphere resolution.

    :return:                    Max relative discrepancy over the samples, 0 when both sides vanish.
    """

    check_alpha(n, alpha, verify_sphere_covariance, above_n=True)

    if n not in (1, 2):
        raise ParameterRangeError('Covariance is checked for n = 1 and n = 2 only!', verify_sphere_covariance, n)

    scale = 2 ** refinement

    if samples is None:
        samples = [[0.0], [0.3], [-0.7], [1.0], [1.9]] if n == 1 else [
            [0.0, 0.0], [0.3, 0.1], [-0.7, 0.4], [1.0, -1.0], [0.2, 1.9]
        ]

    xs = as_points(samples, n)
    radius = truncation_radius * scale

    # targets on the line sit on panel edges, where the kernel |x - y|^{α-1} has its kink
    breaks = np.abs(xs[:, 0]) if n == 1 else ()

    fgrid = build_flat_grid(
        n, radius, core_radius=2.0, core_panels=core_panels * scale, order=order,
        angles=angles * scale, breakpoints=breaks
    )

    weight = conformal_factor(fgrid.points, n, alpha) ** ((n + alpha) / (n - alpha))
    density = weight * np.asarray(u(inverse_projection(fgrid.points, n)), dtype=np.float64)

    south = np.zeros((1, n + 1))
    south[0, -1] = -1.0

    c = normalization_constant(n, alpha)

    tail = 2 ** ((n + alpha) / 2) * float(np.asarray(u(south)).reshape(-1)[0]) * sphere_area(n - 1) * radius ** -n / n

    rhs = c * (flat_potential(fgrid, alpha - n, density, xs) + tail) / conformal_factor(xs, n, alpha)

    sgrid = build_grid(n, fallback(sphere_resolution, 512 if n == 1 else 64) * scale)

    xi = inverse_projection(xs, n)
    h = GridFunction.from_callable(sgrid, u)

    lhs = evaluate_tilde_I(sgrid, alpha, h, xi, np.asarray(u(xi), dtype=np.float64))

    return relative_discrepancy(lhs, rhs)
