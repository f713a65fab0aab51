from __future__ import annotations

from math import sqrt
from typing import NamedTuple

import numpy as np

from ..exceptions import GridMismatchError, ParameterRangeError
from ..functional import FunctionalContext
from ..sphere import GridFunction
from ..types import FloatArray, PointLike

__all__ = [
    'verify_ode_s1',

    'MassBound', 'mass_bound_check'
]


def verify_ode_s1(u: GridFunction, R: GridFunction | None = None) -> float:
    """
    Check that u solves u'' + u/4 = 2 R u^{-3} on the circle, with u'' from trigonometric differentiation.

    The factor 2 comes from (d²/dθ² + 1/4) 2|sin(θ/2)| = 2δ, which turns the α = 2 integral equation
    with multiplier 1 into this ODE.

    :return:                        max |u'' + u/4 - 2 R u^{-3}| / max(2 R u^{-3}).

    :raises ParameterRangeError:    u does not live on a uniform circle grid.
    """

    grid = u.grid

    if grid.n != 1 or not np.allclose(grid.weights, grid.weights[0], rtol=0, atol=1e-15):
        raise ParameterRangeError('The ODE check needs a uniform circle grid!', verify_ode_s1, grid)

    u.check_positive(verify_ode_s1, 'u')

    if R is None:
        rv = np.ones(grid.size)
    else:
        GridMismatchError.check_same(verify_ode_s1, grid, R.grid)
        rv = R.values

    m = grid.size

    k = np.fft.rfftfreq(m, 1 / m)

    second = np.fft.irfft(-k * k * np.fft.rfft(u.values), m)

    source = 2 * rv * u.values ** -3

    return float(np.max(np.abs(second + u.values / 4 - source)) / np.max(source))


class MassBound(NamedTuple):
    holds: bool
    """min (I_{α,R} f) reaches the bound. False when the check did not apply."""

    bound: float
    """(min R)(√2 - δ₀)^{α-n} / 100."""

    applicable: bool
    """Some pole pair carries mass 1/100 of f in both caps."""


def _caps_carry_mass(points: FloatArray, weights: FloatArray, f: FloatArray, pole: FloatArray, radius: float) -> bool:
    cosines = np.clip(points @ pole, -1.0, 1.0)

    north = np.arccos(cosines) <= radius
    south = np.arccos(-cosines) <= radius

    return bool(weights[north] @ f[north] >= 1e-2 and weights[south] @ f[south] >= 1e-2)


def mass_bound_check(
    ctx: FunctionalContext, f: GridFunction, delta0: float, pole: PointLike | None = None
) -> MassBound:
    """
    Lower bound of I_{α,R} f from mass in a pair of antipodal caps.

    If both geodesic caps of radius δ₀ around ±P carry quadrature mass (of f, unweighted) at least 1/100,
    every point sits at chordal distance at least √2 - δ₀ from one of the caps, so
    I_{α,R} f >= (min R)(√2 - δ₀)^{α-n} / 100 everywhere.

    :param pole:                    Unit vector P. When omitted, the coordinate axes and then every node are tried.

    :raises ParameterRangeError:    δ₀ outside (0, √2), or f negative somewhere.
    """

    if not 0 < delta0 < sqrt(2):
        raise ParameterRangeError('δ₀ must be in (0, √2)!', mass_bound_check, delta0)

    fv = ctx.values(f, mass_bound_check, False)

    if np.any(fv < 0):
        raise ParameterRangeError('f must be nonnegative!', mass_bound_check)

    grid = ctx.grid

    bound = float(np.min(ctx.R.values)) * (sqrt(2) - delta0) ** (ctx.alpha - ctx.n) / 100

    if pole is None:
        candidates = np.concatenate([np.eye(grid.n + 1), grid.points])
    else:
        candidates = np.asarray(pole, dtype=np.float64).reshape(1, grid.n + 1)
        candidates = candidates / np.linalg.norm(candidates)

    applicable = any(_caps_carry_mass(grid.points, grid.weights, fv, c, delta0) for c in candidates)

    if not applicable:
        return MassBound(False, bound, False)

    return MassBound(bool(np.min(ctx.apply(fv)) >= bound), bound, True)
