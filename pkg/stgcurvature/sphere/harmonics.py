from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from ..exceptions import ParameterRangeError
from ..functions import as_points
from ..types import FloatArray, PointsLike

__all__ = [
    'monomial_exponents',

    'spherical_harmonic', 'harmonic_basis',

    'smoothed_caps'
]

_Poly = dict[tuple[int, ...], float]


@lru_cache
def monomial_exponents(dim: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of the degree-``degree`` monomials in ``dim`` variables, in descending lexicographic order."""

    exponents = set[tuple[int, ...]]()

    for combo in combinations_with_replacement(range(dim), degree):
        exponents.add(tuple(combo.count(i) for i in range(dim)))

    return tuple(sorted(exponents, reverse=True))


def _laplacian(poly: _Poly) -> _Poly:
    out = _Poly()

    for exps, coeff in poly.items():
        for i, e in enumerate(exps):
            if e < 2:
                continue

            lowered = exps[:i] + (e - 2,) + exps[i + 1:]
            out[lowered] = out.get(lowered, 0.0) + coeff * e * (e - 1)

    return out


@lru_cache
def _harmonic_projection(exps: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], float], ...]:
    # On |x| = 1 the |x|^{2j} factors drop, leaving a sum of monomials of degrees k, k - 2, ...
    dim, degree = len(exps), sum(exps)

    out = _Poly()
    term: _Poly = {exps: 1.0}
    denominator = 1.0

    for j in range(degree // 2 + 1):
        if j:
            term = _laplacian(term)
            denominator *= -2 * j * (dim + 2 * degree - 2 - 2 * j)

        for key, coeff in term.items():
            out[key] = out.get(key, 0.0) + coeff / denominator

    return tuple((key, coeff) for key, coeff in out.items() if coeff)


def _evaluate(poly: tuple[tuple[tuple[int, ...], float], ...], points: FloatArray) -> FloatArray:
    values = np.zeros(points.shape[0])

    for exps, coeff in poly:
        values += coeff * np.prod(points ** np.asarray(exps), axis=1)

    return values


def spherical_harmonic(points: PointsLike, degree: int, index: int) -> FloatArray:
    """
    Real spherical harmonic on S^n, evaluated at unit vectors.

    The harmonic is the harmonic projection of the ambient monomial x^a of the given degree,
    ``index`` counting the exponent tuples a in descending lexicographic order.
    Degree 2, index 0 on the circle is x_0^2 - 1/2 = cos(2θ)/2.

    Even degrees give antipodally symmetric functions, odd degrees antisymmetric ones.

    :raises ParameterRangeError:    Negative degree or index past the number of monomials.
    """

    pts = as_points(points)

    if degree < 0:
        raise ParameterRangeError('Degree must be nonnegative!', spherical_harmonic, degree)

    exponents = monomial_exponents(pts.shape[1], degree)

    if not 0 <= index < len(exponents):
        raise ParameterRangeError(
            'Index must be in [0, {count}) for degree {degree}!', spherical_harmonic, index,
            count=len(exponents), degree=degree
        )

    return _evaluate(_harmonic_projection(exponents[index]), pts)


def harmonic_basis(points: PointsLike, max_degree: int) -> list[FloatArray]:
    """
    A basis of the spherical harmonics of degree 0 through ``max_degree``.

    Uses the harmonic projections of the monomials with last exponent at most 1,
    which are linearly independent and span each degree.
    """

    pts = as_points(points)
    dim = pts.shape[1]

    return [
        _evaluate(_harmonic_projection(exps), pts)
        for degree in range(max_degree + 1)
        for exps in monomial_exponents(dim, degree)
        if exps[-1] <= 1
    ]


def smoothed_caps(points: PointsLike, radius: float = 0.5, width: float = 0.1) -> list[FloatArray]:
    """
    Smooth indicators of the geodesic caps of the given radius around the 2(n + 1) poles ±e_i.

    Each cap is 0.5 (1 + tanh((radius - d) / width)), d the geodesic distance to the pole.
    """

    pts = as_points(points)

    caps = list[FloatArray]()

    for i in range(pts.shape[1]):
        for sign in (1.0, -1.0):
            dist = np.arccos(np.clip(sign * pts[:, i], -1.0, 1.0))
            caps.append(0.5 * (1 + np.tanh((radius - dist) / width)))

    return caps
