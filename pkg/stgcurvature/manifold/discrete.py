from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import pi

import numpy as np
from scipy.spatial.distance import cdist

from ..exceptions import GridMismatchError, InvalidConfigError, NonPositiveError, ParameterRangeError, SymmetryError
from ..functions import as_points
from ..types import FilePathType, FloatArray, FuncExceptT, PointsLike
from ..utils import read_json, sphere_area

__all__ = [
    'DiscreteManifold', 'ConformalFactor',

    'random_manifold', 'sphere_manifold', 'regular_s3_sample',

    'load_manifold'
]


def _readonly(arr: FloatArray) -> FloatArray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.flags.writeable = False
    return out


def _check_positive(values: FloatArray, func: FuncExceptT, name: str) -> None:
    bad = np.flatnonzero(~(values > 0))

    if bad.size:
        node = int(bad[0])

        raise NonPositiveError(
            '{name} must be strictly positive; node {node} has value {value}!',
            func, node, float(values[node]), name=name
        )


@dataclass(frozen=True, eq=False)
class DiscreteManifold:
    """
    A manifold reduced to nodes: volume weights dV and the Green matrix G(y, x) of the conformal Laplacian.

    The diagonal of ``green`` carries no meaning and is excluded from every sum.
    """

    n: int
    """Dimension label, never 2."""

    volumes: FloatArray
    green: FloatArray

    points: FloatArray | None = None
    """Optional embedded coordinates, one row per node."""

    def __post_init__(self) -> None:
        if self.n == 2 or self.n < 1:
            raise ParameterRangeError('The Green exponent needs n != 2 and n >= 1!', self.__class__, self.n)

        volumes = _readonly(np.asarray(self.volumes).reshape(-1))
        green = _readonly(self.green)

        size = volumes.size

        if green.shape != (size, size):
            raise GridMismatchError(
                self.__class__, (green.shape, size), 'The Green matrix must be square over the nodes!'
            )

        _check_positive(volumes, self.__class__, 'volumes')

        if not np.allclose(green, green.T, rtol=1e-12, atol=0):
            raise SymmetryError('The Green matrix must be symmetric!', self.__class__)

        _check_positive(green[~np.eye(size, dtype=bool)], self.__class__, 'Off-diagonal Green entries')

        object.__setattr__(self, 'volumes', volumes)
        object.__setattr__(self, 'green', green)

        if self.points is not None:
            points = _readonly(self.points)

            GridMismatchError.check_length(self.__class__, size, points.shape[0])

            object.__setattr__(self, 'points', points)

    @property
    def size(self) -> int:
        return int(self.volumes.size)

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True, eq=False)
class ConformalFactor:
    """φ > 0 per node, describing g₁ = φ^{4/(n-α)} g₀."""

    phi: FloatArray
    alpha: float
    n: int

    def __post_init__(self) -> None:
        phi = _readonly(np.asarray(self.phi).reshape(-1))

        _check_positive(phi, self.__class__, 'φ')

        if self.alpha == self.n:
            raise ParameterRangeError('α must differ from n!', self.__class__, self.alpha)

        object.__setattr__(self, 'phi', phi)

    @classmethod
    def constant(cls, M: DiscreteManifold, alpha: float, value: float = 1.0) -> ConformalFactor:
        return cls(np.full(M.size, value), alpha, M.n)

    def check(self, M: DiscreteManifold, alpha: float | None, func: FuncExceptT) -> None:
        """Raise unless φ has one value per node of M and matches its dimension and, if given, α."""

        GridMismatchError.check_length(func, M.size, self.phi.size)

        if self.n != M.n or (alpha is not None and alpha != self.alpha):
            raise ParameterRangeError(
                'The conformal factor was built for (n={n}, α={alpha}), not for the problem at hand!',
                func, n=self.n, alpha=self.alpha
            )

    def power(self, exponent: float) -> FloatArray:
        return self.phi ** exponent


def random_manifold(n: int = 3, size: int = 20, seed: int = 0) -> DiscreteManifold:
    """Synthetic instance: symmetric Green matrix with off-diagonal entries in [0.5, 2), volumes in [0.5, 1.5)."""

    if size < 2:
        raise ParameterRangeError('At least two nodes are needed!', random_manifold, size)

    rng = np.random.default_rng(seed)

    upper = np.triu(rng.uniform(0.5, 2.0, (size, size)), 1)

    return DiscreteManifold(n, rng.uniform(0.5, 1.5, size), upper + upper.T)


def sphere_manifold(points: PointsLike, volumes: FloatArray | None = None) -> DiscreteManifold:
    """
    Round-sphere instance: G(y, x) = |ξ_y - ξ_x|^{2-n}, the conformal Laplacian Green kernel up to a constant.

    :param volumes:     Node volumes; equal shares of |S^n| when omitted.
    """

    pts = as_points(points)
    n = pts.shape[1] - 1

    green = cdist(pts, pts)

    np.fill_diagonal(green, 1.0)
    green = green ** (2 - n)
    np.fill_diagonal(green, 0.0)

    if volumes is None:
        volumes = np.full(pts.shape[0], sphere_area(n) / pts.shape[0])

    return DiscreteManifold(n, volumes, green, pts)


def regular_s3_sample() -> DiscreteManifold:
    """
    The 24 vertices of the 24-cell on S³ with volumes 2π²/24.

    The vertex set is transitive under its symmetry group, so every row of any distance kernel
    is a permutation of every other.
    """

    axes = np.concatenate([np.eye(4), -np.eye(4)])
    halves = np.array(list(product((-0.5, 0.5), repeat=4)))

    points = np.concatenate([axes, halves])

    return sphere_manifold(points, np.full(24, 2 * pi * pi / 24))


def load_manifold(path: FilePathType) -> DiscreteManifold:
    """
    Read a manifold from JSON: ``{"n": 3, "volumes": [...], "green": [[...], ...], "points": [[...], ...]}``,
    ``points`` optional.

    :raises InvalidConfigError: Missing keys or malformed arrays.
    """

    data = read_json(path, func=load_manifold)

    try:
        points = data.get('points')

        n = int(data['n'])
        volumes = np.asarray(data['volumes'], dtype=np.float64)
        green = np.asarray(data['green'], dtype=np.float64)
        coords = None if points is None else np.asarray(points, dtype=np.float64)
    except (KeyError, TypeError, AttributeError, ValueError) as e:
        raise InvalidConfigError('Malformed manifold document: {error}', load_manifold, path, error=repr(e)) from e

    return DiscreteManifold(n, volumes, green, coords)
