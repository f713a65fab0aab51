from __future__ import annotations

import csv
from dataclasses import dataclass
from math import pi
from typing import Any, Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.spatial.distance import cdist

from ..exceptions import GridMismatchError, NonPositiveError, ParameterRangeError
from ..types import FilePathType, FloatArray, FuncExceptT, IntArray, cachedproperty
from ..utils import open_file, sphere_area

__all__ = [
    'SphereGrid', 'GridFunction',

    'build_grid',

    'integrate', 'symmetrize', 'is_antipodally_symmetric',

    'export_grid_csv'
]


def _readonly(arr: Any, dtype: Any = np.float64) -> Any:
    out = np.array(arr, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class SphereGrid(cachedproperty.baseclass):
    """
    Antipodally closed quadrature grid on the unit sphere S^n embedded in R^{n+1}.

    Grids compare by identity: two grids built with the same arguments are still different grids,
    and grid functions only combine when they live on the very same object.
    """

    n: int
    """Dimension of the sphere."""

    resolution: int
    """Mesh parameter the grid was built with."""

    points: FloatArray
    """Unit vectors, shape (size, n + 1)."""

    weights: FloatArray
    """Positive quadrature weights in surface-measure units."""

    antipode: IntArray
    """Index permutation sending each node to the node at -ξ."""

    def __post_init__(self) -> None:
        object.__setattr__(self, 'points', _readonly(self.points))
        object.__setattr__(self, 'weights', _readonly(self.weights))
        object.__setattr__(self, 'antipode', _readonly(self.antipode, np.intp))

        if self.points.shape != (self.weights.size, self.n + 1) or self.antipode.shape != self.weights.shape:
            raise GridMismatchError(
                self.__class__, (self.points.shape, self.weights.shape, self.antipode.shape),
                'Points, weights and antipode table must describe the same nodes!'
            )

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}(n={self.n}, resolution={self.resolution}, size={self.size})'

    @property
    def size(self) -> int:
        """Number of nodes."""

        return int(self.weights.size)

    @property
    def area(self) -> float:
        """Exact surface measure |S^n|."""

        return sphere_area(self.n)

    @cachedproperty
    def distances(self) -> FloatArray:
        """Pairwise chordal distances |ξ_i - ξ_j|, computed once per grid. Diagonal is exactly 0."""

        return _readonly(cdist(self.points, self.points))

    @cachedproperty
    def angles(self) -> FloatArray:
        """Node angles θ_i = 2πi/m of the circle grid."""

        if self.n != 1:
            raise ParameterRangeError('Node angles are only defined on the circle!', self.__class__, self.n)

        return _readonly(2 * pi * np.arange(self.size) / self.size)

    def check_function(self, f: GridFunction, func: FuncExceptT) -> None:
        """Raise GridMismatchError unless f lives on this grid."""

        GridMismatchError.check_same(func, self, f.grid)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real values sampled at the nodes of one grid."""

    grid: SphereGrid
    values: FloatArray

    def __post_init__(self) -> None:
        values = _readonly(np.asarray(self.values, dtype=np.float64).reshape(-1))

        GridMismatchError.check_length(self.__class__, self.grid.size, values.size)

        object.__setattr__(self, 'values', values)

    def __len__(self) -> int:
        return int(self.values.size)

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}({self.grid!r}, min={self.values.min():.6g}, max={self.values.max():.6g})'

    @classmethod
    def constant(cls, grid: SphereGrid, value: float = 1.0) -> GridFunction:
        return cls(grid, np.full(grid.size, value, dtype=np.float64))

    @classmethod
    def from_callable(cls, grid: SphereGrid, func: Callable[[FloatArray], Any]) -> GridFunction:
        """Sample a function of the embedded coordinates, called once with the (size, n + 1) point array."""

        return cls(grid, np.broadcast_to(np.asarray(func(grid.points), dtype=np.float64), (grid.size,)))

    def with_values(self, values: Any) -> GridFunction:
        """New function on the same grid."""

        return GridFunction(self.grid, values)

    def check_positive(self, func: FuncExceptT, name: str = 'f') -> None:
        """
        Raise NonPositiveError naming the first node where the function is not strictly positive.

        NaNs count as nonpositive.
        """

        bad = np.flatnonzero(~(self.values > 0))

        if bad.size:
            node = int(bad[0])

            raise NonPositiveError(
                '{name} must be strictly positive on every node; node {node} has value {value}!',
                func, node, float(self.values[node]), name=name
            )


def _circle_table(m: int) -> tuple[FloatArray, FloatArray]:
    half = np.arange(m // 2)

    cos_half = np.cos(2 * pi * half / m)
    sin_half = np.sin(2 * pi * half / m)

    return np.concatenate([cos_half, -cos_half]), np.concatenate([sin_half, -sin_half])


def _symmetric_leggauss(count: int) -> tuple[FloatArray, FloatArray]:
    nodes, weights = leggauss(count)

    return (nodes - nodes[::-1]) / 2, (weights + weights[::-1]) / 2


def _build_circle(m: int) -> tuple[FloatArray, FloatArray, IntArray]:
    cos_t, sin_t = _circle_table(m)

    points = np.stack([cos_t, sin_t], axis=1)
    weights = np.full(m, 2 * pi / m)
    antipode = (np.arange(m) + m // 2) % m

    return points, weights, antipode


def _build_s2(m: int) -> tuple[FloatArray, FloatArray, IntArray]:
    half = m // 2

    z, wz = _symmetric_leggauss(half)
    cos_p, sin_p = _circle_table(m)

    rho = np.sqrt(1 - z * z)

    points = np.stack([
        np.outer(rho, cos_p), np.outer(rho, sin_p), np.repeat(z[:, None], m, axis=1)
    ], axis=-1).reshape(-1, 3)

    weights = np.repeat(wz * (2 * pi / m), m)

    k, l = np.divmod(np.arange(half * m), m)
    antipode = (half - 1 - k) * m + (l + half) % m

    return points, weights, antipode


def _build_s3(m: int) -> tuple[FloatArray, FloatArray, IntArray]:
    # Hopf coordinates: (sqrt(1 - s) e^{iφ1}, sqrt(s) e^{iφ2}), measure (1/2) ds dφ1 dφ2
    half = m // 2

    t, wt = _symmetric_leggauss(half)
    s, ws = (1 + t) / 2, wt / 2
    cos_p, sin_p = _circle_table(m)

    a, b = np.sqrt(1 - s), np.sqrt(s)

    shape = (half, m, m)

    points = np.stack([
        np.broadcast_to(a[:, None, None] * cos_p[None, :, None], shape),
        np.broadcast_to(a[:, None, None] * sin_p[None, :, None], shape),
        np.broadcast_to(b[:, None, None] * cos_p[None, None, :], shape),
        np.broadcast_to(b[:, None, None] * sin_p[None, None, :], shape)
    ], axis=-1).reshape(-1, 4)

    weights = np.repeat(ws * 0.5 * (2 * pi / m) ** 2, m * m)

    k, rest = np.divmod(np.arange(half * m * m), m * m)
    l1, l2 = np.divmod(rest, m)
    antipode = (k * m + (l1 + half) % m) * m + (l2 + half) % m

    return points, weights, antipode


_builders: dict[int, Callable[[int], tuple[FloatArray, FloatArray, IntArray]]] = {
    1: _build_circle, 2: _build_s2, 3: _build_s3
}


def build_grid(n: int, resolution: int) -> SphereGrid:
    """
    Build the antipodally closed quadrature grid of S^n.

     * n = 1: ``resolution`` uniform angles with trapezoid weights.
     * n = 2: ``resolution / 2`` Gauss–Legendre nodes in z times ``resolution`` uniform azimuths.
     * n = 3: ``resolution / 2`` Gauss–Legendre nodes in the Hopf coordinate s times
       ``resolution`` x ``resolution`` uniform angle pairs.

    :param n:                       Dimension of the sphere, 1, 2 or 3.
    :param resolution:              Even mesh parameter, at least 4.

    :raises ParameterRangeError:    Unsupported dimension, or a resolution that would break antipodal closure.
    """

    if n not in _builders:
        raise ParameterRangeError('Sphere dimension must be 1, 2 or 3, not {n}!', build_grid, n=n)

    if isinstance(resolution, bool) or int(resolution) != resolution:
        raise ParameterRangeError('Resolution must be an integer!', build_grid, resolution)

    resolution = int(resolution)

    if resolution < 4:
        raise ParameterRangeError('Resolution must be at least 4!', build_grid, resolution)

    if resolution % 2:
        raise ParameterRangeError(
            'Resolution must be even, otherwise the antipodal map leaves the grid!', build_grid, resolution
        )

    points, weights, antipode = _builders[n](resolution)

    return SphereGrid(n, resolution, points, weights, antipode)


def integrate(grid: SphereGrid, f: GridFunction) -> float:
    """Quadrature Σ w_i f_i."""

    grid.check_function(f, integrate)

    return float(grid.weights @ f.values)


def symmetrize(f: GridFunction) -> GridFunction:
    """Antipodal average (f(ξ) + f(-ξ)) / 2, exactly symmetric and idempotent."""

    values = f.values

    return f.with_values((values + values[f.grid.antipode]) / 2)


def is_antipodally_symmetric(f: GridFunction, tol: float = 1e-12) -> bool:
    """Whether max |f_i - f_{-i}| <= tol * max |f_i|. The zero function counts as symmetric."""

    values = f.values

    defect = np.max(np.abs(values - values[f.grid.antipode]))

    return bool(defect <= tol * np.max(np.abs(values)))


def export_grid_csv(grid: SphereGrid, path: FilePathType) -> None:
    """Write the grid as CSV rows: index, x_0..x_n, weight, antipode."""

    with open_file(path, 'w', newline='', func=export_grid_csv) as fp:
        writer = csv.writer(fp)

        writer.writerow(['index', *(f'x_{i}' for i in range(grid.n + 1)), 'weight', 'antipode'])

        for i, (point, weight, antipode) in enumerate(zip(grid.points, grid.weights, grid.antipode)):
            writer.writerow([i, *(repr(float(x)) for x in point), repr(float(weight)), int(antipode)])
