from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.spatial.distance import cdist
from scipy.special import gamma

from ..enums import DiagonalRule
from ..exceptions import CustomValueError, ParameterRangeError
from ..functions import as_points
from ..sphere import GridFunction, SphereGrid
from ..types import FilePathType, FloatArray, FuncExceptT, PointsLike, SPath
from ..utils import sphere_area

__all__ = [
    'KernelOperator',

    'check_alpha',

    'chordal_distance',

    'normalization_constant', 'inverse_normalization_constant', 'zonal_quadrature_constant',
    'grid_row_sum_constant',

    'kernel_matrix',

    'assemble_kernel', 'apply_operator',

    'apply_tilde_I', 'evaluate_tilde_I'
]


def check_alpha(n: int, alpha: float, func: FuncExceptT, *, above_n: bool = False) -> None:
    """Validate the exponent: alpha > 0 and alpha != n, or alpha > n when ``above_n``."""

    if above_n and not alpha > n:
        raise ParameterRangeError('alpha must be greater than n = {n}!', func, alpha, n=n)

    if not alpha > 0:
        raise ParameterRangeError('alpha must be positive!', func, alpha)

    if alpha == n:
        raise ParameterRangeError('alpha must differ from n = {n}!', func, alpha, n=n)


def chordal_distance(xi: PointsLike, eta: PointsLike) -> float | FloatArray:
    """Euclidean distance |ξ - η| in the ambient space. Works row-wise on stacks of points."""

    diff = np.asarray(xi, dtype=np.float64) - np.asarray(eta, dtype=np.float64)

    dist = np.sqrt(np.sum(diff * diff, axis=-1))

    return float(dist) if dist.ndim == 0 else dist


def inverse_normalization_constant(n: int, alpha: float) -> float:
    """∫_{S^n} |ξ - η|^{α-n} dS_η = 2^α π^{n/2} Γ(α/2) / Γ((n + α)/2)."""

    check_alpha(n, alpha, inverse_normalization_constant)

    return float(2 ** alpha * pi ** (n / 2) * gamma(alpha / 2) / gamma((n + alpha) / 2))


def normalization_constant(n: int, alpha: float) -> float:
    """
    The constant c_{n,α} making c_{n,α} ∫_{S^n} |ξ - η|^{α-n} dS_η = 1.

    >>> normalization_constant(1, 2)
    0.125
    """

    check_alpha(n, alpha, normalization_constant)

    return 1 / inverse_normalization_constant(n, alpha)


def zonal_quadrature_constant(n: int, alpha: float, nodes: int = 64) -> float:
    """
    c_{n,α} by Gauss–Legendre quadrature of the zonal reduction

        c^{-1} = |S^{n-1}| ∫_0^π (2 sin(θ/2))^{α-n} sin^{n-1}(θ) dθ

    in the graded variable θ = π t², t ∈ [0, 1].

    The integrand behaves like θ^{α-1} at the pole; the substitution turns that into t^{2α-1},
    which is analytic whenever 2α is an integer and otherwise at least C¹.
    """

    check_alpha(n, alpha, zonal_quadrature_constant)

    if nodes < 1:
        raise ParameterRangeError('At least one quadrature node is needed!', zonal_quadrature_constant, nodes)

    t, w = leggauss(nodes)
    t, w = (t + 1) / 2, w / 2

    theta = pi * t ** 2

    integrand = (2 * np.sin(theta / 2)) ** (alpha - n) * np.sin(theta) ** (n - 1) * (2 * pi * t)

    return 1 / float(sphere_area(n - 1) * (w @ integrand))


def grid_row_sum_constant(grid: SphereGrid, alpha: float) -> float:
    """
    c_{n,α} from the plain (zero-diagonal) Nyström row sums of a grid, averaged over the nodes.

    Converges at the kernel's smoothness rate only: a coarse, fully independent cross-check.
    """

    check_alpha(grid.n, alpha, grid_row_sum_constant, above_n=True)

    return 1 / float(np.mean(kernel_matrix(grid, alpha) @ grid.weights))


def kernel_matrix(grid: SphereGrid, alpha: float) -> FloatArray:
    """|ξ_i - ξ_j|^{α-n} with the diagonal set to 0, for α on either side of n."""

    with np.errstate(divide='ignore'):
        kernel = grid.distances ** (alpha - grid.n)

    np.fill_diagonal(kernel, 0.0)

    return kernel


@dataclass(frozen=True, eq=False)
class KernelOperator:
    """
    Dense Nyström matrix of f ↦ ∫ R(η) f(η) |ξ - η|^{α-n} dS_η.

    Off-diagonal entries are R_j |ξ_i - ξ_j|^{α-n} w_j. The diagonal follows ``rule``.
    """

    grid: SphereGrid
    alpha: float
    R: GridFunction
    rule: DiagonalRule
    matrix: FloatArray

    def __post_init__(self) -> None:
        self.matrix.flags.writeable = False

    @property
    def kernel(self) -> FloatArray:
        """The matrix with R and the weights divided out of the columns; symmetric."""

        return self.matrix / (self.R.values * self.grid.weights)[None, :]

    def __call__(self, f: GridFunction) -> GridFunction:
        return apply_operator(self, f)

    def export(self, path: FilePathType) -> SPath:
        """Dump the matrix as ``.npy`` or ``.csv``; debugging only."""

        spath = SPath(str(path))

        spath.mkdirp()

        if spath.suffix == '.npy':
            np.save(spath, self.matrix)
        elif spath.suffix == '.csv':
            np.savetxt(spath, self.matrix, delimiter=',', fmt='%.17g')
        else:
            raise CustomValueError('Export format must be .npy or .csv!', self.export, spath.suffix)

        return spath


def assemble_kernel(
    grid: SphereGrid, alpha: float, R: GridFunction | None = None, rule: DiagonalRule = DiagonalRule.COMPENSATED
) -> KernelOperator:
    """
    Assemble the dense operator I_{α,R} on a grid, for α > n.

    With ``DiagonalRule.ZERO`` the diagonal is exactly 0. With ``DiagonalRule.COMPENSATED``
    the diagonal is R_i (c_{n,α}^{-1} - Σ_{j≠i} |ξ_i - ξ_j|^{α-n} w_j), so that
    (I_{α,R} f)_i = Σ_j k_ij R_j f_j w_j + R_i f_i (c^{-1} - Σ_j k_ij w_j), the singularity-subtracted rule.

    :param grid:                    Grid to assemble on.
    :param alpha:                   Exponent, greater than n.
    :param R:                       Positive weight function. Defaults to R ≡ 1.
    :param rule:                    Treatment of the diagonal.

    :raises ParameterRangeError:    alpha <= n.
    :raises NonPositiveError:       R is not strictly positive.
    :raises GridMismatchError:      R lives on another grid.
    """

    check_alpha(grid.n, alpha, assemble_kernel, above_n=True)

    rule = DiagonalRule.from_param(rule, assemble_kernel) or DiagonalRule.COMPENSATED

    if R is None:
        R = GridFunction.constant(grid)

    grid.check_function(R, assemble_kernel)
    R.check_positive(assemble_kernel, 'R')

    kernel = kernel_matrix(grid, alpha)

    matrix = kernel * (R.values * grid.weights)[None, :]

    if rule is DiagonalRule.COMPENSATED:
        deficit = inverse_normalization_constant(grid.n, alpha) - kernel @ grid.weights
        matrix[np.diag_indices_from(matrix)] = R.values * deficit

    return KernelOperator(grid, float(alpha), R, rule, matrix)


def apply_operator(K: KernelOperator, f: GridFunction) -> GridFunction:
    """Matrix–vector product (I_{α,R} f)_i."""

    K.grid.check_function(f, apply_operator)

    return f.with_values(K.matrix @ f.values)


def apply_tilde_I(
    grid: SphereGrid, alpha: float, h: GridFunction, rule: DiagonalRule = DiagonalRule.COMPENSATED
) -> GridFunction:
    """
    Normalized operator c_{n,α} ∫ |ξ - η|^{α-n} h(η) dS_η at the nodes, for any α > 0 with α != n.

    The compensated rule evaluates c Σ_j k_ij w_j (h_j - h_i) + h_i, which is exact on constants.
    For α < n the kernel is singular and the diagonal is excluded under both rules.
    """

    check_alpha(grid.n, alpha, apply_tilde_I)

    rule = DiagonalRule.from_param(rule, apply_tilde_I) or DiagonalRule.COMPENSATED

    grid.check_function(h, apply_tilde_I)

    c = normalization_constant(grid.n, alpha)
    kw = kernel_matrix(grid, alpha) * grid.weights[None, :]

    values = c * (kw @ h.values)

    if rule is DiagonalRule.COMPENSATED:
        values += h.values * (1 - c * kw.sum(axis=1))

    return h.with_values(values)


def evaluate_tilde_I(
    grid: SphereGrid, alpha: float, h: GridFunction, targets: PointsLike, target_values: FloatArray | None = None
) -> FloatArray:
    """
    Normalized operator at arbitrary points of the sphere.

    :param targets:         Unit vectors, one per row.
    :param target_values:   Values of h at the targets. When given, the singularity-subtracted form
                            c Σ_j k_tj w_j (h_j - h_t) + h_t is used, otherwise the plain quadrature.
    """

    check_alpha(grid.n, alpha, evaluate_tilde_I)
    grid.check_function(h, evaluate_tilde_I)

    pts = as_points(targets, grid.n + 1)

    dist = cdist(pts, grid.points)

    with np.errstate(divide='ignore'):
        kernel = np.where(dist > 0, dist, np.inf) ** (alpha - grid.n) if alpha < grid.n else dist ** (alpha - grid.n)

    kw = kernel * grid.weights[None, :]

    c = normalization_constant(grid.n, alpha)

    if target_values is None:
        return c * (kw @ h.values)

    tv = np.asarray(target_values, dtype=np.float64).reshape(-1)

    return c * (kw @ h.values - kw.sum(axis=1) * tv) + tv
