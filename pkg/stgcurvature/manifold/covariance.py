from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np
from scipy import linalg

from ..exceptions import GridMismatchError, ParameterRangeError, SingularSystemError
from ..types import ArrayLike, FloatArray
from ..utils import relative_discrepancy
from .discrete import ConformalFactor, DiscreteManifold

__all__ = [
    'conformal_green', 'conformal_manifold',

    'green_exponent', 'manifold_kernel', 'manifold_operator',

    'verify_covariance_theorem',

    'DensitySolve', 'solve_density', 'extract_Q_alpha'
]

log = logging.getLogger(__name__)


def conformal_green(M: DiscreteManifold, phi: ConformalFactor) -> FloatArray:
    """G₁(y, x) = φ(y)^{-1} φ(x)^{-1} G₀(y, x); symmetric and positive off the diagonal whenever G₀ is."""

    phi.check(M, None, conformal_green)

    inverse = 1 / phi.phi

    return inverse[:, None] * M.green * inverse[None, :]


def conformal_manifold(M: DiscreteManifold, phi: ConformalFactor) -> DiscreteManifold:
    """(M, g₁) with G₁ from :py:func:`conformal_green` and dV₁ = φ^{2n/(n-α)} dV₀."""

    return DiscreteManifold(
        M.n, phi.power(2 * M.n / (M.n - phi.alpha)) * M.volumes, conformal_green(M, phi), M.points
    )


def green_exponent(n: int, alpha: float) -> float:
    """(α - n) / (2 - n), the power turning the Green function into the α kernel."""

    if n == 2:
        raise ParameterRangeError('The Green exponent is undefined for n = 2!', green_exponent, n)

    if alpha == n:
        raise ParameterRangeError('α must differ from n!', green_exponent, alpha)

    return (alpha - n) / (2 - n)


def manifold_kernel(M: DiscreteManifold, alpha: float) -> FloatArray:
    """[G(y, x)]^{(α-n)/(2-n)} off the diagonal, 0 on it."""

    exponent = green_exponent(M.n, alpha)

    green = np.array(M.green)
    np.fill_diagonal(green, 1.0)

    kernel = green ** exponent
    np.fill_diagonal(kernel, 0.0)

    return kernel


def manifold_operator(
    M: DiscreteManifold, alpha: float, f: ArrayLike, volumes: ArrayLike | None = None
) -> FloatArray:
    """
    x ↦ Σ_{y != x} [G(y, x)]^{(α-n)/(2-n)} f(y) V(y).

    :param volumes:     Overrides the manifold volumes, e.g. with a conformally changed measure.
    """

    fv = np.asarray(f, dtype=np.float64).reshape(-1)
    vv = M.volumes if volumes is None else np.asarray(volumes, dtype=np.float64).reshape(-1)

    GridMismatchError.check_length(manifold_operator, M.size, fv.size, vv.size)

    return manifold_kernel(M, alpha) @ (fv * vv)


def verify_covariance_theorem(M: DiscreteManifold, phi: ConformalFactor, u: ArrayLike) -> float:
    """
    Evaluate both sides of the covariance identity

        I_{g₁}(u) = φ^{(α-n)/(n-2)} I_{g₀}(φ^{2n/(n-α) + (α-n)/(n-2)} u)

    independently on the discrete manifold. The left side uses the rescaled Green matrix and measure.

    :return:    Max relative discrepancy; rounding level, since the identity is exact on discrete data.
    """

    phi.check(M, None, verify_covariance_theorem)

    n, alpha = M.n, phi.alpha
    uv = np.asarray(u, dtype=np.float64).reshape(-1)

    lhs = manifold_operator(conformal_manifold(M, phi), alpha, uv)

    outer = (alpha - n) / (n - 2)
    inner = 2 * n / (n - alpha) + outer

    rhs = phi.power(outer) * manifold_operator(M, alpha, phi.power(inner) * uv)

    return relative_discrepancy(lhs, rhs)


class DensitySolve(NamedTuple):
    density: FloatArray
    residual: float
    """‖A q - rhs‖ / ‖rhs‖."""


def solve_density(
    M: DiscreteManifold, alpha: float, weight: ArrayLike, rhs: ArrayLike, regularization: float = 1e-10
) -> DensitySolve:
    """
    Solve Σ_{y != x} [G(y, x)]^{(α-n)/(2-n)} weight(y) V(y) q(y) = rhs(x) for q.

    With ``regularization`` > 0 this is ridge least squares with parameter regularization·σ_max;
    with 0 it is a direct solve.

    :raises SingularSystemError:    Unregularized solve on a singular system.
    """

    if regularization < 0:
        raise ParameterRangeError('Regularization must be nonnegative!', solve_density, regularization)

    wv = np.asarray(weight, dtype=np.float64).reshape(-1)
    bv = np.asarray(rhs, dtype=np.float64).reshape(-1)

    GridMismatchError.check_length(solve_density, M.size, wv.size, bv.size)

    system = manifold_kernel(M, alpha) * (wv * M.volumes)[None, :]

    if regularization == 0:
        if np.linalg.matrix_rank(system) < M.size:
            raise SingularSystemError('The density system is singular; pass a positive regularization!', solve_density)

        density = linalg.solve(system, bv)
    else:
        mu = regularization * float(linalg.svdvals(system)[0])

        augmented = np.concatenate([system, mu * np.eye(M.size)])

        density = linalg.lstsq(augmented, np.concatenate([bv, np.zeros(M.size)]))[0]

    residual = float(np.linalg.norm(system @ density - bv) / np.linalg.norm(bv))

    log.debug('density solve on %d nodes: residual %.3e', M.size, residual)

    return DensitySolve(density, residual)


def extract_Q_alpha(
    M: DiscreteManifold, alpha: float, phi: ConformalFactor, regularization: float = 1e-10
) -> DensitySolve:
    """
    Recover Q_α of g₁ = φ^{4/(n-α)} g₀ from

        φ(x) = Σ_{y != x} [G₀(y, x)]^{(α-n)/(2-n)} Q(y) φ(y)^{(n+α)/(n-α)} V₀(y).

    :raises SingularSystemError:    regularization = 0 and the system is singular.
    """

    phi.check(M, alpha, extract_Q_alpha)

    return solve_density(M, alpha, phi.power((M.n + alpha) / (M.n - alpha)), phi.phi, regularization)
