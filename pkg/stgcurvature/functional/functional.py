from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..enums import DiagonalRule
from ..exceptions import ParameterRangeError, SymmetryError
from ..kernels import KernelOperator, assemble_kernel, inverse_normalization_constant
from ..sphere import GridFunction, SphereGrid, harmonic_basis, is_antipodally_symmetric, smoothed_caps
from ..types import FloatArray, FuncExceptT

__all__ = [
    'FunctionalContext',

    'bilinear_H', 'weighted_mass', 'weighted_p_norm', 'multiplier',
    'quotient_J', 'quotient_J2', 'gradient_J',

    'el_residual', 'pointwise_residual',

    'default_test_basis', 'weak_form_test'
]


@dataclass(frozen=True, eq=False)
class FunctionalContext:
    """Everything the quotient J_{α,R} depends on: the grid, the exponent, R and the assembled operator."""

    grid: SphereGrid
    alpha: float
    R: GridFunction
    K: KernelOperator

    def __post_init__(self) -> None:
        if self.K.grid is not self.grid or self.K.R is not self.R or self.K.alpha != self.alpha:
            raise ParameterRangeError(
                'The kernel operator was assembled for another grid, exponent or R!', self.__class__
            )

    @classmethod
    def build(
        cls, grid: SphereGrid, alpha: float, R: GridFunction | None = None,
        rule: DiagonalRule = DiagonalRule.COMPENSATED, symmetric: bool = True
    ) -> FunctionalContext:
        """
        Assemble the operator and validate R.

        :param symmetric:           Require R to be antipodally symmetric (within 1e-12).

        :raises NonPositiveError:   R is not strictly positive.
        :raises SymmetryError:      R is not antipodally symmetric.
        """

        if R is None:
            R = GridFunction.constant(grid)

        K = assemble_kernel(grid, alpha, R, rule)

        if symmetric and not is_antipodally_symmetric(R, 1e-12):
            raise SymmetryError('R must be antipodally symmetric!', cls.build)

        return cls(grid, float(alpha), R, K)

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def p(self) -> float:
        """2n / (n + α), in (0, 1)."""

        return 2 * self.n / (self.n + self.alpha)

    @property
    def q(self) -> float:
        """Euler–Lagrange exponent p - 1 = (n - α) / (n + α), in (-1, 0)."""

        return self.p - 1

    def values(self, f: GridFunction, func: FuncExceptT, positive: bool = True) -> FloatArray:
        """Values of f after checking it lives on the grid and, if asked, is strictly positive."""

        self.grid.check_function(f, func)

        if positive:
            f.check_positive(func)

        return f.values

    def apply(self, values: FloatArray) -> FloatArray:
        """Raw matrix–vector product with the operator."""

        return self.K.matrix @ values


def bilinear_H(ctx: FunctionalContext, f: GridFunction, g: GridFunction) -> float:
    """H(f, g) = Σ_i w_i R_i f_i (I_{α,R} g)_i, the discrete ∫∫ R R f g |ξ - η|^{α-n}."""

    fv = ctx.values(f, bilinear_H, False)
    gv = ctx.values(g, bilinear_H, False)

    return float(np.sum(ctx.grid.weights * ctx.R.values * fv * ctx.apply(gv)))


def weighted_mass(ctx: FunctionalContext, f: GridFunction) -> float:
    """N(f) = Σ_i w_i R_i f_i^p."""

    fv = ctx.values(f, weighted_mass)

    return float(np.sum(ctx.grid.weights * ctx.R.values * fv ** ctx.p))


def weighted_p_norm(ctx: FunctionalContext, f: GridFunction) -> float:
    """
    (Σ_i w_i R_i f_i^p)^{1/p}.

    p < 1, so this is positively homogeneous but not a norm.
    """

    return weighted_mass(ctx, f) ** (1 / ctx.p)


def multiplier(ctx: FunctionalContext, f: GridFunction) -> float:
    """Euler–Lagrange multiplier λ = H(f, f) / N(f)."""

    return bilinear_H(ctx, f, f) / weighted_mass(ctx, f)


def quotient_J(ctx: FunctionalContext, f: GridFunction) -> float:
    """J(f) = H(f, f) / ‖f‖², invariant under f ↦ t f."""

    return bilinear_H(ctx, f, f) / weighted_mass(ctx, f) ** (2 / ctx.p)


def quotient_J2(f: GridFunction, R: GridFunction | None = None, rule: DiagonalRule = DiagonalRule.COMPENSATED) -> float:
    """
    The circle quotient for α = 2 written with angles,

        ∫∫ R(θ) R(γ) f(θ) f(γ) |2 sin((θ - γ)/2)| dθ dγ / (∫ R f^{2/3} dθ)³,

    discretized on the uniform angles with the same diagonal rule as the operator.
    Matches :py:func:`quotient_J` for n = 1, α = 2.
    """

    grid = f.grid

    if grid.n != 1:
        raise ParameterRangeError('The angular quotient lives on the circle!', quotient_J2, grid.n)

    f.check_positive(quotient_J2)

    rv = np.ones(grid.size) if R is None else R.values
    wv = grid.weights

    theta = grid.angles

    kernel = np.abs(2 * np.sin((theta[:, None] - theta[None, :]) / 2))
    np.fill_diagonal(kernel, 0.0)

    fr = f.values * rv

    numerator = float(wv * fr @ (kernel @ (wv * fr)))

    if DiagonalRule.from_param(rule, quotient_J2) is DiagonalRule.COMPENSATED:
        deficit = inverse_normalization_constant(1, 2) - kernel @ wv
        numerator += float(np.sum(wv * fr * fr * deficit))

    return numerator / float(np.sum(wv * rv * f.values ** (2 / 3))) ** 3


def gradient_J(ctx: FunctionalContext, f: GridFunction) -> GridFunction:
    """
    First variation of J in the weighted inner product ⟨u, v⟩ = Σ w_i u_i v_i:

        ∇J(f) = (2 / N^{2/p}) [R (I_{α,R} f) - λ R f^{p-1}],  λ = H / N.

    Vanishes exactly at the critical points, where I_{α,R} f = λ f^q.
    """

    fv = ctx.values(f, gradient_J)
    rv = ctx.R.values

    kf = ctx.apply(fv)

    mass = float(np.sum(ctx.grid.weights * rv * fv ** ctx.p))
    lam = float(np.sum(ctx.grid.weights * rv * fv * kf)) / mass

    return f.with_values(2 / mass ** (2 / ctx.p) * rv * (kf - lam * fv ** ctx.q))


def pointwise_residual(ctx: FunctionalContext, f: GridFunction) -> FloatArray:
    """|(I_{α,R} f)_i - λ f_i^q| / (λ f_i^q) at every node."""

    fv = ctx.values(f, el_residual)

    kf = ctx.apply(fv)

    lam = float(np.sum(ctx.grid.weights * ctx.R.values * fv * kf)) / float(
        np.sum(ctx.grid.weights * ctx.R.values * fv ** ctx.p)
    )

    target = lam * fv ** ctx.q

    return np.abs(kf - target) / target


def el_residual(ctx: FunctionalContext, f: GridFunction) -> float:
    """Relative Euler–Lagrange residual max_i |(I f)_i - λ f_i^q| / (λ f_i^q); scale invariant."""

    return float(np.max(pointwise_residual(ctx, f)))


def default_test_basis(grid: SphereGrid) -> list[FloatArray]:
    """Spherical harmonics through degree 4 and smoothed caps around the coordinate poles."""

    return harmonic_basis(grid.points, 4) + smoothed_caps(grid.points)


def weak_form_test(
    ctx: FunctionalContext, f: GridFunction, test_basis: Sequence[GridFunction | FloatArray] | None = None
) -> float:
    """
    Weak form residual of f^q R = R I_{α,R} f against test functions φ.

    For each φ the relative residual is

        |∫ f^q R φ - ∫ R φ I_{α,R} f| / (∫ f^q R |φ| + ∫ R |φ| I_{α,R} f),

    which equals |LHS - RHS| / (|LHS| + |RHS|) for φ >= 0.
    f must already be scaled to multiplier 1 (see :py:func:`rescale_to_solution`).

    :return:    The largest residual over the basis.
    """

    fv = ctx.values(f, weak_form_test)

    basis = default_test_basis(ctx.grid) if test_basis is None else [
        ctx.values(phi, weak_form_test, False) if isinstance(phi, GridFunction) else np.asarray(phi, np.float64)
        for phi in test_basis
    ]

    wr = ctx.grid.weights * ctx.R.values

    lhs_density = wr * fv ** ctx.q
    rhs_density = wr * ctx.apply(fv)

    worst = 0.0

    for phi in basis:
        lhs = lhs_density @ phi
        rhs = rhs_density @ phi

        scale = lhs_density @ np.abs(phi) + rhs_density @ np.abs(phi)

        if scale > 0:
            worst = max(worst, float(abs(lhs - rhs) / scale))

    return worst
