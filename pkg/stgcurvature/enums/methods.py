from __future__ import annotations

from .base import CustomStrEnum

__all__ = [
    'SolverMethod',
    'DiagonalRule',
    'RPreset',
    'VerifySuite'
]


class SolverMethod(CustomStrEnum):
    """Iteration used by the minimizer."""

    PROJECTED_GRADIENT = 'projected-gradient'
    """Backtracking gradient descent with symmetrization, floor clamping and renormalization."""

    FIXED_POINT = 'fixed-point'
    """Iterate the rearranged Euler–Lagrange map f ↦ (I f)^(1/q)."""

    HYBRID = 'hybrid'
    """Projected gradient, switching to fixed-point candidates once the residual is small."""


class DiagonalRule(CustomStrEnum):
    """How the diagonal (self-interaction) node of the kernel matrix is treated."""

    ZERO = 'zero'
    """Plain Nyström rule: the diagonal contributes nothing."""

    COMPENSATED = 'compensated'
    """
    Singularity subtraction: the diagonal absorbs the exact integral of the kernel minus the
    off-diagonal quadrature of it, so constants are integrated exactly.
    """


class RPreset(CustomStrEnum):
    """Named curvature functions accepted by problem configs."""

    CONSTANT = 'constant'
    EVEN_HARMONIC = 'even-harmonic'


class VerifySuite(CustomStrEnum):
    """Verification suites runnable from the command line."""

    CONSTANTS = 'constants'
    STEREOGRAPHIC = 'stereographic'
    BUBBLE = 'bubble'
    COVARIANCE = 'covariance'
    MANIFOLD = 'manifold'
    ODE = 'ode'
