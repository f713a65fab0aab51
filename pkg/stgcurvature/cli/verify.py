from __future__ import annotations

import logging
from typing import Callable, NamedTuple

import numpy as np

from ..enums import VerifySuite
from ..exceptions import NotFoundEnumValue
from ..functional import FunctionalContext
from ..kernels import normalization_constant, zonal_quadrature_constant
from ..manifold import ConformalFactor, random_manifold, regular_s3_sample, verify_covariance_theorem
from ..solver import SolverConfig, minimize
from ..sphere import GridFunction, build_grid
from ..stereographic import bubble_residual, verify_distance_identity, verify_sphere_covariance
from ..types import FilePathType, FloatArray
from ..utils import write_json
from .commands import EXIT_INVALID, EXIT_OK

__all__ = [
    'Check',

    'CONSTANT_CASES', 'SUITES',

    'run_suite', 'cmd_verify'
]

log = logging.getLogger(__name__)


class Check(NamedTuple):
    name: str
    value: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.threshold)

    def __str__(self) -> str:
        return f'{"PASS" if self.passed else "FAIL"} {self.name} {self.value:.3e} {self.threshold:.1e}'


CONSTANT_CASES: tuple[tuple[int, float], ...] = ((1, 2.0), (1, 3.5), (2, 3.0), (2, 4.0), (3, 4.0))

QUADRATURE_NODES = 64

_REFERENCE_CONSTANTS = {(1, 2.0): 1 / 8, (2, 4.0): 1 / (8 * np.pi), (3, 4.0): 15 / (128 * np.pi)}


def _suite_constants() -> list[Check]:
    checks = list[Check]()

    for n, alpha in CONSTANT_CASES:
        c = normalization_constant(n, alpha)

        quadrature = zonal_quadrature_constant(n, alpha, QUADRATURE_NODES)

        checks.append(Check(
            f'quadrature-constant[n={n},α={alpha:g},nodes={QUADRATURE_NODES}]', abs(quadrature - c) / c, 1e-6
        ))

        if (n, alpha) in _REFERENCE_CONSTANTS:
            reference = _REFERENCE_CONSTANTS[n, alpha]

            checks.append(Check(f'closed-form-constant[n={n},α={alpha:g}]', abs(c - reference) / reference, 1e-12))

    return checks


def _suite_stereographic() -> list[Check]:
    rng = np.random.default_rng(0)

    checks = list[Check]()

    for n in (1, 2, 3):
        directions = rng.normal(size=(2, 1000, n))
        directions /= np.linalg.norm(directions, axis=2, keepdims=True)

        radii = 10 ** rng.uniform(-3, 3, size=(2, 1000, 1))

        x, y = directions * radii

        checks.append(Check(f'distance-identity[n={n}]', verify_distance_identity(x, y, n), 1e-12))

    return checks


def _suite_bubble() -> list[Check]:
    rng = np.random.default_rng(0)

    checks = list[Check]()

    for eps in (0.5, 1.0, 2.0):
        samples = rng.uniform(-3 * eps, 3 * eps, size=(20, 2))

        checks.append(Check(f'bubble[ε={eps:g}]', bubble_residual(eps, samples), 1e-3))

    return checks


def _smooth_u(xi: FloatArray) -> FloatArray:
    return 1 + 0.5 * xi[:, -1] + 0.25 * xi[:, 0] ** 2


def _suite_covariance() -> list[Check]:
    checks = list[Check]()

    for n, alpha in ((1, 2.0), (2, 4.0)):
        for label, u in (('constant', lambda xi: np.ones(xi.shape[0])), ('smooth', _smooth_u)):
            coarse = verify_sphere_covariance(u, n, alpha)

            checks.append(Check(f'sphere-covariance[n={n},α={alpha:g},{label}]', coarse, 1e-3))

            if label == 'smooth':
                fine = verify_sphere_covariance(u, n, alpha, refinement=1)

                checks.append(Check(f'covariance-refinement[n={n},α={alpha:g}]', fine - coarse, 0.0))

    return checks


def _suite_manifold() -> list[Check]:
    rng = np.random.default_rng(0)

    worst = 0.0

    for seed in range(10):
        M = random_manifold(3, 20, seed)
        phi = ConformalFactor(rng.uniform(0.5, 2.0, M.size), 4.0, M.n)

        worst = max(worst, verify_covariance_theorem(M, phi, rng.uniform(0.5, 2.0, M.size)))

    checks = [Check('manifold-covariance[random]', worst, 1e-12)]

    M = regular_s3_sample()
    points = np.asarray(M.points)

    phi = ConformalFactor(1 + 0.5 * points[:, 0] ** 2, 4.0, 3)

    checks.append(Check(
        'manifold-covariance[24-cell]', verify_covariance_theorem(M, phi, 1 + points[:, 3]), 1e-12
    ))

    return checks


def _suite_ode() -> list[Check]:
    grid = build_grid(1, 512)

    R = GridFunction.from_callable(grid, lambda xi: 1 + 0.5 * (xi[:, 0] ** 2 - xi[:, 1] ** 2))

    report = minimize(FunctionalContext.build(grid, 2.0, R), SolverConfig(tolerance=1e-8))

    return [
        Check('ode-solve-residual', report.el_residual, 1e-6),
        Check('ode-equivalence', float(report.diagnostics['ode_residual']), 1e-3)
    ]


SUITES: dict[VerifySuite, Callable[[], list[Check]]] = {
    VerifySuite.CONSTANTS: _suite_constants,
    VerifySuite.STEREOGRAPHIC: _suite_stereographic,
    VerifySuite.BUBBLE: _suite_bubble,
    VerifySuite.COVARIANCE: _suite_covariance,
    VerifySuite.MANIFOLD: _suite_manifold,
    VerifySuite.ODE: _suite_ode
}


def run_suite(suite: VerifySuite | str) -> list[Check]:
    """Run one verification suite with its default parameters."""

    suite = VerifySuite.from_param(suite, run_suite) or VerifySuite.CONSTANTS

    log.info('running %s checks', suite)

    return SUITES[suite]()


def cmd_verify(suite: str, report: FilePathType | None = None) -> int:
    """
    Run a suite, print ``PASS|FAIL name value threshold`` per check and optionally dump them as JSON.

    :return:    0 iff every check passes, 1 otherwise, 3 for an unknown suite.
    """

    try:
        checks = run_suite(suite)
    except NotFoundEnumValue as e:
        log.error('%s', e)
        return EXIT_INVALID

    for check in checks:
        print(check)

    passed = all(check.passed for check in checks)

    if report is not None:
        write_json(report, {
            'suite': str(suite),
            'passed': passed,
            'checks': [
                {'name': c.name, 'value': c.value, 'threshold': c.threshold, 'passed': c.passed} for c in checks
            ]
        }, func=cmd_verify)

    return EXIT_OK if passed else 1
