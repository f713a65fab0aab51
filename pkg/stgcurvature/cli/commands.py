from __future__ import annotations

import logging
from math import isclose

import numpy as np

from ..exceptions import CustomError, ParameterRangeError
from ..solver import minimize, write_report
from ..sphere import GridFunction, build_grid, integrate, is_antipodally_symmetric
from ..types import FilePathType
from .config import build_problem, load_config

__all__ = [
    'EXIT_OK', 'EXIT_NOT_CONVERGED', 'EXIT_INVALID',

    'cmd_solve', 'cmd_grid_info'
]

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_INVALID = 3


def cmd_solve(config_path: FilePathType) -> int:
    """
    Solve the configured problem and write its report and field dump.

    :return:    0 on convergence, 2 when the solver stopped short (the report is still written),
                3 for a config that cannot be loaded, that violates the problem hypotheses
                or whose outputs cannot be written.
    """

    try:
        config = load_config(config_path)
        ctx = build_problem(config)
    except CustomError as e:
        log.error('%s', e)
        return EXIT_INVALID

    log.info(
        'solving n=%d α=%g on %d nodes with %s', config.n, config.alpha, ctx.grid.size, config.solver.method
    )

    report = minimize(ctx, config.solver)

    if config.report is None and config.fields is None:
        log.warning('no output paths configured, the report is not saved')
    else:
        try:
            write_report(report, config.report, config.fields)
        except (CustomError, OSError) as e:
            log.error('could not write the report: %s', e)
            return EXIT_INVALID

    print(f'J = {report.J_value:.15g}  λ = {report.multiplier:.15g}  residual = {report.el_residual:.3e}')

    if not report.converged:
        log.warning('not converged after %d iterations', report.iterations)
        return EXIT_NOT_CONVERGED

    return EXIT_OK


def cmd_grid_info(n: int, resolution: int) -> int:
    """Print node count, total weight against |S^n| and the antipodal closure check."""

    try:
        grid = build_grid(n, resolution)
    except ParameterRangeError as e:
        log.error('%s', e)
        return EXIT_INVALID

    total = integrate(grid, GridFunction.constant(grid))

    closed = bool(
        np.array_equal(grid.antipode[grid.antipode], np.arange(grid.size))
        and np.abs(grid.points + grid.points[grid.antipode]).max() <= 1e-12
    )

    print(f'nodes: {grid.size}')
    print(f'total weight: {total:.17g}  |S^{n}| = {grid.area:.17g}  match: {isclose(total, grid.area, rel_tol=1e-12)}')
    print(f'antipodal closure: {"OK" if closed else "BROKEN"}')
    print(f'weights symmetric: {is_antipodally_symmetric(GridFunction(grid, grid.weights))}')

    return EXIT_OK
