from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..enums import SolverMethod
from ..exceptions import ParameterRangeError, ResidualTooLargeError, SymmetryError
from ..functional import (
    DescentResult, DescentState, FunctionalContext, StepControl, descend, el_residual, multiplier,
    pointwise_residual, quotient_J
)
from ..sphere import GridFunction, is_antipodally_symmetric, symmetrize
from .diagnostics import verify_ode_s1
from .report import SolveReport

__all__ = [
    'SolverConfig',

    'minimize',

    'fixed_point_step', 'rescale_to_solution', 'solution_residual'
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    """Settings of :py:func:`minimize`."""

    method: SolverMethod = SolverMethod.PROJECTED_GRADIENT

    max_iterations: int = 2000
    """Iterations per restart."""

    tolerance: float = 1e-8
    """Target Euler–Lagrange residual."""

    positivity_floor: float = 1e-6
    """Clamp level, as a fraction of the current weighted mean of f."""

    step_control: StepControl = field(default_factory=StepControl)

    restarts: int = 1
    """Independent starts; the first is f ≡ 1, the others symmetrized random fields."""

    seed: int = 0

    hybrid_switch: float = 1e-3
    """Residual below which hybrid runs try fixed-point steps."""

    def __post_init__(self) -> None:
        object.__setattr__(self, 'method', SolverMethod.from_param(self.method, self.__class__))

        if not self.tolerance > 0:
            raise ParameterRangeError('tolerance must be positive!', self.__class__, self.tolerance)

        if not 0 < self.positivity_floor <= 1e-3:
            raise ParameterRangeError(
                'positivity_floor must be in (0, 1e-3]!', self.__class__, self.positivity_floor
            )

        if self.restarts < 1:
            raise ParameterRangeError('At least one start is needed!', self.__class__, self.restarts)

        if self.max_iterations < 0:
            raise ParameterRangeError('max_iterations must be nonnegative!', self.__class__, self.max_iterations)

        if not self.hybrid_switch > 0:
            raise ParameterRangeError('hybrid_switch must be positive!', self.__class__, self.hybrid_switch)


def fixed_point_step(ctx: FunctionalContext, f: GridFunction) -> GridFunction:
    """
    One step of the rearranged Euler–Lagrange equation: normalize(symmetrize((I_{α,R} f)^{1/q})).

    Fixed points are the critical points of J, up to scale.
    """

    fv = ctx.values(f, fixed_point_step)

    mapped = symmetrize(f.with_values(ctx.apply(fv) ** (1 / ctx.q))).values

    mass = float(np.sum(ctx.grid.weights * ctx.R.values * mapped ** ctx.p))

    return f.with_values(mapped / mass ** (1 / ctx.p))


def _scale_to_multiplier_one(ctx: FunctionalContext, f: GridFunction) -> GridFunction:
    # t f solves I(t f) = (t f)^q once t^{1-q} λ = 1, i.e. t = λ^{-(n+α)/(2α)}
    t = multiplier(ctx, f) ** (-(ctx.n + ctx.alpha) / (2 * ctx.alpha))

    return f.with_values((t * f.values) ** ctx.q)


def rescale_to_solution(ctx: FunctionalContext, f: GridFunction, tolerance: float = 1e-8) -> GridFunction:
    """
    Turn a critical point f of J into the solution u of u = I_{α,R}(u^{1/q}) with multiplier 1.

    :raises ResidualTooLargeError:  el_residual(f) exceeds the tolerance.
    """

    residual = el_residual(ctx, f)

    if residual > tolerance:
        raise ResidualTooLargeError(
            'f is not a critical point: residual {residual} above {tolerance}!', rescale_to_solution,
            residual=residual, tolerance=tolerance
        )

    return _scale_to_multiplier_one(ctx, f)


def solution_residual(ctx: FunctionalContext, u: GridFunction) -> float:
    """max_i |u_i - (I_{α,R} u^{1/q})_i| / u_i."""

    uv = ctx.values(u, solution_residual)

    return float(np.max(np.abs(uv - ctx.apply(uv ** (1 / ctx.q))) / uv))


def _fixed_point_run(ctx: FunctionalContext, f0: GridFunction, config: SolverConfig) -> DescentResult:
    f = fixed_point_step(ctx, f0)
    state = DescentState(ctx, f.values)

    trace = [state.J]
    residual = state.residual
    iterations = 0

    while residual > config.tolerance and iterations < config.max_iterations:
        iterations += 1

        f = fixed_point_step(ctx, f)
        state = DescentState(ctx, f.values)

        residual = state.residual
        trace.append(state.J)

        log.debug('fixed-point iteration %d: J=%.17g residual=%.3e', iterations, state.J, residual)

    return DescentResult(f, state.J, residual, state.lam, iterations, residual <= config.tolerance, trace)


def _run(ctx: FunctionalContext, f0: GridFunction, config: SolverConfig) -> DescentResult:
    if config.method is SolverMethod.FIXED_POINT:
        return _fixed_point_run(ctx, f0, config)

    hybrid = config.method is SolverMethod.HYBRID

    return descend(
        ctx, f0, max_iterations=config.max_iterations, tolerance=config.tolerance,
        step_control=config.step_control, positivity_floor=config.positivity_floor, symmetric=True,
        proposal=fixed_point_step if hybrid else None, proposal_below=config.hybrid_switch if hybrid else 0.0
    )


def _starts(ctx: FunctionalContext, config: SolverConfig) -> list[GridFunction]:
    rng = np.random.default_rng(config.seed)

    starts = [GridFunction.constant(ctx.grid)]

    for _ in range(config.restarts - 1):
        starts.append(symmetrize(GridFunction(ctx.grid, np.exp(rng.normal(0.0, 0.5, ctx.grid.size)))))

    return starts


def _better(candidate: DescentResult, best: DescentResult) -> bool:
    if abs(candidate.J_value - best.J_value) <= 1e-10 * abs(best.J_value):
        return candidate.residual < best.residual

    return candidate.J_value < best.J_value


def minimize(ctx: FunctionalContext, config: SolverConfig = SolverConfig()) -> SolveReport:
    """
    Minimize J_{α,R} over positive antipodally symmetric grid functions.

    Runs ``config.restarts`` independent starts with the configured method and reports the best run:
    smallest J, ties within 1e-10 relative broken by the smaller residual. Non-convergence is reported
    through ``converged``, never raised.

    :raises NonPositiveError:   R is not strictly positive.
    :raises SymmetryError:      R is not antipodally symmetric.
    """

    ctx.R.check_positive(minimize, 'R')

    if not is_antipodally_symmetric(ctx.R, 1e-12):
        raise SymmetryError('R must be antipodally symmetric!', minimize)

    runs = list[DescentResult]()

    for index, f0 in enumerate(_starts(ctx, config)):
        result = _run(ctx, f0, config)

        log.info(
            'start %d (%s): J=%.15g residual=%.3e iterations=%d converged=%s',
            index, config.method, result.J_value, result.residual, result.iterations, result.converged
        )

        runs.append(result)

    best = runs[0]

    for result in runs[1:]:
        if _better(result, best):
            best = result

    f_star = best.f
    u_star = _scale_to_multiplier_one(ctx, f_star)

    values = [run.J_value for run in runs]
    spread = (max(values) - min(values)) / abs(min(values))

    diagnostics: dict[str, Any] = {
        'method': str(config.method),
        'floor_active_nodes': best.floor_active_nodes,
        'antipodal_defect': float(
            np.max(np.abs(f_star.values - f_star.values[ctx.grid.antipode])) / np.max(f_star.values)
        ),
        'solution_residual': solution_residual(ctx, u_star),
        'restart_J': values,
        'restart_spread': spread,
        'stalled': best.stalled,
        'proposals_accepted': best.proposals_accepted
    }

    if ctx.n == 1 and ctx.alpha == 2:
        diagnostics['ode_residual'] = verify_ode_s1(u_star, ctx.R)

    if not best.converged:
        log.warning(
            'no start reached the tolerance %.1e; best residual %.3e after %d iterations',
            config.tolerance, best.residual, best.iterations
        )

    if len(runs) > 1 and spread > 1e-6 and sum(run.converged for run in runs) > 1:
        log.warning('converged starts disagree: relative J spread %.3e', spread)

    report = SolveReport(
        f_star, u_star, quotient_J(ctx, f_star), best.multiplier, best.residual, best.iterations,
        list(best.trace), best.converged, diagnostics, ctx.R, pointwise_residual(ctx, f_star)
    )

    log.info('solve finished: J=%.15g residual=%.3e converged=%s', report.J_value, report.el_residual, report.converged)

    return report
