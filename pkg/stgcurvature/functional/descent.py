from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..exceptions import ParameterRangeError
from ..sphere import GridFunction
from ..types import FloatArray
from .functional import FunctionalContext, quotient_J

__all__ = [
    'StepControl',

    'DescentState', 'DescentResult',

    'project', 'descend', 'hls_lower_bound'
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepControl:
    """Armijo backtracking parameters."""

    initial_step: float = 1.0
    shrink: float = 0.5
    sufficient_decrease: float = 1e-4
    growth: float = 1.5
    min_step: float = 1e-14

    def __post_init__(self) -> None:
        if not self.initial_step > 0:
            raise ParameterRangeError('initial_step must be positive!', self.__class__, self.initial_step)

        if not 0 < self.shrink < 1:
            raise ParameterRangeError('shrink must be in (0, 1)!', self.__class__, self.shrink)

        if not 0 < self.sufficient_decrease < 0.5:
            raise ParameterRangeError(
                'sufficient_decrease must be in (0, 1/2)!', self.__class__, self.sufficient_decrease
            )

        if not self.growth >= 1:
            raise ParameterRangeError('growth must be at least 1!', self.__class__, self.growth)

        if not self.min_step > 0:
            raise ParameterRangeError('min_step must be positive!', self.__class__, self.min_step)


class DescentState:
    """
    An iterate with the quantities every step needs: I f, N(f), H(f, f), J(f) and λ.

    J differences between states are computed without cancellation (see :py:meth:`delta_J`),
    so descent keeps making progress when J changes by less than its own rounding error.
    """

    __slots__ = ('ctx', 'f', 'kf', 'mass', 'energy', 'J', 'lam')

    def __init__(self, ctx: FunctionalContext, f: FloatArray, kf: FloatArray | None = None) -> None:
        self.ctx = ctx
        self.f = f
        self.kf = ctx.apply(f) if kf is None else kf

        wr = ctx.grid.weights * ctx.R.values

        self.mass = float(np.sum(wr * f ** ctx.p))
        self.energy = float(np.sum(wr * f * self.kf))
        self.J = self.energy / self.mass ** (2 / ctx.p)
        self.lam = self.energy / self.mass

    @property
    def gradient(self) -> FloatArray:
        ctx = self.ctx

        return 2 / self.mass ** (2 / ctx.p) * ctx.R.values * (self.kf - self.lam * self.f ** ctx.q)

    @property
    def residual(self) -> float:
        target = self.lam * self.f ** self.ctx.q

        return float(np.max(np.abs(self.kf - target) / target))

    def delta_J(self, other: DescentState) -> float:
        """J(other) - J(self), accurate to rounding relative to the difference itself."""

        ctx = self.ctx
        wr = ctx.grid.weights * ctx.R.values

        d = other.f - self.f

        delta_energy = float(np.sum(wr * d * (self.kf + other.kf)))
        delta_mass = float(np.sum(wr * self.f ** ctx.p * np.expm1(ctx.p * np.log1p(d / self.f))))

        return (
            delta_energy / other.mass ** (2 / ctx.p)
            + self.J * float(np.expm1(-(2 / ctx.p) * np.log1p(delta_mass / self.mass)))
        )


def project(ctx: FunctionalContext, values: FloatArray, floor_ref: FloatArray, positivity_floor: float,
            symmetric: bool = True) -> tuple[FloatArray, int]:
    """
    Map a trial point back to the admissible set: antipodal average (if ``symmetric``), clamp at
    ``positivity_floor`` times the weighted mean of ``floor_ref``, then scale to ‖f‖ = 1.

    :return:    The projected values and the number of nodes sitting on the floor.
    """

    weights = ctx.grid.weights

    if symmetric:
        values = (values + values[ctx.grid.antipode]) / 2

    floor = positivity_floor * float(weights @ floor_ref) / float(weights.sum())

    clamped = np.maximum(values, floor)

    mass = float(np.sum(weights * ctx.R.values * clamped ** ctx.p))

    return clamped / mass ** (1 / ctx.p), int(np.count_nonzero(values <= floor))


@dataclass
class DescentResult:
    f: GridFunction
    J_value: float
    residual: float
    multiplier: float
    iterations: int
    converged: bool
    trace: list[float] = field(default_factory=list)
    floor_active_nodes: int = 0
    stalled: bool = False
    proposals_accepted: int = 0


Proposal = Callable[[FunctionalContext, GridFunction], GridFunction]


def descend(
    ctx: FunctionalContext, f0: GridFunction, *, max_iterations: int = 500, tolerance: float = 1e-8,
    step_control: StepControl = StepControl(), positivity_floor: float = 1e-6, symmetric: bool = True,
    proposal: Proposal | None = None, proposal_below: float = 0.0
) -> DescentResult:
    """
    Projected gradient descent on J with Armijo backtracking.

    Each iteration steps along -∇J, projects (symmetrize, clamp, renormalize) and accepts the trial
    when J(trial) - J(f) <= min(0, c ⟨∇J, trial - f⟩). Accepted steps grow the step length,
    rejected ones shrink it.
    The trace holds J of every accepted iterate and never increases.

    :param f0:                  Positive start.
    :param tolerance:           Stop when the Euler–Lagrange residual drops to this.
    :param proposal:            Optional map tried before the gradient step once the residual is below
                                ``proposal_below``; its output is kept when it lowers the residual without raising J.
    """

    ctx.grid.check_function(f0, descend)
    f0.check_positive(descend)

    weights = ctx.grid.weights
    control = step_control

    start, active = project(ctx, f0.values, f0.values, positivity_floor, symmetric)

    state = DescentState(ctx, start)
    trace = [state.J]
    residual = state.residual

    step = control.initial_step
    iterations = 0
    accepted_proposals = 0
    stalled = False

    while residual > tolerance and iterations < max_iterations:
        iterations += 1

        if proposal is not None and residual < proposal_below:
            candidate = DescentState(ctx, proposal(ctx, f0.with_values(state.f)).values)

            delta = state.delta_J(candidate)

            if candidate.residual < residual and delta <= 0:
                state, residual, active = candidate, candidate.residual, 0
                trace.append(trace[-1] + delta)
                accepted_proposals += 1

                log.debug('iteration %d: proposal accepted, J=%.17g residual=%.3e', iterations, trace[-1], residual)
                continue

        grad = state.gradient

        while True:
            trial_values, trial_active = project(
                ctx, state.f - step * grad, state.f, positivity_floor, symmetric
            )

            trial = DescentState(ctx, trial_values)
            delta = state.delta_J(trial)

            slope = float(weights @ (grad * (trial_values - state.f)))

            if delta <= min(0.0, control.sufficient_decrease * slope):
                break

            step *= control.shrink

            if step < control.min_step:
                stalled = True
                break

        if stalled:
            log.debug('iteration %d: step below %.1e, stopping', iterations, control.min_step)
            break

        state, active = trial, trial_active
        residual = state.residual
        trace.append(trace[-1] + delta)

        step *= control.growth

        log.debug('iteration %d: J=%.17g residual=%.3e step=%.3e', iterations, trace[-1], residual, step)

    return DescentResult(
        f0.with_values(state.f), state.J, residual, state.lam, iterations, residual <= tolerance,
        trace, active, stalled, accepted_proposals
    )


def hls_lower_bound(
    ctx: FunctionalContext, trials: int = 100, seed: int = 0, max_iterations: int = 200,
    step_control: StepControl = StepControl()
) -> float:
    """
    Multistart estimate of the discrete reversed Hardy–Littlewood–Sobolev constant C₂ = inf H(f, f) / ‖f‖².

    Starts are f ≡ 1 and log-normal random fields, descended over all positive functions (no symmetrization).
    The smallest J met is returned: an upper bound for the discrete constant.

    :raises ParameterRangeError:    R is not ≡ 1, or fewer than 100 trials.
    """

    if not np.all(ctx.R.values == 1.0):
        raise ParameterRangeError('The lower bound is estimated with R ≡ 1!', hls_lower_bound)

    if trials < 100:
        raise ParameterRangeError('At least 100 trials are needed!', hls_lower_bound, trials)

    rng = np.random.default_rng(seed)

    best = np.inf

    for trial in range(trials):
        if trial == 0:
            start = np.ones(ctx.grid.size)
        else:
            start = np.exp(rng.normal(0.0, 0.5, ctx.grid.size))

        f0 = GridFunction(ctx.grid, start)

        best = min(best, quotient_J(ctx, f0))

        result = descend(
            ctx, f0, max_iterations=max_iterations, tolerance=0.0, step_control=step_control, symmetric=False
        )

        best = min(best, result.J_value)

    log.info('reversed HLS constant estimate over %d starts: %.12g', trials, best)

    return float(best)
