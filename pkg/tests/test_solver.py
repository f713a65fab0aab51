import logging
from math import pi

import numpy as np
import pytest

from stgcurvature import (
    FunctionalContext, GridFunction, GridMismatchError, InvalidConfigError, ParameterRangeError,
    ResidualTooLargeError, SolveReport, SolverConfig, SolverMethod, SymmetryError, build_grid, el_residual,
    fixed_point_step, mass_bound_check, minimize, multiplier, read_report, rescale_to_solution, solution_residual,
    spherical_harmonic, symmetrize, verify_ode_s1, weak_form_test, weighted_mass, write_report
)


def _cos2(xi: np.ndarray) -> np.ndarray:
    return 1 + 0.5 * (xi[:, 0] ** 2 - xi[:, 1] ** 2)


def _circle_ctx(resolution: int, R=None) -> FunctionalContext:
    grid = build_grid(1, resolution)

    return FunctionalContext.build(grid, 2.0, None if R is None else GridFunction.from_callable(grid, R))


def test_constant_R_on_circle() -> None:
    ctx = _circle_ctx(256)

    report = minimize(ctx)

    assert report.converged
    assert report.el_residual <= 1e-8
    assert report.J_value == pytest.approx(2 / pi ** 2, rel=1e-6)
    assert report.multiplier == pytest.approx(report.J_value, rel=1e-12)
    assert multiplier(ctx, GridFunction.constant(ctx.grid)) == pytest.approx(8.0, rel=1e-12)
    assert np.allclose(report.u_star.values, 2 ** 0.75, rtol=1e-6, atol=0)
    assert report.diagnostics['solution_residual'] <= 2e-8
    assert report.diagnostics['ode_residual'] <= 1e-10


def test_non_constant_R_on_circle() -> None:
    ctx = _circle_ctx(512, _cos2)

    report = minimize(ctx, SolverConfig(tolerance=1e-8))

    u = report.u_star.values

    assert report.converged
    assert report.el_residual <= 1e-6
    assert np.all(u > 0)
    assert np.max(np.abs(u - u[ctx.grid.antipode])) <= 1e-12 * np.max(u)
    assert report.diagnostics['floor_active_nodes'] == 0
    assert report.diagnostics['ode_residual'] <= 1e-3
    assert verify_ode_s1(report.u_star, ctx.R) <= 1e-3
    assert np.all(np.diff(report.J_trace) <= 0)


def test_three_sphere() -> None:
    grid = build_grid(3, 8)

    R = GridFunction.from_callable(grid, lambda xi: 1 + 0.3 * spherical_harmonic(xi, 2, 0))

    report = minimize(FunctionalContext.build(grid, 4.0, R), SolverConfig(tolerance=1e-5))

    u = report.u_star.values

    assert report.converged
    assert report.el_residual <= 1e-4
    assert np.all(u > 0)
    assert np.max(np.abs(u - u[grid.antipode])) <= 1e-12 * np.max(u)


def test_fixed_point_step_on_constant() -> None:
    ctx = _circle_ctx(32)

    out = fixed_point_step(ctx, GridFunction.constant(ctx.grid, 5.0))

    assert np.allclose(out.values, out.values[0], rtol=1e-14, atol=0)
    assert weighted_mass(ctx, out) == pytest.approx(1.0, rel=1e-12)
    assert el_residual(ctx, out) <= 1e-10


def test_fixed_point_step_keeps_symmetry() -> None:
    ctx = _circle_ctx(64, _cos2)

    f = symmetrize(GridFunction(ctx.grid, np.random.default_rng(0).uniform(0.5, 2.0, 64)))

    out = fixed_point_step(ctx, f).values

    assert np.all(out > 0)
    assert np.array_equal(out, out[ctx.grid.antipode])


def test_rescale_constant_to_solution() -> None:
    ctx = _circle_ctx(64)

    f = GridFunction.constant(ctx.grid, 3.0)

    u = rescale_to_solution(ctx, f)

    assert np.allclose(u.values, 2 ** 0.75, rtol=1e-12, atol=0)
    assert solution_residual(ctx, u) <= 1e-12


def test_rescale_rejects_non_critical_f() -> None:
    ctx = _circle_ctx(64, _cos2)

    with pytest.raises(ResidualTooLargeError):
        rescale_to_solution(ctx, GridFunction.from_callable(ctx.grid, lambda xi: 1 + xi[:, 0] ** 2))


def test_ode_check_on_closed_form() -> None:
    grid = build_grid(1, 64)

    assert verify_ode_s1(GridFunction.constant(grid, 2 ** 0.75)) <= 1e-14
    assert verify_ode_s1(GridFunction.constant(grid, 1.0)) > 0.1


def test_ode_check_only_on_circle() -> None:
    with pytest.raises(ParameterRangeError):
        verify_ode_s1(GridFunction.constant(build_grid(2, 8)))


def test_minimize_is_deterministic() -> None:
    ctx = _circle_ctx(64, _cos2)

    config = SolverConfig(restarts=3, seed=7, tolerance=1e-9)

    a, b = minimize(ctx, config), minimize(ctx, config)

    assert len(a.J_trace) == len(b.J_trace)
    assert np.allclose(a.J_trace, b.J_trace, rtol=1e-13, atol=0)
    assert len(a.diagnostics['restart_J']) == 3


@pytest.mark.parametrize('method', [SolverMethod.FIXED_POINT, SolverMethod.HYBRID])
def test_methods_agree(method: SolverMethod) -> None:
    ctx = _circle_ctx(128, _cos2)

    reference = minimize(ctx, SolverConfig(tolerance=1e-10))
    other = minimize(ctx, SolverConfig(method=method, tolerance=1e-10))

    assert reference.converged and other.converged
    assert other.diagnostics['method'] == str(method)

    u, v = reference.u_star.values, other.u_star.values

    assert np.max(np.abs(u - v) / np.abs(u)) <= 1e-5


def test_non_convergence_is_reported(caplog) -> None:
    ctx = _circle_ctx(64, _cos2)

    with caplog.at_level(logging.WARNING):
        report = minimize(ctx, SolverConfig(max_iterations=1, tolerance=1e-12))

    assert not report.converged
    assert report.iterations <= 1
    assert 'no start reached the tolerance' in caplog.text


@pytest.mark.parametrize('kwargs', [
    {'tolerance': 0.0}, {'positivity_floor': 1e-2}, {'restarts': 0}, {'max_iterations': -1}, {'hybrid_switch': 0.0}
])
def test_solver_config_validation(kwargs) -> None:
    with pytest.raises(ParameterRangeError):
        SolverConfig(**kwargs)


def test_solver_config_method_by_name() -> None:
    assert SolverConfig(method='fixed-point').method is SolverMethod.FIXED_POINT  # type: ignore[arg-type]


def test_minimize_rejects_asymmetric_R() -> None:
    grid = build_grid(1, 16)

    R = GridFunction.from_callable(grid, lambda xi: 1 + 0.3 * xi[:, 0])

    with pytest.raises(SymmetryError):
        minimize(FunctionalContext.build(grid, 2.0, R, symmetric=False))


def _normalized(grid, values: np.ndarray) -> GridFunction:
    return GridFunction(grid, values / float(grid.weights @ values))


def _two_caps(xi: np.ndarray) -> np.ndarray:
    return np.exp(-np.sum((xi - np.eye(xi.shape[1])[0]) ** 2, axis=1) / 0.02) + np.exp(
        -np.sum((xi + np.eye(xi.shape[1])[0]) ** 2, axis=1) / 0.02
    )


def test_mass_bound_on_uniform_density() -> None:
    ctx = _circle_ctx(64)

    check = mass_bound_check(ctx, _normalized(ctx.grid, np.ones(64)), 0.3)

    assert check.applicable and check.holds
    assert check.bound == pytest.approx((np.sqrt(2) - 0.3) / 100, rel=1e-14)


@pytest.mark.parametrize(('n', 'resolution', 'alpha'), [(1, 64, 2.0), (2, 16, 4.0)])
def test_mass_bound_on_two_caps(n: int, resolution: int, alpha: float) -> None:
    grid = build_grid(n, resolution)

    R = GridFunction.from_callable(grid, lambda xi: 1 + 0.5 * xi[:, 0] ** 2)
    ctx = FunctionalContext.build(grid, alpha, R)

    f = _normalized(grid, _two_caps(grid.points))

    check = mass_bound_check(ctx, f, 0.3)

    assert check.applicable and check.holds
    assert check.bound == pytest.approx((np.sqrt(2) - 0.3) ** (alpha - n) / 100, rel=1e-12)
    assert np.min(ctx.apply(f.values)) >= check.bound


def test_mass_bound_skipped_for_single_bump() -> None:
    ctx = _circle_ctx(64)

    xi = ctx.grid.points

    f = _normalized(ctx.grid, np.exp(-np.sum((xi - [1.0, 0.0]) ** 2, axis=1) / 0.01))

    check = mass_bound_check(ctx, f, 0.3)

    assert not check.applicable
    assert not check.holds


def test_mass_bound_arguments() -> None:
    ctx = _circle_ctx(16)

    with pytest.raises(ParameterRangeError):
        mass_bound_check(ctx, GridFunction.constant(ctx.grid), 1.5)

    with pytest.raises(ParameterRangeError):
        mass_bound_check(ctx, GridFunction(ctx.grid, np.r_[np.ones(15), -1.0]), 0.3)


def test_report_round_trip(tmp_path) -> None:
    ctx = _circle_ctx(32, _cos2)

    report = minimize(ctx)

    write_report(report, tmp_path / 'out' / 'report.json', tmp_path / 'out' / 'fields.csv')

    loaded = read_report(ctx.grid, tmp_path / 'out' / 'report.json')

    assert loaded.J_value == report.J_value
    assert loaded.J_trace == report.J_trace
    assert np.array_equal(loaded.u_star.values, report.u_star.values)
    assert loaded.diagnostics['method'] == 'projected-gradient'

    lines = (tmp_path / 'out' / 'fields.csv').read_text().splitlines()

    assert lines[0] == 'index,x_0,x_1,weight,R,f,u,residual'
    assert len(lines) == 33


def test_report_for_other_grid(tmp_path) -> None:
    report = minimize(_circle_ctx(16))

    write_report(report, tmp_path / 'report.json')

    with pytest.raises(GridMismatchError):
        read_report(build_grid(1, 32), tmp_path / 'report.json')

    with pytest.raises(InvalidConfigError):
        SolveReport.from_dict(build_grid(1, 16), {'n': 1, 'resolution': 16})


def test_refinement_agrees_on_shared_nodes() -> None:
    coarse = minimize(_circle_ctx(256, _cos2), SolverConfig(tolerance=1e-8))
    fine = minimize(_circle_ctx(512, _cos2), SolverConfig(tolerance=1e-8))

    # node i of the m-node circle sits at angle 2πi/m, which is node 2i of the 2m-node circle
    assert np.max(np.abs(coarse.u_star.values - fine.u_star.values[::2])) <= 1e-4


def test_weak_form_of_solved_field() -> None:
    ctx = _circle_ctx(256, _cos2)

    report = minimize(ctx, SolverConfig(tolerance=1e-9))

    assert report.el_residual <= 1e-8

    f = report.f_star
    scaled = f.with_values(f.values * multiplier(ctx, f) ** (-(ctx.n + ctx.alpha) / (2 * ctx.alpha)))

    assert weak_form_test(ctx, scaled) <= 1e-6
