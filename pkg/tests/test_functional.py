from math import pi

import numpy as np
import pytest

from stgcurvature import (
    FunctionalContext, GridFunction, NonPositiveError, ParameterRangeError, SymmetryError, bilinear_H, build_grid,
    descend, el_residual, gradient_J, hls_lower_bound, multiplier, project, quotient_J, quotient_J2, symmetrize,
    weak_form_test, weighted_mass, weighted_p_norm
)


def _circle(resolution: int = 64, R: GridFunction | None = None) -> FunctionalContext:
    grid = build_grid(1, resolution)

    return FunctionalContext.build(grid, 2.0, R)


def _random_positive(grid, seed: int) -> GridFunction:
    return symmetrize(GridFunction(grid, np.exp(np.random.default_rng(seed).normal(0.0, 0.3, grid.size))))


def test_constant_on_circle() -> None:
    ctx = _circle()
    one = GridFunction.constant(ctx.grid)

    assert ctx.p == pytest.approx(2 / 3)
    assert ctx.q == pytest.approx(-1 / 3)
    assert quotient_J(ctx, one) == pytest.approx(2 / pi ** 2, rel=1e-12)
    assert multiplier(ctx, one) == pytest.approx(8.0, rel=1e-12)
    assert bilinear_H(ctx, one, one) == pytest.approx(16 * pi, rel=1e-12)
    assert el_residual(ctx, one) <= 1e-12


def test_quotient_is_scale_invariant() -> None:
    ctx = _circle()
    f = _random_positive(ctx.grid, 0)

    assert quotient_J(ctx, f.with_values(3.7 * f.values)) == pytest.approx(quotient_J(ctx, f), rel=1e-12)
    assert weighted_p_norm(ctx, f.with_values(2 * f.values)) == pytest.approx(2 * weighted_p_norm(ctx, f), rel=1e-12)


def test_quotient_needs_positive_f() -> None:
    ctx = _circle(8)

    with pytest.raises(NonPositiveError):
        weighted_mass(ctx, GridFunction(ctx.grid, np.r_[np.ones(7), -1.0]))


@pytest.mark.parametrize(('n', 'resolution', 'alpha'), [(1, 64, 2.0), (2, 16, 4.0)])
def test_gradient_matches_central_differences(n: int, resolution: int, alpha: float) -> None:
    grid = build_grid(n, resolution)

    R = GridFunction.from_callable(grid, lambda xi: 1 + 0.3 * xi[:, 0] ** 2)
    ctx = FunctionalContext.build(grid, alpha, R)

    rng = np.random.default_rng(n)
    h = 1e-4

    worst = 0.0

    for seed in range(50):
        f = GridFunction(grid, np.exp(rng.normal(0.0, 0.3, grid.size)))
        v = rng.normal(size=grid.size) * f.values

        numeric = (
            quotient_J(ctx, f.with_values(f.values + h * v)) - quotient_J(ctx, f.with_values(f.values - h * v))
        ) / (2 * h)

        analytic = float(np.sum(grid.weights * gradient_J(ctx, f).values * v))

        worst = max(worst, abs(numeric - analytic) / max(abs(analytic), quotient_J(ctx, f)))

    assert worst <= 1e-6


def test_angular_quotient_matches_operator_quotient() -> None:
    grid = build_grid(1, 64)

    R = GridFunction.from_callable(grid, lambda xi: 1 + 0.5 * xi[:, 0] ** 2)
    f = _random_positive(grid, 1)

    ctx = FunctionalContext.build(grid, 2.0, R)

    assert quotient_J2(f, R) == pytest.approx(quotient_J(ctx, f), rel=1e-12)


def test_angular_quotient_only_on_circle() -> None:
    with pytest.raises(ParameterRangeError):
        quotient_J2(GridFunction.constant(build_grid(2, 8)))


def test_weak_form_of_rescaled_constant() -> None:
    ctx = _circle()

    assert weak_form_test(ctx, GridFunction.constant(ctx.grid, 8 ** -0.75)) <= 1e-12
    assert weak_form_test(ctx, GridFunction.constant(ctx.grid)) > 1e-2


def test_weak_form_with_custom_basis() -> None:
    ctx = _circle(16)

    basis = [np.ones(ctx.grid.size), GridFunction.from_callable(ctx.grid, lambda xi: xi[:, 0] ** 2)]

    assert weak_form_test(ctx, GridFunction.constant(ctx.grid, 8 ** -0.75), basis) <= 1e-12


def test_build_rejects_asymmetric_R() -> None:
    grid = build_grid(1, 16)

    with pytest.raises(SymmetryError):
        FunctionalContext.build(grid, 2.0, GridFunction.from_callable(grid, lambda xi: 1 + 0.3 * xi[:, 0]))

    FunctionalContext.build(grid, 2.0, GridFunction.from_callable(grid, lambda xi: 1 + 0.3 * xi[:, 0]), symmetric=False)


def test_build_rejects_nonpositive_R() -> None:
    grid = build_grid(1, 8)

    with pytest.raises(NonPositiveError):
        FunctionalContext.build(grid, 2.0, GridFunction(grid, np.r_[np.zeros(1), np.ones(7)]))


def test_project_normalizes_and_clamps() -> None:
    ctx = _circle(16)

    values = np.linspace(-1.0, 2.0, 16)

    projected, active = project(ctx, values, np.ones(16), 1e-3)

    assert active > 0
    assert np.all(projected > 0)
    assert np.array_equal(projected, projected[ctx.grid.antipode])
    assert weighted_mass(ctx, GridFunction(ctx.grid, projected)) == pytest.approx(1.0, rel=1e-12)


def test_descent_trace_never_increases() -> None:
    grid = build_grid(1, 64)

    R = GridFunction.from_callable(grid, lambda xi: 1 + 0.5 * xi[:, 0] ** 2)
    ctx = FunctionalContext.build(grid, 2.0, R)

    result = descend(ctx, _random_positive(grid, 2), max_iterations=300, tolerance=1e-10)

    assert len(result.trace) == result.iterations + 1 or result.stalled
    assert np.all(np.diff(result.trace) <= 0)
    assert result.trace[-1] <= result.trace[0]
    assert result.J_value == pytest.approx(quotient_J(ctx, result.f), rel=1e-10)


def test_lower_bound_arguments() -> None:
    grid = build_grid(1, 16)

    with pytest.raises(ParameterRangeError):
        hls_lower_bound(FunctionalContext.build(grid, 2.0), trials=10)

    with pytest.raises(ParameterRangeError):
        hls_lower_bound(FunctionalContext.build(grid, 2.0, GridFunction.constant(grid, 0.5)))


@pytest.mark.parametrize('R', [
    lambda xi: 0.8 + 0.2 * (xi[:, 0] ** 2 - xi[:, 1] ** 2),
    lambda xi: 0.5 + 0.5 * xi[:, 0] ** 2
])
def test_quotient_stays_above_lower_bound(R) -> None:
    grid = build_grid(1, 32)

    bound = hls_lower_bound(FunctionalContext.build(grid, 2.0), max_iterations=50)

    ctx = FunctionalContext.build(grid, 2.0, GridFunction.from_callable(grid, R))

    # max R <= 1, so J_R(f) >= J_1(R f) >= C₂, sharper than (min R)² C₂
    for seed in range(100):
        assert quotient_J(ctx, _random_positive(grid, seed)) >= bound * (1 - 1e-6)

    assert quotient_J(ctx, descend(ctx, GridFunction.constant(grid), max_iterations=100).f) >= bound * (1 - 1e-6)


@pytest.mark.parametrize(('n', 'resolution', 'alpha'), [(1, 64, 2.0), (2, 16, 3.0)])
def test_bilinear_form_is_symmetric(n: int, resolution: int, alpha: float) -> None:
    grid = build_grid(n, resolution)

    ctx = FunctionalContext.build(grid, alpha, GridFunction.from_callable(grid, lambda xi: 1 + 0.3 * xi[:, 0] ** 2))

    for seed in range(5):
        f, g = _random_positive(grid, 2 * seed), _random_positive(grid, 2 * seed + 1)

        assert bilinear_H(ctx, f, g) == pytest.approx(bilinear_H(ctx, g, f), rel=1e-12)


def test_lower_bound_on_circle() -> None:
    C2 = hls_lower_bound(_circle(32), max_iterations=20)

    assert 0 < C2 <= 2 / pi ** 2 * (1 + 1e-12)
