from math import pi

import numpy as np
import pytest

from stgcurvature import (
    ParameterRangeError, apply_flat_operator, bubble_profile, bubble_residual, bubble_tail, build_flat_grid,
    conformal_factor, flat_potential, inverse_projection, stereographic_projection, verify_distance_identity,
    verify_sphere_covariance
)


def test_projection_landmarks() -> None:
    assert np.allclose(inverse_projection([0.0, 0.0]), [0.0, 0.0, 1.0])
    assert np.allclose(inverse_projection([1.0, 0.0]), [1.0, 0.0, 0.0])
    assert np.allclose(inverse_projection(np.array([0.0, 1.0]), 1), [[0.0, 1.0], [1.0, 0.0]])


def test_projection_round_trip() -> None:
    x = np.random.default_rng(0).normal(size=(50, 3)) * 5

    assert np.allclose(stereographic_projection(inverse_projection(x)), x, rtol=1e-12, atol=1e-12)


def test_south_pole_has_no_image() -> None:
    with pytest.raises(ParameterRangeError):
        stereographic_projection([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])


@pytest.mark.parametrize('n', [1, 2, 3])
def test_distance_identity(n: int) -> None:
    rng = np.random.default_rng(n)

    directions = rng.normal(size=(2, 1000, n))
    directions /= np.linalg.norm(directions, axis=2, keepdims=True)

    x, y = directions * 10 ** rng.uniform(-3, 3, size=(2, 1000, 1))

    assert verify_distance_identity(x, y, n) <= 1e-12


def test_conformal_factor() -> None:
    assert conformal_factor([0.0, 0.0], 2, 4.0) == pytest.approx(0.5, rel=1e-15)
    assert conformal_factor([1.0, 0.0], 2, 4.0) == pytest.approx(1.0, rel=1e-15)
    assert np.allclose(conformal_factor(np.array([[0.0], [1.0]]), 1, 2.0), [2 ** -0.5, 1.0])


def test_flat_grid_measures() -> None:
    line = build_flat_grid(1, 10.0)
    disk = build_flat_grid(2, 10.0)

    assert line.weights.sum() == pytest.approx(20.0, rel=1e-12)
    assert disk.weights.sum() == pytest.approx(100 * pi, rel=1e-12)
    assert np.all(np.linalg.norm(disk.points, axis=1) <= 10.0)


def test_flat_grid_dimension() -> None:
    with pytest.raises(ParameterRangeError):
        build_flat_grid(3, 10.0)


def test_flat_potential_of_polynomial_kernel() -> None:
    fgrid = build_flat_grid(1, 1.0)

    # ∫_{-1}^{1} |x - y|² dy = 2x² + 2/3
    out = flat_potential(fgrid, 2.0, np.ones(fgrid.size), [[0.0], [0.5]])

    assert np.allclose(out, [2 / 3, 0.5 + 2 / 3], rtol=1e-12)


def test_flat_operator_scales_by_constant() -> None:
    fgrid = build_flat_grid(2, 3.0)

    h = np.ones(fgrid.size)

    assert np.allclose(
        apply_flat_operator(fgrid, 4.0, h, [[0.0, 0.0]]),
        flat_potential(fgrid, 2.0, h, [[0.0, 0.0]]) / (8 * pi), rtol=1e-14
    )


def test_bubble_profile_and_tail() -> None:
    assert bubble_profile(1.0, [[0.0, 0.0]])[0] == 1.0
    assert bubble_profile(2.0, [[2.0, 0.0]])[0] == 4.0
    assert np.all(bubble_tail(1.0, [[0.0, 0.0], [1.0, 1.0]], 100.0) > 0)


@pytest.mark.parametrize('eps', [0.5, 1.0, 2.0])
def test_bubble_identity(eps: float) -> None:
    samples = np.random.default_rng(3).uniform(-3 * eps, 3 * eps, size=(20, 2))

    assert bubble_residual(eps, samples) <= 1e-3


def test_bubble_tail_correction_matters() -> None:
    samples = [[0.0, 0.0], [0.5, 0.5]]

    assert bubble_residual(1.0, samples) < bubble_residual(1.0, samples, tail_correction=False)


def test_bubble_rejects_nonpositive_scale() -> None:
    with pytest.raises(ParameterRangeError):
        bubble_residual(0.0, [[0.0, 0.0]])


def _smooth(xi: np.ndarray) -> np.ndarray:
    return 1 + 0.5 * xi[:, -1] + 0.25 * xi[:, 0] ** 2


@pytest.mark.parametrize(('n', 'alpha'), [(1, 2.0), (2, 4.0)])
def test_sphere_covariance_constant(n: int, alpha: float) -> None:
    assert verify_sphere_covariance(lambda xi: np.ones(xi.shape[0]), n, alpha) <= 1e-3


@pytest.mark.parametrize(('n', 'alpha'), [(1, 2.0), (2, 4.0)])
def test_sphere_covariance_smooth_and_refinement(n: int, alpha: float) -> None:
    coarse = verify_sphere_covariance(_smooth, n, alpha)
    fine = verify_sphere_covariance(_smooth, n, alpha, refinement=1)

    assert coarse <= 1e-3
    assert fine <= coarse


def test_sphere_covariance_needs_alpha_above_n() -> None:
    with pytest.raises(ParameterRangeError):
        verify_sphere_covariance(_smooth, 2, 1.5)
