from math import pi

import numpy as np
import pytest

from stgcurvature import (
    CustomRuntimeError, CustomValueError, FileIsADirectoryError, FileNotExistsError, FileWasNotFoundError,
    GridMismatchError, NonPositiveError, NotFoundEnumValue, ParameterRangeError, SolverMethod, SPath, as_points,
    cachedproperty, check_perms, fallback, mapping_fallback, norm_display_name, open_file, read_json,
    relative_discrepancy, sphere_area, write_json
)


def test_error_message_names_function_and_reason() -> None:
    err = ParameterRangeError('alpha must be greater than n = {n}!', sphere_area, 0.5, n=1)

    assert str(err) == '(sphere_area) alpha must be greater than n = 1! (0.5)'
    assert isinstance(err, ValueError)


def test_non_positive_error_fields() -> None:
    err = NonPositiveError('{name} has node {node} at {value}!', 'check', 3, -1.5, name='R')

    assert str(err) == '(check) R has node 3 at -1.5!'
    assert (err.node, err.value) == (3, -1.5)


def test_grid_mismatch_lists_lengths() -> None:
    with pytest.raises(GridMismatchError) as exc:
        GridMismatchError.check_length('solve', 4, 4, 3)

    assert '4, 3' in str(exc.value)

    GridMismatchError.check_length('solve', 4, 4, 4)


def test_enum_from_value_and_name() -> None:
    assert SolverMethod.from_param('fixed-point') is SolverMethod.FIXED_POINT
    assert SolverMethod.from_param('PROJECTED_GRADIENT') is SolverMethod.PROJECTED_GRADIENT
    assert SolverMethod('hybrid') is SolverMethod.HYBRID
    assert SolverMethod.from_param(None) is None
    assert str(SolverMethod.HYBRID) == 'hybrid'


def test_enum_unknown_value() -> None:
    with pytest.raises(NotFoundEnumValue) as exc:
        SolverMethod.from_param('newton')

    assert 'HYBRID (hybrid)' in str(exc.value)

    with pytest.raises(CustomValueError):
        SolverMethod.from_param(SolverMethod)


def test_fallback() -> None:
    assert fallback(None, 1e-8) == 1e-8
    assert fallback(1e-6, 1e-8) == 1e-6
    assert fallback(None, None, default=3) == 3

    with pytest.raises(CustomRuntimeError):
        fallback(None, None)


def test_mapping_fallback() -> None:
    assert mapping_fallback(None, 'seed', 0) == 0
    assert mapping_fallback({'seed': None}, 'seed', 0) == 0
    assert mapping_fallback({'seed': 4}, 'seed', 0) == 4
    assert mapping_fallback({}, 'report', None) is None
    assert mapping_fallback({'report': None}, 'report', None) is None


def test_as_points() -> None:
    assert as_points([1.0, 0.0]).shape == (1, 2)
    assert as_points([1.0, 0.0], 1).shape == (2, 1)
    assert as_points(2.0).shape == (1, 1)
    assert as_points([[1.0, 0.0], [0.0, 1.0]]).shape == (2, 2)


def test_display_names() -> None:
    assert norm_display_name(0.1 + 0.2) == '0.3'
    assert norm_display_name(np.array([1.0, 2.0])) == '[1, 2]'
    assert norm_display_name(np.zeros(20)).startswith('array(shape=(20,)')


@pytest.mark.parametrize(('n', 'area'), [(0, 2.0), (1, 2 * pi), (2, 4 * pi), (3, 2 * pi * pi)])
def test_sphere_area(n: int, area: float) -> None:
    assert sphere_area(n) == pytest.approx(area, rel=1e-15)


def test_relative_discrepancy() -> None:
    assert relative_discrepancy([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert relative_discrepancy([1.0, 2.0], [1.0, 1.0]) == 0.5
    assert relative_discrepancy([0.0, 1e-20], [0.0, 0.0], floor=1e-15) == 0.0
    assert relative_discrepancy([0.0], [0.0]) == 0.0


def test_json_round_trip(tmp_path) -> None:
    path = tmp_path / 'a' / 'b' / 'data.json'

    write_json(path, {'x': [1.5, 2.0]})

    assert read_json(path) == {'x': [1.5, 2.0]}
    assert path.read_text().endswith('\n')


def test_file_checks(tmp_path) -> None:
    assert check_perms(tmp_path / 'new' / 'out.json', 'w')
    assert not check_perms(tmp_path / 'missing.json', 'r')

    with pytest.raises(FileWasNotFoundError):
        read_json(tmp_path / 'missing.json')

    with pytest.raises(FileNotExistsError):
        open_file(tmp_path / 'nowhere' / 'missing.json')

    with pytest.raises(FileIsADirectoryError):
        read_json(tmp_path)


def test_spath_folder(tmp_path) -> None:
    target = SPath(tmp_path) / 'x' / 'y' / 'file.csv'

    target.mkdirp()

    assert (tmp_path / 'x' / 'y').is_dir()
    assert target.get_folder() == SPath(tmp_path / 'x' / 'y').resolve()
    assert SPath(tmp_path).get_folder() == SPath(tmp_path).resolve()


def test_cachedproperty() -> None:
    class Counter(cachedproperty.baseclass):
        calls = 0

        @cachedproperty
        def value(self) -> int:
            Counter.calls += 1
            return 42

    c = Counter()

    assert c.value == 42 and c.value == 42
    assert Counter.calls == 1
