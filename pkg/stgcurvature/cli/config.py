from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, NamedTuple

import numpy as np

from ..enums import DiagonalRule, RPreset, SolverMethod
from ..exceptions import CustomValueError, InvalidConfigError, NotFoundEnumValue
from ..functional import FunctionalContext, StepControl
from ..functions import mapping_fallback
from ..kernels import check_alpha
from ..solver import SolverConfig
from ..sphere import GridFunction, SphereGrid, build_grid, spherical_harmonic
from ..types import FilePathType, SPath
from ..utils import read_json

__all__ = [
    'HarmonicTerm', 'CurvatureSpec', 'ProblemConfig',

    'parse_config', 'load_config',

    'build_problem'
]


class HarmonicTerm(NamedTuple):
    degree: int
    index: int
    coeff: float


@dataclass(frozen=True)
class CurvatureSpec:
    """R = offset + Σ coeff · Y(degree, index), or a named preset."""

    preset: RPreset | None = None
    harmonics: tuple[HarmonicTerm, ...] = ()
    offset: float = 1.0

    def __post_init__(self) -> None:
        odd = [term for term in self.harmonics if term.degree % 2]

        if odd:
            raise InvalidConfigError(
                'Only even-degree harmonics keep R antipodally symmetric!', self.__class__,
                [tuple(term) for term in odd]
            )

    @classmethod
    def from_preset(cls, preset: RPreset | None) -> CurvatureSpec:
        if preset is RPreset.EVEN_HARMONIC:
            return cls(preset, (HarmonicTerm(2, 0, 0.3),))

        return cls(preset)

    def sample(self, grid: SphereGrid) -> GridFunction:
        values = np.full(grid.size, float(self.offset))

        for term in self.harmonics:
            values += term.coeff * spherical_harmonic(grid.points, term.degree, term.index)

        return GridFunction(grid, values)


@dataclass(frozen=True)
class ProblemConfig:
    n: int
    alpha: float
    resolution: int
    R: CurvatureSpec = field(default_factory=CurvatureSpec)
    solver: SolverConfig = field(default_factory=SolverConfig)
    rule: DiagonalRule = DiagonalRule.COMPENSATED

    report: SPath | None = None
    """JSON SolveReport path."""

    fields: SPath | None = None
    """CSV field dump path."""


def _parse_R(data: Any) -> CurvatureSpec:
    if data is None:
        return CurvatureSpec()

    if isinstance(data, str):
        return CurvatureSpec.from_preset(RPreset.from_param(data, parse_config))

    if not isinstance(data, Mapping):
        raise InvalidConfigError('"R" must be a preset name or an object!', parse_config, type(data).__name__)

    if 'preset' in data:
        return CurvatureSpec.from_preset(RPreset.from_param(data['preset'], parse_config))

    harmonics = tuple(
        HarmonicTerm(int(term['degree']), int(term['index']), float(term['coeff']))
        for term in mapping_fallback(data, 'harmonics', list[Mapping[str, Any]]())
    )

    return CurvatureSpec(None, harmonics, float(mapping_fallback(data, 'offset', 1.0)))


def _parse_solver(data: Mapping[str, Any] | None) -> SolverConfig:
    default = SolverConfig()

    step = mapping_fallback(data, 'step_control', None)

    return SolverConfig(
        SolverMethod.from_param(mapping_fallback(data, 'method', default.method), parse_config),
        int(mapping_fallback(data, 'max_iterations', default.max_iterations)),
        float(mapping_fallback(data, 'tolerance', default.tolerance)),
        float(mapping_fallback(data, 'positivity_floor', default.positivity_floor)),
        StepControl(**step) if step else default.step_control,
        int(mapping_fallback(data, 'restarts', default.restarts)),
        int(mapping_fallback(data, 'seed', default.seed)),
        float(mapping_fallback(data, 'hybrid_switch', default.hybrid_switch))
    )


def parse_config(data: Any, base: FilePathType | None = None) -> ProblemConfig:
    """
    Build a :py:class:`ProblemConfig` from its JSON document.

    ``{"n", "alpha", "resolution", "R": {"preset"} | {"harmonics": [{"degree", "index", "coeff"}], "offset"},
    "solver": {...}, "output": {"report", "fields"}}``. Relative output paths resolve against ``base``.

    :raises InvalidConfigError:     Anything malformed, including out-of-range solver settings.
    """

    if not isinstance(data, Mapping):
        raise InvalidConfigError('The config must be a JSON object!', parse_config)

    try:
        output = mapping_fallback(data, 'output', dict[str, Any]())

        def _path(key: str) -> SPath | None:
            value = mapping_fallback(output, key, None)

            if value is None:
                return None

            path = SPath(value)

            return path if base is None or path.is_absolute() else SPath(base) / path

        n = int(data['n'])
        alpha = float(data['alpha'])

        check_alpha(n, alpha, parse_config, above_n=True)

        return ProblemConfig(
            n, alpha, int(data['resolution']), _parse_R(data.get('R')), _parse_solver(data.get('solver')),
            DiagonalRule.from_param(mapping_fallback(data, 'rule', DiagonalRule.COMPENSATED), parse_config),
            _path('report'), _path('fields')
        )
    except InvalidConfigError:
        raise
    except (KeyError, TypeError, ValueError, NotFoundEnumValue, CustomValueError) as e:
        raise InvalidConfigError('Invalid config: {error}', parse_config, error=str(e)) from e


def load_config(path: FilePathType) -> ProblemConfig:
    """Read and parse a config file; output paths are taken relative to the file's folder."""

    try:
        data = read_json(path, func=load_config)
    except ValueError as e:
        if isinstance(e, CustomValueError):
            raise

        raise InvalidConfigError('The config is not valid JSON: {error}', load_config, path, error=str(e)) from e

    return parse_config(data, SPath(path).get_folder())


def build_problem(config: ProblemConfig) -> FunctionalContext:
    """
    Sample R on the configured grid and assemble the functional.

    :raises ParameterRangeError:    Invalid grid parameters.
    :raises NonPositiveError:       The sampled R is not strictly positive; the message names the node.
    """

    grid = build_grid(config.n, config.resolution)

    R = config.R.sample(grid)

    R.check_positive(build_problem, 'R')

    return FunctionalContext.build(grid, config.alpha, R, config.rule)
