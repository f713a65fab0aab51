from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..exceptions import GridMismatchError, InvalidConfigError
from ..sphere import GridFunction, SphereGrid
from ..types import FilePathType, FloatArray
from ..utils import open_file, read_json, write_json

__all__ = [
    'SolveReport',

    'write_report', 'read_report'
]


@dataclass(eq=False)
class SolveReport:
    """Outcome of :py:func:`minimize`."""

    f_star: GridFunction
    """Best iterate, normalized to ‖f‖ = 1."""

    u_star: GridFunction
    """Solution of the multiplier-1 equation recovered from f_star."""

    J_value: float
    multiplier: float
    """λ = H / N at f_star."""

    el_residual: float
    iterations: int
    J_trace: list[float]
    converged: bool
    diagnostics: dict[str, Any] = field(default_factory=dict)

    R: GridFunction | None = None
    node_residual: FloatArray | None = None
    """Pointwise Euler–Lagrange residual of f_star."""

    @property
    def grid(self) -> SphereGrid:
        return self.f_star.grid

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready dict; floats survive a dump and reload unchanged."""

        return {
            'n': self.grid.n,
            'resolution': self.grid.resolution,
            'J_value': float(self.J_value),
            'lambda': float(self.multiplier),
            'el_residual': float(self.el_residual),
            'iterations': int(self.iterations),
            'converged': bool(self.converged),
            'J_trace': [float(x) for x in self.J_trace],
            'f_star': self.f_star.values.tolist(),
            'u_star': self.u_star.values.tolist(),
            'diagnostics': self.diagnostics
        }

    @classmethod
    def from_dict(cls, grid: SphereGrid, data: dict[str, Any]) -> SolveReport:
        """Rebuild a report on ``grid`` from :py:meth:`to_dict` output."""

        try:
            if (data['n'], data['resolution']) != (grid.n, grid.resolution):
                raise GridMismatchError(
                    cls.from_dict, [grid, (data['n'], data['resolution'])], 'The report was written for another grid!'
                )

            return cls(
                GridFunction(grid, data['f_star']), GridFunction(grid, data['u_star']),
                float(data['J_value']), float(data['lambda']), float(data['el_residual']),
                int(data['iterations']), [float(x) for x in data['J_trace']], bool(data['converged']),
                dict(data.get('diagnostics', {}))
            )
        except (KeyError, TypeError) as e:
            raise InvalidConfigError('Malformed report: {error}!', cls.from_dict, error=repr(e)) from e


def write_report(
    report: SolveReport, json_path: FilePathType | None = None, csv_path: FilePathType | None = None
) -> None:
    """
    Write the report as JSON and/or the field dump as CSV.

    CSV columns: index, x_0..x_n, weight, R, f, u, residual.
    """

    if json_path is not None:
        write_json(json_path, report.to_dict(), func=write_report)

    if csv_path is None:
        return

    grid = report.grid

    rv = np.ones(grid.size) if report.R is None else report.R.values
    res = np.full(grid.size, np.nan) if report.node_residual is None else report.node_residual

    with open_file(csv_path, 'w', newline='', func=write_report) as fp:
        writer = csv.writer(fp)

        writer.writerow(['index', *(f'x_{i}' for i in range(grid.n + 1)), 'weight', 'R', 'f', 'u', 'residual'])

        for i in range(grid.size):
            writer.writerow([
                i, *(repr(float(x)) for x in grid.points[i]),
                *(repr(float(col[i])) for col in (grid.weights, rv, report.f_star.values, report.u_star.values, res))
            ])


def read_report(grid: SphereGrid, json_path: FilePathType) -> SolveReport:
    return SolveReport.from_dict(grid, read_json(json_path, func=read_report))
