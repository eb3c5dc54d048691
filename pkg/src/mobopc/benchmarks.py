"""Synthetic test problems with analytic gradients, and tabular datasets.

All three synthetic problems are minimisation problems in their usual
form. ``gradient(x)`` returns an ``(n, m)`` matrix whose entry ``[j, i]``
is the derivative of objective ``i`` along design axis ``j``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import ContractError, TabularParseError

MINIMISE = "minimise"
MAXIMISE = "maximise"
_DIRECTION_ALIASES = {
    "min": MINIMISE,
    "minimise": MINIMISE,
    "minimize": MINIMISE,
    "max": MAXIMISE,
    "maximise": MAXIMISE,
    "maximize": MAXIMISE,
}


def normalize_direction(value):
    try:
        return _DIRECTION_ALIASES[str(value).strip().lower()]
    except KeyError:
        raise ContractError(f"unknown direction {value!r}") from None


def direction_signs(directions):
    """+1 for maximised objectives, -1 for minimised ones."""
    return np.array([1.0 if normalize_direction(d) == MAXIMISE else -1.0 for d in directions])


@dataclass(frozen=True, eq=False)
class BenchmarkSpec:
    name: str
    n: int
    m: int
    bounds: np.ndarray
    evaluate: Callable[[np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray], np.ndarray]
    directions: tuple[str, ...]
    description: str = ""

    def __call__(self, x):
        return self.evaluate(np.asarray(x, dtype=float))


def _schaffer(x):
    x0 = x[0]
    return np.array([x0 * x0, (x0 - 2.0) ** 2])


def _schaffer_grad(x):
    x0 = x[0]
    return np.array([[2.0 * x0, 2.0 * (x0 - 2.0)]])


_A1 = 0.5 * math.sin(1) - 2 * math.cos(1) + math.sin(2) - 1.5 * math.cos(2)
_A2 = 1.5 * math.sin(1) - math.cos(1) + 2 * math.sin(2) - 0.5 * math.cos(2)


def _poloni_terms(x):
    x0, x1 = x
    s0, c0, s1, c1 = math.sin(x0), math.cos(x0), math.sin(x1), math.cos(x1)
    b1 = 0.5 * s0 - 2 * c0 + s1 - 1.5 * c1
    b2 = 1.5 * s0 - c0 + 2 * s1 - 0.5 * c1
    return b1, b2, (s0, c0, s1, c1)


def _poloni(x):
    b1, b2, _ = _poloni_terms(x)
    f0 = 1.0 + (_A1 - b1) ** 2 + (_A2 - b2) ** 2
    f1 = (x[0] + 3.0) ** 2 + (x[1] + 1.0) ** 2
    return np.array([f0, f1])


def _poloni_grad(x):
    b1, b2, (s0, c0, s1, c1) = _poloni_terms(x)
    db1 = np.array([0.5 * c0 + 2 * s0, c1 + 1.5 * s1])
    db2 = np.array([1.5 * c0 + s0, 2 * c1 + 0.5 * s1])
    g0 = -2.0 * (_A1 - b1) * db1 - 2.0 * (_A2 - b2) * db2
    g1 = np.array([2.0 * (x[0] + 3.0), 2.0 * (x[1] + 1.0)])
    return np.column_stack([g0, g1])


def _viennet(x):
    x0, x1 = x
    r = x0 * x0 + x1 * x1
    f0 = 0.5 * r + math.sin(r)
    f1 = (3 * x0 - 2 * x1 + 4) ** 2 / 8.0 + (x0 - x1 + 1) ** 2 / 27.0 + 15.0
    f2 = 1.0 / (r + 1.0) - 1.1 * math.exp(-r)
    return np.array([f0, f1, f2])


def _viennet_grad(x):
    x0, x1 = x
    r = x0 * x0 + x1 * x1
    u = 3 * x0 - 2 * x1 + 4
    w = x0 - x1 + 1
    d0 = 1.0 + 2.0 * math.cos(r)
    d2 = -2.0 / (r + 1.0) ** 2 + 2.2 * math.exp(-r)
    return np.array(
        [
            [x0 * d0, 6.0 * u / 8.0 + 2.0 * w / 27.0, x0 * d2],
            [x1 * d0, -4.0 * u / 8.0 - 2.0 * w / 27.0, x1 * d2],
        ]
    )


BENCHMARKS = {
    "schaffer_n1": BenchmarkSpec(
        "schaffer_n1", 1, 2, np.array([[-10.0, 10.0]]), _schaffer, _schaffer_grad,
        (MINIMISE, MINIMISE), "f0 = x^2, f1 = (x - 2)^2 on [-10, 10]",
    ),
    "poloni": BenchmarkSpec(
        "poloni", 2, 2, np.array([[-math.pi, math.pi]] * 2), _poloni, _poloni_grad,
        (MINIMISE, MINIMISE), "Poloni's two-objective function on [-pi, pi]^2",
    ),
    "viennet": BenchmarkSpec(
        "viennet", 2, 3, np.array([[-3.0, 3.0]] * 2), _viennet, _viennet_grad,
        (MINIMISE, MINIMISE, MINIMISE), "Viennet's three-objective function on [-3, 3]^2",
    ),
}


def get_benchmark(name):
    try:
        return BENCHMARKS[name]
    except KeyError:
        available = ", ".join(sorted(BENCHMARKS))
        raise ContractError(f"unknown benchmark {name!r}; available: {available}") from None


@dataclass(frozen=True)
class TabularSchema:
    inputs: tuple[str, ...]
    objectives: tuple[str, ...]
    directions: tuple[str, ...] | None = None

    def resolved_directions(self):
        if self.directions is None:
            return (MINIMISE,) * len(self.objectives)
        if len(self.directions) != len(self.objectives):
            raise ContractError("one direction per objective column is required")
        return tuple(normalize_direction(d) for d in self.directions)


CRASH_SCHEMA = TabularSchema(inputs=("tbumper", "thood"), objectives=("HIC", "Mass"))


@dataclass(frozen=True, eq=False)
class TabularDataset:
    inputs: np.ndarray
    objectives: np.ndarray
    input_names: tuple[str, ...]
    objective_names: tuple[str, ...]
    directions: tuple[str, ...]

    def __len__(self):
        return self.inputs.shape[0]

    @property
    def bounds(self):
        return np.column_stack([self.inputs.min(axis=0), self.inputs.max(axis=0)])


def load_tabular(path, schema=CRASH_SCHEMA, delimiter=","):
    """Read a delimited text file with a header row.

    Raises
    ------
    TabularParseError
        On a missing column, a ragged row, or a non-numeric / missing cell.
        The message names the data row (1-based, header excluded) and column.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise TabularParseError(f"{path}: empty file") from None
        wanted = list(schema.inputs) + list(schema.objectives)
        missing = [c for c in wanted if c not in header]
        if missing:
            raise TabularParseError(f"{path}: missing column(s) {', '.join(missing)}", column=missing[0])
        cols = [header.index(c) for c in wanted]
        rows = []
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise TabularParseError(
                    f"{path}: row {row_no} has {len(row)} fields, expected {len(header)}", row=row_no
                )
            values = []
            for name, c in zip(wanted, cols):
                cell = row[c].strip()
                try:
                    val = float(cell)
                except ValueError:
                    val = float("nan")
                if not math.isfinite(val):
                    raise TabularParseError(
                        f"{path}: row {row_no}, column {name!r}: non-numeric value {cell!r}",
                        row=row_no,
                        column=name,
                    )
                values.append(val)
            rows.append(values)
    data = np.array(rows, dtype=float).reshape(-1, len(wanted))
    n_in = len(schema.inputs)
    return TabularDataset(
        data[:, :n_in],
        data[:, n_in:],
        tuple(schema.inputs),
        tuple(schema.objectives),
        schema.resolved_directions(),
    )
