"""Design grids, (P, T) -> value datasets, min-max scaling and CSV persistence."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from polycell.errors import ContractError, DegenerateFeatureError, DomainError

CSV_HEADER = ("pressure_atm", "temperature_c", "value_w")
P_BOUNDS = (1.0, 5.0)
T_BOUNDS = (50.0, 90.0)


class Objective(str, enum.Enum):
    PRODUCTION = "production"
    CONSUMPTION = "consumption"


def fmt(x: float) -> str:
    """17 significant digits: enough for an exact float64 round trip."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class Dataset:
    pressure: np.ndarray
    temperature: np.ndarray
    value: np.ndarray
    objective: Objective | None = None
    model: str | None = None

    def __post_init__(self):
        for name in ("pressure", "temperature", "value"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise ContractError(f"{name} must be one-dimensional")
            object.__setattr__(self, name, arr)
        n = len(self.pressure)
        if n == 0:
            raise DomainError("dataset must be non-empty")
        if len(self.temperature) != n or len(self.value) != n:
            raise ContractError("dataset columns differ in length")

    def __len__(self) -> int:
        return len(self.pressure)

    @property
    def inputs(self) -> np.ndarray:
        return np.column_stack([self.pressure, self.temperature])

    def check_design_space(self, p_bounds=P_BOUNDS, t_bounds=T_BOUNDS) -> None:
        """Raise unless all points lie in the bounds and no (P, T) pair repeats."""
        if self.pressure.min() < p_bounds[0] or self.pressure.max() > p_bounds[1]:
            raise DomainError(f"pressures outside {p_bounds} atm")
        if self.temperature.min() < t_bounds[0] or self.temperature.max() > t_bounds[1]:
            raise DomainError(f"temperatures outside {t_bounds} degC")
        if len(np.unique(self.inputs, axis=0)) != len(self):
            raise DomainError("duplicate (P, T) pairs in dataset")


def design_grid(
    p_bounds: tuple[float, float] = P_BOUNDS,
    t_bounds: tuple[float, float] = T_BOUNDS,
    p_steps: int = 9,
    t_steps: int = 9,
) -> list[tuple[float, float]]:
    """Evenly spaced (P, T) grid including endpoints, P outer and T inner."""
    if p_steps < 2 or t_steps < 2:
        raise DomainError("grid needs at least 2 steps per axis")
    if not (p_bounds[0] < p_bounds[1] and t_bounds[0] < t_bounds[1]):
        raise DomainError("bounds must be ordered (min < max)")
    ps = np.linspace(p_bounds[0], p_bounds[1], p_steps)
    ts = np.linspace(t_bounds[0], t_bounds[1], t_steps)
    return [(float(p), float(t)) for p in ps for t in ts]


def sample(fn, grid, objective: Objective | None = None, model: str | None = None) -> Dataset:
    """Dataset of fn(P, T) over `grid`."""
    ps = np.array([p for p, _ in grid], dtype=float)
    ts = np.array([t for _, t in grid], dtype=float)
    values = np.array([fn(p, t) for p, t in grid], dtype=float)
    return Dataset(ps, ts, values, objective, model)


@dataclass(frozen=True)
class Scaler:
    """Per-column (min, max) over the columns pressure, temperature, value."""

    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mins", np.asarray(self.mins, dtype=float))
        object.__setattr__(self, "maxs", np.asarray(self.maxs, dtype=float))
        if np.any(self.mins >= self.maxs):
            raise DegenerateFeatureError(f"scaler requires min < max per feature, got {self.mins}, {self.maxs}")

    @property
    def span(self) -> np.ndarray:
        return self.maxs - self.mins

    def transform_inputs(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.mins[:2]) / self.span[:2]

    def transform_value(self, y):
        return (np.asarray(y, dtype=float) - self.mins[2]) / self.span[2]

    def inverse_inputs(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) * self.span[:2] + self.mins[:2]

    def inverse_value(self, y):
        return np.asarray(y, dtype=float) * self.span[2] + self.mins[2]


def normalize(dataset: Dataset) -> tuple[Dataset, Scaler]:
    data = np.column_stack([dataset.pressure, dataset.temperature, dataset.value])
    mins, maxs = data.min(axis=0), data.max(axis=0)
    constant = [name for name, lo, hi in zip(CSV_HEADER, mins, maxs) if not lo < hi]
    if constant:
        raise DegenerateFeatureError(f"constant feature(s): {', '.join(constant)}")
    scaler = Scaler(mins, maxs)
    x = scaler.transform_inputs(data[:, :2])
    y = scaler.transform_value(data[:, 2])
    return Dataset(x[:, 0], x[:, 1], y, dataset.objective, dataset.model), scaler


def denormalize(dataset: Dataset, scaler: Scaler) -> Dataset:
    x = scaler.inverse_inputs(dataset.inputs)
    return Dataset(x[:, 0], x[:, 1], scaler.inverse_value(dataset.value), dataset.objective, dataset.model)


def dataset_to_csv(dataset: Dataset) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_HEADER) + "\n")
    for p, t, v in zip(dataset.pressure, dataset.temperature, dataset.value):
        buf.write(f"{fmt(p)},{fmt(t)},{fmt(v)}\n")
    return buf.getvalue()


def read_dataset(path: str | Path, objective: Objective | None = None, model: str | None = None) -> Dataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
            raise ContractError(f"{path}: expected header {','.join(CSV_HEADER)}, got {header}")
        rows = [[float(x) for x in row] for row in reader if row]
    if not rows:
        raise DomainError(f"{path}: dataset has no rows")
    arr = np.array(rows, dtype=float)
    return Dataset(arr[:, 0], arr[:, 1], arr[:, 2], objective, model)
