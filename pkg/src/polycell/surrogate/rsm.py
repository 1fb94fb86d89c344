"""Bivariate quadratic response surfaces in (P [atm], T [degC]) -> W."""

from __future__ import annotations

import json
from dataclasses import astuple, dataclass
from pathlib import Path

import numpy as np

from polycell.errors import ContractError, DomainError, RankError
from polycell.surrogate.data import Dataset, Objective, fmt

TERMS = ("c_pp", "c_pt", "c_p", "c_tt", "c_t", "c_0")
SURFACE_FORMAT = "polycell-surface-v1"


@dataclass(frozen=True)
class QuadraticSurface:
    """value = c_pp P^2 + c_pt P T + c_p P + c_tt T^2 + c_t T + c_0"""

    c_pp: float
    c_pt: float
    c_p: float
    c_tt: float
    c_t: float
    c_0: float

    def __post_init__(self):
        if not all(np.isfinite(c) for c in astuple(self)):
            raise DomainError("surface coefficients must be finite")

    @property
    def coefficients(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    def __call__(self, pressure, temperature):
        return evaluate_surface(self, pressure, temperature)

    def scaled(self, factor: float) -> "QuadraticSurface":
        return QuadraticSurface(*(factor * self.coefficients))


def evaluate_surface(surface: QuadraticSurface, pressure, temperature):
    p, t = pressure, temperature
    return (
        surface.c_pp * p * p
        + surface.c_pt * p * t
        + surface.c_p * p
        + surface.c_tt * t * t
        + surface.c_t * t
        + surface.c_0
    )


# Objective polynomials for the optimised polygon cells.
PAPER_SURFACES = {
    ("pentagonal", Objective.PRODUCTION): QuadraticSurface(3.266e-6, 5.816e-8, -3.127e-5, -1.928e-8, 2.936e-6, -3.027e-5),
    ("hexagonal", Objective.PRODUCTION): QuadraticSurface(3.82e-6, -6.802e-8, -2.82e-5, -9.945e-10, 5.052e-7, 5.251e-5),
    ("pentagonal", Objective.CONSUMPTION): QuadraticSurface(-5.112e-9, -4.847e-10, 6.669e-8, 5.415e-11, -4.154e-9, 1.172e-7),
    ("hexagonal", Objective.CONSUMPTION): QuadraticSurface(-1.111e-7, -1.365e-8, 1.68e-6, 2.4647e-9, -2.729e-7, 9.1835e-6),
}


def paper_surface(model: str, objective: Objective | str) -> QuadraticSurface:
    key = (str(getattr(model, "value", model)).lower(), Objective(objective))
    try:
        return PAPER_SURFACES[key]
    except KeyError:
        raise DomainError(f"no published surface for model {model!r}") from None


def design_matrix(pressure, temperature) -> np.ndarray:
    p = np.asarray(pressure, dtype=float)
    t = np.asarray(temperature, dtype=float)
    return np.column_stack([p * p, p * t, p, t * t, t, np.ones_like(p)])


RANK_RTOL = 1e-12


def fit_quadratic(dataset: Dataset) -> QuadraticSurface:
    """Least-squares six-term fit via Householder QR on column-equilibrated data.

    Columns are scaled to unit 2-norm before factorisation; the raw atm/degC
    basis has column magnitudes spanning four decades.
    """
    a = design_matrix(dataset.pressure, dataset.temperature)
    if a.shape[0] < a.shape[1]:
        raise RankError(f"need at least {a.shape[1]} rows, got {a.shape[0]}")
    norms = np.linalg.norm(a, axis=0)
    if np.any(norms == 0):
        raise RankError("design matrix has an all-zero column")
    q, r = np.linalg.qr(a / norms, mode="reduced")
    diag = np.abs(np.diag(r))
    if diag.min() <= RANK_RTOL * diag.max():
        raise RankError("design matrix is rank deficient")
    coeffs = np.linalg.solve(r, q.T @ dataset.value) / norms
    return QuadraticSurface(*coeffs)


def residual_rms(surface: QuadraticSurface, dataset: Dataset) -> float:
    resid = evaluate_surface(surface, dataset.pressure, dataset.temperature) - dataset.value
    return float(np.sqrt(np.mean(resid**2)))


def grid_argmax(fn, p_bounds, t_bounds, steps: int = 401) -> tuple[float, float, float]:
    """(P, T, value) maximising a vectorised fn on a steps x steps grid.

    Ties resolve to the lowest P, then lowest T.
    """
    ps = np.linspace(p_bounds[0], p_bounds[1], steps)
    ts = np.linspace(t_bounds[0], t_bounds[1], steps)
    pp, tt = np.meshgrid(ps, ts, indexing="ij")
    values = np.asarray(fn(pp, tt), dtype=float)
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    return float(ps[i]), float(ts[j]), float(values[i, j])


def surface_to_document(surface: QuadraticSurface, **extra) -> str:
    """JSON text; coefficients written as 17-significant-digit strings."""
    doc = {"format": SURFACE_FORMAT, "units": {"pressure": "atm", "temperature": "degC", "value": "W"}}
    doc["coefficients"] = {name: fmt(c) for name, c in zip(TERMS, astuple(surface))}
    doc.update(extra)
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def load_surface(path: str | Path) -> QuadraticSurface:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != SURFACE_FORMAT:
        raise ContractError(f"{path}: unsupported surface format {doc.get('format')!r}")
    return QuadraticSurface(*(float(doc["coefficients"][name]) for name in TERMS))
