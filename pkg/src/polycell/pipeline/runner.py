"""Pipeline operations behind the CLI: sweep, train, fit, optimize, polarize."""

from __future__ import annotations

import functools
import io
import logging
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from polycell.cell import presets
from polycell.cell.performance import open_circuit_voltage, operating_powers, solve_current_at_voltage
from polycell.cell.transport import operating_point_at
from polycell.cell.water import ATM
from polycell.errors import ConfigError, DomainError, NumericError, PolycellError
from polycell.evolve import ObjectiveSpec, front_report, front_to_csv, run
from polycell.pipeline import reference
from polycell.pipeline.artifacts import RunRecorder, dumps, input_record
from polycell.pipeline.config import ObjectiveSource, RunConfig
from polycell.surrogate import mlp as mlp_io
from polycell.surrogate.data import (
    Dataset,
    Objective,
    dataset_to_csv,
    design_grid,
    fmt,
    normalize,
    read_dataset,
)
from polycell.surrogate.mlp import MLPConfig, mlp_init, mlp_train
from polycell.surrogate.rsm import fit_quadratic, load_surface, paper_surface, residual_rms, surface_to_document

log = logging.getLogger(__name__)

POLARIZATION_HEADER = ("voltage_v", "current_density_a_m2", "power_density_w_m2")
MAX_SKIP_FRACTION = 0.10


class SweepError(NumericError):
    pass


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.start = time.perf_counter()

    def record(self) -> dict:
        return {"timing_s": round(time.perf_counter() - self.start, 6)} if self.enabled else {}


def _recorder(cfg: RunConfig, out_dir) -> RunRecorder:
    if out_dir is None:
        raise ConfigError("an output directory is required (--out)")
    return RunRecorder(out_dir, cfg.echo(), cfg.seed if cfg.seed is not None else cfg.ga.seed)


def _grid(cfg: RunConfig):
    b = cfg.bounds
    return design_grid((b.p_min, b.p_max), (b.t_min, b.t_max), cfg.grid.p_steps, cfg.grid.t_steps)


def _physics(cfg: RunConfig):
    tag = presets.resolve(cfg.preset)
    return presets.cell_spec(tag, cfg.physics.limiting_current), presets.operating_point(tag)


# --- sweep ------------------------------------------------------------------


def sweep(cfg: RunConfig, out_dir) -> dict:
    """Evaluate the cell model over the design grid and write two datasets."""
    clock = _Clock(cfg.record_timing)
    rec = _recorder(cfg, out_dir)
    cell, base = _physics(cfg)
    grid = _grid(cfg)
    rows, skipped = [], []
    for p_atm, t_c in grid:
        try:
            op = operating_point_at(base, p_atm * ATM, t_c + 273.15, cell.constants)
            report = operating_powers(cell, op, cfg.physics.voltage)
        except PolycellError as exc:
            log.warning("sweep: skipped P=%s atm T=%s degC: %s", p_atm, t_c, exc)
            skipped.append({"pressure_atm": p_atm, "temperature_c": t_c, "reason": str(exc)})
            continue
        rows.append((p_atm, t_c, report.production_power, report.consumption_power))
    if len(skipped) > MAX_SKIP_FRACTION * len(grid):
        raise SweepError(f"{len(skipped)} of {len(grid)} grid points failed")
    arr = np.array(rows, dtype=float)
    for col, objective in ((2, Objective.PRODUCTION), (3, Objective.CONSUMPTION)):
        ds = Dataset(arr[:, 0], arr[:, 1], arr[:, col], objective, cfg.preset)
        rec.write(f"{objective.value}.csv", dataset_to_csv(ds))
    summary = {"rows": len(rows), "skipped": skipped, "voltage_v": cfg.physics.voltage}
    rec.finish("sweep", {"components": ["cell"], "summary": summary, **clock.record()})
    return summary


# --- train ------------------------------------------------------------------


def _stem(path: Path) -> str:
    name = path.name
    for suffix in (".mlp.json", ".surface.json", ".csv", ".json"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return path.stem


def train_network(cfg: RunConfig, dataset: Dataset):
    normed, scaler = normalize(dataset)
    net = mlp_init(MLPConfig(), cfg.train.seed)
    net.scaler = scaler
    net, history = mlp_train(net, normed.inputs, normed.value, cfg.train)
    pred = net.predict(dataset.pressure, dataset.temperature)
    rmse = float(np.sqrt(np.mean((pred - dataset.value) ** 2)))
    stats = {
        "epochs": len(history),
        "final_loss": history[-1],
        "rmse_w": rmse,
        "rmse_fraction_of_range": rmse / float(np.ptp(dataset.value)),
    }
    return net, history, stats


def train(cfg: RunConfig, dataset_path, out_dir) -> dict:
    clock = _Clock(cfg.record_timing)
    rec = _recorder(cfg, out_dir)
    dataset_path = Path(dataset_path)
    dataset = read_dataset(dataset_path)
    net, _, stats = train_network(cfg, dataset)
    name = f"{_stem(dataset_path)}.mlp.json"
    rec.write(name, mlp_io.dumps(net))
    rec.finish(
        f"train:{_stem(dataset_path)}",
        {"components": ["surrogate.mlp"], "inputs": [input_record(dataset_path)], "summary": stats, **clock.record()},
    )
    return {"model": name, **stats}


# --- fit --------------------------------------------------------------------


def fit(cfg: RunConfig, input_path, out_dir) -> dict:
    """Fit a quadratic surface to a dataset CSV, or to a trained model sampled on the grid."""
    clock = _Clock(cfg.record_timing)
    rec = _recorder(cfg, out_dir)
    input_path = Path(input_path)
    components = ["surrogate.rsm"]
    if input_path.name.endswith(".csv"):
        dataset = read_dataset(input_path)
    else:
        net = mlp_io.load(input_path)
        grid = _grid(cfg)
        ps = np.array([p for p, _ in grid])
        ts = np.array([t for _, t in grid])
        dataset = Dataset(ps, ts, net.predict(ps, ts))
        components.insert(0, "surrogate.mlp")
    surface = fit_quadratic(dataset)
    resid = residual_rms(surface, dataset)
    name = f"{_stem(input_path)}.surface.json"
    rec.write(name, surface_to_document(surface, residual_rms_w=fmt(resid), samples=len(dataset)))
    summary = {"surface": name, "coefficients": surface.coefficients.tolist(), "residual_rms_w": resid}
    floor = _surface_minimum(surface, cfg)
    if floor < 0 <= dataset.value.min():
        # a quadratic cannot follow strongly curved data such as 1/P^2 pumping power
        log.warning("fit: %s dips below zero inside the bounds (min %.3g W)", name, floor)
    summary["minimum_over_bounds_w"] = floor
    rec.finish(
        f"fit:{_stem(input_path)}",
        {"components": components, "inputs": [input_record(input_path)], "summary": summary, **clock.record()},
    )
    return summary


def _surface_minimum(surface, cfg: RunConfig, steps: int = 101) -> float:
    b = cfg.bounds
    p, t = np.meshgrid(np.linspace(b.p_min, b.p_max, steps), np.linspace(b.t_min, b.t_max, steps))
    return float(np.min(surface(p, t)))


# --- optimize ---------------------------------------------------------------


def _physics_objectives(cfg: RunConfig) -> ObjectiveSpec:
    cell, base = _physics(cfg)

    @functools.lru_cache(maxsize=4096)
    def powers(p_atm: float, t_c: float):
        op = operating_point_at(base, p_atm * ATM, t_c + 273.15, cell.constants)
        return operating_powers(cell, op, cfg.physics.voltage)

    return ObjectiveSpec(
        lambda p, t: powers(p, t).production_power,
        lambda p, t: powers(p, t).consumption_power,
    )


def resolve_objectives(cfg: RunConfig, production=None, consumption=None) -> tuple[ObjectiveSpec, list, list]:
    """(objective spec, manifest components, input files) for the configured source."""
    source = cfg.objective.source
    if source is ObjectiveSource.PAPER:
        try:
            pro = paper_surface(cfg.model, Objective.PRODUCTION)
            con = paper_surface(cfg.model, Objective.CONSUMPTION)
        except DomainError as exc:
            raise ConfigError(f"paper mode needs model pentagonal or hexagonal: {exc}") from None
        return ObjectiveSpec(pro, con, vectorized=True), ["surrogate.paper_surfaces", "evolve"], []
    if source is ObjectiveSource.PHYSICS:
        return _physics_objectives(cfg), ["cell", "evolve"], []
    if source is ObjectiveSource.SURFACES:
        production = production or cfg.objective.production_surface
        consumption = consumption or cfg.objective.consumption_surface
        if not (production and consumption):
            raise ConfigError("surfaces source needs objective.production_surface and objective.consumption_surface")
        spec = ObjectiveSpec(load_surface(production), load_surface(consumption), vectorized=True)
        return spec, ["surrogate.rsm", "evolve"], [production, consumption]
    production = production or cfg.objective.production_model
    consumption = consumption or cfg.objective.consumption_model
    if not (production and consumption):
        raise ConfigError("surrogate source needs objective.production_model and objective.consumption_model")
    pro_net, con_net = mlp_io.load(production), mlp_io.load(consumption)
    spec = ObjectiveSpec(pro_net.predict, con_net.predict, vectorized=True)
    return spec, ["surrogate.mlp", "evolve"], [production, consumption]


def optimize(cfg: RunConfig, out_dir, production=None, consumption=None) -> dict:
    clock = _Clock(cfg.record_timing)
    rec = _recorder(cfg, out_dir)
    spec, components, inputs = resolve_objectives(cfg, production, consumption)
    result = run(spec, cfg.bounds, cfg.ga)
    report = front_report(result)
    summary = {
        "model": cfg.model,
        "objective_source": cfg.objective.source.value,
        "front": report,
        "reference": reference.reference_table(cfg.model),
    }
    if cfg.objective.source is ObjectiveSource.PAPER:
        summary["comparison"] = reference.comparison(cfg.model, report)
    rec.write("front.csv", front_to_csv(result))
    rec.write("summary.json", dumps(summary))
    rec.finish(
        "optimize",
        {
            "components": components,
            "inputs": [input_record(p) for p in inputs],
            "summary": {
                "max_production": report["max_production"],
                "min_consumption": report["min_consumption"],
                "mean_ratio": report["mean_ratio"],
                "ratio_at_max_production": report["ratio_at_max_production"],
            },
            **clock.record(),
        },
    )
    return summary


def paper_opt(cfg: RunConfig, model: str, out_dir) -> dict:
    cfg = replace(
        cfg,
        objective=replace(cfg.objective, source=ObjectiveSource.PAPER, model=presets.resolve(model).value),
    )
    return optimize(cfg, out_dir)


# --- polarize ---------------------------------------------------------------


def polarize(cfg: RunConfig, out_dir, voltages=None) -> dict:
    """Polarization CSV for the preset at physics.pressure_atm / physics.temperature_c.

    Voltages that fail are reported in the manifest and skipped.
    """
    clock = _Clock(cfg.record_timing)
    rec = _recorder(cfg, out_dir)
    cell, base = _physics(cfg)
    op = operating_point_at(base, cfg.physics.pressure_atm * ATM, cfg.physics.temperature_c + 273.15, cell.constants)
    e_rev = open_circuit_voltage(op, cell.constants)
    buf = io.StringIO()
    buf.write(",".join(POLARIZATION_HEADER) + "\n")
    errors = []
    rows = 0
    for v in voltages if voltages is not None else cfg.polarize_voltages:
        volt = e_rev if v == "ocv" else float(v)
        try:
            if volt > e_rev:
                raise DomainError(f"voltage above open circuit ({e_rev:.6f} V)")
            i = solve_current_at_voltage(cell, op, volt)
        except PolycellError as exc:
            log.warning("polarize: %s V failed: %s", volt, exc)
            errors.append({"voltage_v": volt, "error": str(exc)})
            continue
        buf.write(f"{fmt(volt)},{fmt(i)},{fmt(volt * i)}\n")
        rows += 1
    rec.write("polarization.csv", buf.getvalue())
    summary = {"rows": rows, "open_circuit_voltage_v": e_rev, "errors": errors}
    rec.finish("polarize", {"components": ["cell"], "summary": summary, **clock.record()})
    return summary


# --- full chain -------------------------------------------------------------


def pipeline(cfg: RunConfig, out_dir) -> dict:
    """sweep -> train -> fit (on the trained networks) -> optimize on the fitted surfaces."""
    out = Path(out_dir)
    sweep(cfg, out)
    surfaces = {}
    for objective in Objective:
        train(cfg, out / f"{objective.value}.csv", out)
        fit(cfg, out / f"{objective.value}.mlp.json", out)
        surfaces[objective] = out / f"{objective.value}.surface.json"
    cfg = replace(cfg, objective=replace(cfg.objective, source=ObjectiveSource.SURFACES))
    return optimize(cfg, out, surfaces[Objective.PRODUCTION], surfaces[Objective.CONSUMPTION])


__all__ = [
    "sweep",
    "train",
    "fit",
    "optimize",
    "paper_opt",
    "polarize",
    "pipeline",
    "resolve_objectives",
    "train_network",
    "SweepError",
]
