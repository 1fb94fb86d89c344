"""Run configuration: a flat TOML document with dotted section keys.

Recognised keys (defaults in brackets)::

    preset                        cell preset: cubic | pentagonal | hexagonal [pentagonal]
    seed                          overrides every component seed when given
    objective.source              paper | surfaces | surrogate | physics [paper]
    objective.model               model whose published surfaces are used [= preset]
    objective.production_surface  fitted surface file (source = surfaces)
    objective.consumption_surface
    objective.production_model    trained model file (source = surrogate)
    objective.consumption_model
    bounds.p_min / bounds.p_max   atm [1 / 5]
    bounds.t_min / bounds.t_max   degC [50 / 90]
    grid.p_steps / grid.t_steps   [9 / 9]
    physics.voltage               operating voltage for sweeps, V [0.6]
    physics.limiting_current      A/m^2 [14000]
    physics.pressure_atm          operating point for polarize [1]
    physics.temperature_c         [80]
    polarize.voltages             list of V; "ocv" means open circuit
    train.learning_rate [0.001]  train.epochs [15000]  train.batch_size [full]
    train.optimizer [adam]  train.seed [1]  train.beta1 / beta2 / epsilon
    ga.population_size [200]  ga.generations [200]  ga.seed [1]
    ga.crossover_probability [0.9]  ga.sbx_index [15]
    ga.mutation_probability [1/2]  ga.mutation_index [20]
    manifest.timing               record wall-clock timings [false]
"""

from __future__ import annotations

import enum
import re
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from polycell.cell.presets import resolve
from polycell.errors import ConfigError, PolycellError
from polycell.evolve.operators import Bounds, GAConfig
from polycell.surrogate.mlp import TrainConfig


class ObjectiveSource(str, enum.Enum):
    PAPER = "paper"
    SURFACES = "surfaces"
    SURROGATE = "surrogate"
    PHYSICS = "physics"


DEFAULT_POLARIZE_VOLTAGES = ("ocv",) + tuple(round(1.1 - 0.05 * k, 2) for k in range(21))


@dataclass(frozen=True)
class GridConfig:
    p_steps: int = 9
    t_steps: int = 9


@dataclass(frozen=True)
class PhysicsConfig:
    voltage: float = 0.6
    limiting_current: float = 1.4e4
    pressure_atm: float = 1.0
    temperature_c: float = 80.0


@dataclass(frozen=True)
class ObjectiveConfig:
    source: ObjectiveSource = ObjectiveSource.PAPER
    model: str | None = None
    production_surface: str | None = None
    consumption_surface: str | None = None
    production_model: str | None = None
    consumption_model: str | None = None


@dataclass(frozen=True)
class RunConfig:
    preset: str = "pentagonal"
    seed: int | None = None
    bounds: Bounds = Bounds()
    grid: GridConfig = GridConfig()
    physics: PhysicsConfig = PhysicsConfig()
    objective: ObjectiveConfig = ObjectiveConfig()
    train: TrainConfig = TrainConfig()
    ga: GAConfig = GAConfig()
    polarize_voltages: tuple = DEFAULT_POLARIZE_VOLTAGES
    record_timing: bool = False
    output_dir: str | None = field(default=None, compare=False)

    @property
    def model(self) -> str:
        return self.objective.model or self.preset

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(
            self,
            seed=seed,
            train=replace(self.train, seed=seed),
            ga=replace(self.ga, seed=seed),
        )

    def echo(self) -> dict[str, Any]:
        """Flat key -> value view, as written to manifests (output_dir omitted)."""
        out: dict[str, Any] = {"preset": self.preset, "seed": self.seed}
        for section, obj in (
            ("bounds", self.bounds),
            ("grid", self.grid),
            ("physics", self.physics),
            ("objective", self.objective),
            ("train", self.train),
            ("ga", self.ga),
        ):
            for key, value in asdict(obj).items():
                out[f"{section}.{key}"] = value.value if isinstance(value, enum.Enum) else value
        out["polarize.voltages"] = list(self.polarize_voltages)
        out["manifest.timing"] = self.record_timing
        return out


_SECTIONS = {
    "bounds": Bounds,
    "grid": GridConfig,
    "physics": PhysicsConfig,
    "objective": ObjectiveConfig,
    "train": TrainConfig,
    "ga": GAConfig,
}


def known_keys() -> list[str]:
    keys = ["preset", "seed", "polarize.voltages", "manifest.timing"]
    for section, cls in _SECTIONS.items():
        keys += [f"{section}.{f.name}" for f in fields(cls)]
    return keys


def _flatten(doc: dict, prefix: str = "") -> dict[str, Any]:
    flat = {}
    for key, value in doc.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        else:
            flat[name] = value
    return flat


_LINE_RE = re.compile(r"line (\d+)")


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = _LINE_RE.search(str(exc))
        where = f"line {match.group(1)}" if match else "unknown line"
        raise ConfigError(f"{source}: parse error at {where}: {exc}") from None
    flat = _flatten(doc)
    allowed = set(known_keys())
    unknown = sorted(k for k in flat if k not in allowed)
    if unknown:
        raise ConfigError(f"{source}: unknown key(s): {', '.join(unknown)}")
    return build_config(flat, source)


def build_config(flat: dict[str, Any], source: str = "<config>") -> RunConfig:
    try:
        sections: dict[str, dict[str, Any]] = {name: {} for name in _SECTIONS}
        for key, value in flat.items():
            if "." in key and key.split(".", 1)[0] in sections:
                section, name = key.split(".", 1)
                sections[section][name] = value
        preset = str(flat.get("preset", "pentagonal")).lower()
        resolve(preset)
        objective = ObjectiveConfig(**sections["objective"])
        objective = replace(objective, source=ObjectiveSource(objective.source))
        if objective.model is not None:
            objective = replace(objective, model=resolve(objective.model).value)
        cfg = RunConfig(
            preset=preset,
            bounds=Bounds(**{k: float(v) for k, v in sections["bounds"].items()}),
            grid=GridConfig(**{k: int(v) for k, v in sections["grid"].items()}),
            physics=PhysicsConfig(**{k: float(v) for k, v in sections["physics"].items()}),
            objective=objective,
            train=TrainConfig(**sections["train"]),
            ga=GAConfig(**sections["ga"]),
            polarize_voltages=tuple(flat.get("polarize.voltages", DEFAULT_POLARIZE_VOLTAGES)),
            record_timing=bool(flat.get("manifest.timing", False)),
        )
        if cfg.grid.p_steps < 2 or cfg.grid.t_steps < 2:
            raise ConfigError("grid steps must be >= 2")
        for v in cfg.polarize_voltages:
            if v != "ocv" and not (isinstance(v, (int, float)) and v > 0):
                raise ConfigError(f"invalid polarization voltage {v!r}")
        if "seed" in flat:
            seed = flat["seed"]
            if not isinstance(seed, int) or seed < 0:
                raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")
            cfg = cfg.with_seed(seed)
        return cfg
    except ConfigError:
        raise
    except (PolycellError, TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: invalid value: {exc}") from None


def load_config(path: str | Path | None = None) -> RunConfig:
    if path is None:
        return parse_config("", "<defaults>")
    path = Path(path)
    return parse_config(path.read_text(), str(path))
