"""Immutable value types for the reduced-order cell model.

All quantities are SI unless a field name says otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Mapping

from polycell.errors import DomainError


class ModelTag(str, enum.Enum):
    CUBIC = "cubic"
    PENTAGONAL = "pentagonal"
    HEXAGONAL = "hexagonal"


class Electrode(str, enum.Enum):
    ANODE = "anode"
    CATHODE = "cathode"


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


@dataclass(frozen=True)
class PhysicalConstants:
    faraday: float = 96485.0
    gas_constant: float = 8.314
    molar_mass_h2: float = 2.016e-3
    molar_mass_o2: float = 32.00e-3
    molar_mass_h2o: float = 18.015e-3
    molar_mass_n2: float = 28.013e-3

    def __post_init__(self):
        for name, value in vars(self).items():
            _require(value > 0, f"{name} must be positive, got {value}")

    def molar_mass(self, species: str) -> float:
        try:
            return {
                "H2": self.molar_mass_h2,
                "O2": self.molar_mass_o2,
                "H2O": self.molar_mass_h2o,
                "N2": self.molar_mass_n2,
            }[species]
        except KeyError:
            raise DomainError(f"unknown species {species!r}") from None


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class CellGeometry:
    """Channel and MEA dimensions; `channel_side` is the polygon side length."""

    channel_side: float
    channel_length: float
    inlet_area: float
    active_area: float
    gdl_thickness: float
    cl_thickness: float
    membrane_thickness: float
    model_tag: ModelTag

    def __post_init__(self):
        for name in (
            "channel_side",
            "channel_length",
            "inlet_area",
            "active_area",
            "gdl_thickness",
            "cl_thickness",
            "membrane_thickness",
        ):
            _require(getattr(self, name) > 0, f"{name} must be positive")
        _require(self.active_area > self.inlet_area, "active_area must exceed inlet_area")

    @property
    def sides(self) -> int:
        return {ModelTag.CUBIC: 4, ModelTag.PENTAGONAL: 5, ModelTag.HEXAGONAL: 6}[self.model_tag]

    @property
    def hydraulic_diameter(self) -> float:
        """4A/perimeter of the inlet cross-section."""
        return 4.0 * self.inlet_area / (self.sides * self.channel_side)

    @property
    def catalyst_volume(self) -> float:
        return self.cl_thickness * self.active_area


@dataclass(frozen=True)
class MEAProperties:
    porosity_gdl: float
    porosity_cl: float
    porosity_mem: float
    sigma_sol: float
    sigma_mem: float
    k_eff_electrode: float
    permeability: float
    contact_resistance: float = 0.0

    def __post_init__(self):
        for name in ("porosity_gdl", "porosity_cl", "porosity_mem"):
            value = getattr(self, name)
            _require(0.0 < value < 1.0, f"{name} must lie in (0, 1), got {value}")
        for name in ("sigma_sol", "sigma_mem", "k_eff_electrode", "permeability"):
            _require(getattr(self, name) > 0, f"{name} must be positive")
        _require(self.contact_resistance >= 0, "contact_resistance must be non-negative")


@dataclass(frozen=True)
class ElectrodeKinetics:
    """Butler-Volmer parameters; the exchange term is the volumetric product (A/m^3)."""

    volumetric_exchange_current: float
    alpha_anodic: float = 0.5
    alpha_cathodic: float = 1.0
    concentration_exponent: float = 0.5
    reference_concentration: float = 1.0

    def __post_init__(self):
        _require(self.volumetric_exchange_current > 0, "exchange current must be positive")
        for name in ("alpha_anodic", "alpha_cathodic"):
            value = getattr(self, name)
            _require(0.0 < value <= 2.0, f"{name} must lie in (0, 2], got {value}")
        _require(self.concentration_exponent >= 0, "concentration exponent must be >= 0")
        _require(self.reference_concentration > 0, "reference concentration must be positive")


@dataclass(frozen=True)
class OperatingPoint:
    """Inlet state of both streams.

    `mass_fractions` maps "anode"/"cathode" to per-species inlet mass fractions.
    """

    inlet_pressure: float
    inlet_temperature: float
    rh_anode: float = 1.0
    rh_cathode: float = 1.0
    stoich_anode: float = 1.2
    stoich_cathode: float = 2.0
    mass_flow_anode: float = 1.3e-7
    mass_flow_cathode: float = 1.4e-6
    mass_fractions: Mapping[str, Mapping[str, float]] = field(default_factory=dict)

    def __post_init__(self):
        _require(self.inlet_pressure > 0, "inlet_pressure must be positive")
        _require(self.inlet_temperature > 0, "inlet_temperature must be positive")
        for name in ("rh_anode", "rh_cathode"):
            value = getattr(self, name)
            _require(0.0 <= value <= 1.0, f"{name} must lie in [0, 1]")
        _require(self.mass_flow_anode >= 0 and self.mass_flow_cathode >= 0, "mass flows must be >= 0")
        for stream, fractions in self.mass_fractions.items():
            _require(stream in ("anode", "cathode"), f"unknown stream {stream!r}")
            for sp, y in fractions.items():
                _require(0.0 <= y <= 1.0, f"{stream} {sp} mass fraction {y} outside [0, 1]")
            total = math.fsum(fractions.values())
            _require(abs(total - 1.0) <= 0.01, f"{stream} mass fractions sum to {total}, not 1 +- 0.01")

    def mass_flow(self, stream: str) -> float:
        return self.mass_flow_anode if stream == "anode" else self.mass_flow_cathode

    def relative_humidity(self, stream: str) -> float:
        return self.rh_anode if stream == "anode" else self.rh_cathode


@dataclass(frozen=True)
class GasState:
    """Local gas/pore state used by the porous-media transport relations."""

    pressure: float
    temperature: float
    concentrations: Mapping[str, float]
    liquid_volume: float
    total_pore_volume: float
    reference_diffusivity: Mapping[str, float]
    reference_pressure: float = 101325.0
    reference_temperature: float = 300.0
    viscosity: float = 2.0e-5

    def __post_init__(self):
        _require(self.total_pore_volume > 0, "total_pore_volume must be positive")
        _require(
            0.0 <= self.liquid_volume <= self.total_pore_volume,
            "liquid_volume must lie in [0, total_pore_volume]",
        )
        for sp, c in self.concentrations.items():
            _require(c >= 0, f"concentration of {sp} must be >= 0")


@dataclass(frozen=True)
class CellSpec:
    geometry: CellGeometry
    mea: MEAProperties
    anode: ElectrodeKinetics
    cathode: ElectrodeKinetics
    limiting_current: float = 1.4e4
    constants: PhysicalConstants = CONSTANTS

    def __post_init__(self):
        _require(self.limiting_current > 0, "limiting_current must be positive")

    def with_limiting_current(self, value: float) -> "CellSpec":
        return replace(self, limiting_current=value)


@dataclass(frozen=True)
class PolarizationPoint:
    voltage: float
    current_density: float
    power_density: float


@dataclass(frozen=True)
class PolarizationCurve:
    points: tuple[PolarizationPoint, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def voltages(self) -> list[float]:
        return [p.voltage for p in self.points]

    @property
    def current_densities(self) -> list[float]:
        return [p.current_density for p in self.points]

    @property
    def power_densities(self) -> list[float]:
        return [p.power_density for p in self.points]


@dataclass(frozen=True)
class PowerReport:
    production_power: float
    consumption_power: float
    pressure_drop: float
    inlet_velocity: float

    @property
    def ratio(self) -> float | None:
        if self.production_power > 0:
            return self.consumption_power / self.production_power
        return None
