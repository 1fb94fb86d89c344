"""Porous-media transport, species balances and channel hydraulics."""

from __future__ import annotations

import math
import warnings
from dataclasses import replace
from typing import Mapping

from polycell.cell.types import (
    CONSTANTS,
    CellGeometry,
    GasState,
    ModelTag,
    OperatingPoint,
    PhysicalConstants,
)
from polycell.cell.water import saturation_pressure
from polycell.errors import DomainError, StarvationError

# Darcy friction constant f*Re for fully developed laminar flow in regular
# polygonal ducts (Shah & London Fanning values times 4).
FRICTION_CONSTANT = {
    ModelTag.CUBIC: 56.91,
    ModelTag.PENTAGONAL: 4 * 14.737,
    ModelTag.HEXAGONAL: 4 * 15.054,
}
LAMINAR_RE_LIMIT = 2300.0

# Sutherland (mu0 Pa s, T0 K, S K) for the dominant carrier of each stream.
_SUTHERLAND = {
    "cathode": (1.716e-5, 273.15, 110.4),  # air
    "anode": (8.411e-6, 273.15, 97.0),  # hydrogen
}


class LaminarRegimeWarning(UserWarning):
    pass


def effective_thermal_conductivity(porosity: float, k_fluid: float, k_solid: float) -> float:
    if not 0.0 <= porosity <= 1.0:
        raise DomainError(f"porosity {porosity} outside [0, 1]")
    if k_fluid < 0 or k_solid < 0:
        raise DomainError("conductivities must be non-negative")
    return porosity * k_fluid + (1.0 - porosity) * k_solid


def effective_diffusivity(
    ref_diffusivity: float,
    porosity: float,
    saturation: float,
    pressure: float,
    temperature: float,
    ref_pressure: float,
    ref_temperature: float,
) -> float:
    """Bruggeman-corrected diffusivity with pore blockage exponent 2.5."""
    if not 0.0 <= porosity <= 1.0:
        raise DomainError(f"porosity {porosity} outside [0, 1]")
    if not 0.0 <= saturation <= 1.0:
        raise DomainError(f"saturation {saturation} outside [0, 1]")
    if min(pressure, temperature, ref_pressure, ref_temperature) <= 0:
        raise DomainError("pressures and temperatures must be positive")
    return (
        porosity**1.5
        * (1.0 - saturation) ** 2.5
        * ref_diffusivity
        * (ref_pressure / pressure)
        * (temperature / ref_temperature) ** 1.5
    )


def liquid_saturation(liquid_volume: float, total_volume: float) -> float:
    if total_volume <= 0:
        raise DomainError("total_volume must be positive")
    if not 0.0 <= liquid_volume <= total_volume:
        raise DomainError(f"liquid volume {liquid_volume} outside [0, {total_volume}]")
    return liquid_volume / total_volume


def gas_state_diffusivity(state: GasState, species: str, porosity: float) -> float:
    return effective_diffusivity(
        state.reference_diffusivity[species],
        porosity,
        liquid_saturation(state.liquid_volume, state.total_pore_volume),
        state.pressure,
        state.temperature,
        state.reference_pressure,
        state.reference_temperature,
    )


def darcy_pressure_gradient(viscosity: float, permeability: float, velocity: float) -> float:
    """Momentum sink -mu u / beta along one axis."""
    if permeability <= 0:
        raise DomainError(f"permeability must be positive, got {permeability}")
    if viscosity <= 0:
        raise DomainError(f"viscosity must be positive, got {viscosity}")
    return -(viscosity / permeability) * velocity


_SOURCE_SPEC = {
    # species: (sign, electrons, molar-mass attribute)
    "H2": (-1.0, 2.0, "molar_mass_h2"),
    "O2": (-1.0, 4.0, "molar_mass_o2"),
    "H2O": (1.0, 2.0, "molar_mass_h2o"),
}


def species_source(species: str, rate: float, basis: str = "mass", constants: PhysicalConstants = CONSTANTS) -> float:
    """Reaction source term for a volumetric transfer current `rate` (A/m^3).

    H2 uses the anode rate, O2 and produced water the cathode rate. Returns
    kg/m^3/s for basis="mass" and mol/m^3/s for basis="molar".
    """
    if rate < 0:
        raise DomainError(f"reaction rate must be non-negative, got {rate}")
    try:
        sign, electrons, attr = _SOURCE_SPEC[species]
    except KeyError:
        raise DomainError(f"unknown species {species!r}") from None
    molar = sign * rate / (electrons * constants.faraday)
    if basis == "molar":
        return molar
    if basis == "mass":
        return getattr(constants, attr) * molar
    raise DomainError(f"unknown basis {basis!r}")


def average_current_density(volumetric_rate: float, catalyst_volume: float, membrane_area: float) -> float:
    """Uniform-rate reduction of (1/A) * integral of R over the catalyst layer."""
    if membrane_area <= 0:
        raise DomainError("membrane area must be positive")
    if volumetric_rate < 0 or catalyst_volume < 0:
        raise DomainError("rate and catalyst volume must be non-negative")
    return volumetric_rate * catalyst_volume / membrane_area


# --- stream composition -----------------------------------------------------


def mole_fractions(mass_fractions: Mapping[str, float], constants: PhysicalConstants = CONSTANTS) -> dict[str, float]:
    moles = {sp: y / constants.molar_mass(sp) for sp, y in mass_fractions.items()}
    total = math.fsum(moles.values())
    return {sp: n / total for sp, n in moles.items()}


def mass_fractions_from_moles(fractions: Mapping[str, float], constants: PhysicalConstants = CONSTANTS) -> dict[str, float]:
    masses = {sp: x * constants.molar_mass(sp) for sp, x in fractions.items()}
    total = math.fsum(masses.values())
    return {sp: m / total for sp, m in masses.items()}


def mixture_molar_mass(mass_fractions: Mapping[str, float], constants: PhysicalConstants = CONSTANTS) -> float:
    total = math.fsum(mass_fractions.values())
    return total / math.fsum(y / constants.molar_mass(sp) for sp, y in mass_fractions.items())


def stream_density(op: OperatingPoint, stream: str, constants: PhysicalConstants = CONSTANTS) -> float:
    """Ideal-gas inlet density of a stream in kg/m^3."""
    molar_mass = mixture_molar_mass(op.mass_fractions[stream], constants)
    return op.inlet_pressure * molar_mass / (constants.gas_constant * op.inlet_temperature)


def stream_viscosity(stream: str, temperature: float) -> float:
    mu0, t0, s = _SUTHERLAND[stream]
    return mu0 * (temperature / t0) ** 1.5 * (t0 + s) / (temperature + s)


def inlet_concentration(op: OperatingPoint, stream: str, species: str, constants: PhysicalConstants = CONSTANTS) -> float:
    """Molar concentration (mol/m^3) of `species` in the inlet stream."""
    x = mole_fractions(op.mass_fractions[stream], constants).get(species, 0.0)
    return x * op.inlet_pressure / (constants.gas_constant * op.inlet_temperature)


def partial_pressure(op: OperatingPoint, stream: str, species: str, constants: PhysicalConstants = CONSTANTS) -> float:
    return mole_fractions(op.mass_fractions[stream], constants).get(species, 0.0) * op.inlet_pressure


def operating_point_at(op: OperatingPoint, pressure: float, temperature: float, constants: PhysicalConstants = CONSTANTS) -> OperatingPoint:
    """Move `op` to a new inlet (P, T), re-humidifying each stream.

    Dry-gas proportions are kept; the water mole fraction becomes
    RH * p_sat(T) / P.
    """
    if pressure <= 0:
        raise DomainError("pressure must be positive")
    psat = saturation_pressure(temperature)
    fractions = {}
    for stream, mass in op.mass_fractions.items():
        x = mole_fractions(mass, constants)
        x_water = op.relative_humidity(stream) * psat / pressure
        if x_water >= 1.0:
            raise DomainError(f"{stream} stream would be pure vapour at P={pressure} Pa, T={temperature} K")
        dry = {sp: v for sp, v in x.items() if sp != "H2O"}
        dry_total = math.fsum(dry.values())
        new_x = {sp: (1.0 - x_water) * v / dry_total for sp, v in dry.items()}
        new_x["H2O"] = x_water
        fractions[stream] = mass_fractions_from_moles(new_x, constants)
    return replace(op, inlet_pressure=pressure, inlet_temperature=temperature, mass_fractions=fractions)


# --- channel balances -------------------------------------------------------


def channel_outlet_state(
    op: OperatingPoint,
    constants: PhysicalConstants = CONSTANTS,
    total_current: float = 0.0,
) -> dict[str, dict[str, float]]:
    """Outlet species mass flows (kg/s) after a Faraday balance at `total_current` (A).

    H2 is consumed in the anode stream; O2 is consumed and water produced in
    the cathode stream. The water credited to the cathode is the mass of the
    consumed reactants, so the balance closes exactly even though the tabulated
    molar masses differ in the fourth digit. Returns {"anode": {...}, "cathode": {...}}.
    """
    if total_current < 0:
        raise DomainError("total current must be non-negative")
    inlet = {
        stream: {sp: y * op.mass_flow(stream) for sp, y in fractions.items()}
        for stream, fractions in op.mass_fractions.items()
    }
    two_f = 2.0 * constants.faraday
    h2_used = constants.molar_mass_h2 * total_current / two_f
    o2_used = constants.molar_mass_o2 * total_current / (2.0 * two_f)
    water_made = h2_used + o2_used

    outlet = {stream: dict(flows) for stream, flows in inlet.items()}
    anode = outlet.setdefault("anode", {})
    cathode = outlet.setdefault("cathode", {})
    for name, stream, used in (("H2", anode, h2_used), ("O2", cathode, o2_used)):
        supplied = stream.get(name, 0.0)
        if used > supplied:
            raise StarvationError(name, supplied, used)
        stream[name] = supplied - used
    cathode["H2O"] = cathode.get("H2O", 0.0) + water_made
    return outlet


def channel_velocity(geometry: CellGeometry, density: float, mass_flow: float) -> float:
    if density <= 0:
        raise DomainError("density must be positive")
    return mass_flow / (density * geometry.inlet_area)


def reynolds_number(geometry: CellGeometry, viscosity: float, density: float, mass_flow: float) -> float:
    u = channel_velocity(geometry, density, mass_flow)
    return density * u * geometry.hydraulic_diameter / viscosity


def channel_pressure_drop(geometry: CellGeometry, viscosity: float, density: float, mass_flow: float) -> float:
    """Laminar fully developed pressure drop fRe mu L u / (2 Dh^2) along one channel."""
    d_h = geometry.hydraulic_diameter
    if d_h <= 0:
        raise DomainError("hydraulic diameter must be positive")
    if viscosity <= 0:
        raise DomainError("viscosity must be positive")
    u = channel_velocity(geometry, density, mass_flow)
    re = density * u * d_h / viscosity
    if re > LAMINAR_RE_LIMIT:
        warnings.warn(f"Reynolds number {re:.0f} exceeds laminar limit", LaminarRegimeWarning, stacklevel=2)
    return FRICTION_CONSTANT[geometry.model_tag] * viscosity * geometry.channel_length * u / (2.0 * d_h**2)
