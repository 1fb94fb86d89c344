"""Reduced-order PEM fuel cell model."""

from polycell.cell.kinetics import invert_transfer_current, reversible_voltage, transfer_current
from polycell.cell.performance import (
    cell_voltage,
    concentration_overpotential,
    ohmic_overpotential,
    open_circuit_voltage,
    operating_powers,
    polarization_curve,
    power_report,
    solve_current_at_voltage,
    voltage_losses,
)
from polycell.cell.presets import cell_spec, operating_point
from polycell.cell.transport import (
    average_current_density,
    channel_outlet_state,
    channel_pressure_drop,
    darcy_pressure_gradient,
    effective_diffusivity,
    effective_thermal_conductivity,
    liquid_saturation,
    operating_point_at,
    species_source,
)
from polycell.cell.types import (
    CONSTANTS,
    CellGeometry,
    CellSpec,
    Electrode,
    ElectrodeKinetics,
    GasState,
    MEAProperties,
    ModelTag,
    OperatingPoint,
    PhysicalConstants,
    PolarizationCurve,
    PowerReport,
)
from polycell.cell.water import (
    electroosmotic_drag_flux,
    membrane_water_content,
    saturation_pressure,
    water_activity,
)

__all__ = [
    "invert_transfer_current",
    "reversible_voltage",
    "transfer_current",
    "cell_voltage",
    "concentration_overpotential",
    "ohmic_overpotential",
    "open_circuit_voltage",
    "operating_powers",
    "polarization_curve",
    "power_report",
    "solve_current_at_voltage",
    "voltage_losses",
    "cell_spec",
    "operating_point",
    "average_current_density",
    "channel_outlet_state",
    "channel_pressure_drop",
    "darcy_pressure_gradient",
    "effective_diffusivity",
    "effective_thermal_conductivity",
    "liquid_saturation",
    "operating_point_at",
    "species_source",
    "CONSTANTS",
    "CellGeometry",
    "CellSpec",
    "Electrode",
    "ElectrodeKinetics",
    "GasState",
    "MEAProperties",
    "ModelTag",
    "OperatingPoint",
    "PhysicalConstants",
    "PolarizationCurve",
    "PowerReport",
    "electroosmotic_drag_flux",
    "membrane_water_content",
    "saturation_pressure",
    "water_activity",
]
