"""Built-in cell and operating-point presets for the three channel designs."""

from __future__ import annotations

from polycell.cell.transport import inlet_concentration
from polycell.cell.types import (
    CellGeometry,
    CellSpec,
    ElectrodeKinetics,
    MEAProperties,
    ModelTag,
    OperatingPoint,
)
from polycell.errors import DomainError

MM = 1e-3
MM2 = 1e-6

GEOMETRIES = {
    ModelTag.CUBIC: CellGeometry(
        channel_side=1.0 * MM,
        channel_length=50.0 * MM,
        inlet_area=1.0 * MM2,
        active_area=100.0 * MM2,
        gdl_thickness=0.26 * MM,
        cl_thickness=0.03 * MM,
        membrane_thickness=0.23 * MM,
        model_tag=ModelTag.CUBIC,
    ),
    ModelTag.PENTAGONAL: CellGeometry(
        channel_side=0.4 * MM,
        channel_length=123.5 * MM,
        inlet_area=0.28 * MM2,
        active_area=100.0 * MM2,
        gdl_thickness=0.26 * MM,
        cl_thickness=0.03 * MM,
        membrane_thickness=0.23 * MM,
        model_tag=ModelTag.PENTAGONAL,
    ),
    ModelTag.HEXAGONAL: CellGeometry(
        channel_side=0.3 * MM,
        channel_length=151.5 * MM,
        inlet_area=0.28 * MM2,
        active_area=100.0 * MM2,
        gdl_thickness=0.26 * MM,
        cl_thickness=0.03 * MM,
        membrane_thickness=0.23 * MM,
        model_tag=ModelTag.HEXAGONAL,
    ),
}

# Permeability is not tabulated for these cells; 1e-12 m^2 is a typical GDL value.
MEA = MEAProperties(
    porosity_gdl=0.5,
    porosity_cl=0.5,
    porosity_mem=0.6,
    sigma_sol=100.0,
    sigma_mem=17.1,
    k_eff_electrode=1.3,
    permeability=1e-12,
    contact_resistance=0.0,
)

_ANODE_FRACTIONS = {"H2": 0.113, "H2O": 0.886}
_CATHODE_O2 = {ModelTag.CUBIC: 0.151, ModelTag.PENTAGONAL: 0.150, ModelTag.HEXAGONAL: 0.151}
_CATHODE_H2O = 0.353


def operating_point(tag: ModelTag | str = ModelTag.CUBIC) -> OperatingPoint:
    """Inlet state at 1 atm / 353.15 K, fully humidified, N2 as cathode balance."""
    tag = ModelTag(tag)
    o2 = _CATHODE_O2[tag]
    return OperatingPoint(
        inlet_pressure=101325.0,
        inlet_temperature=353.15,
        rh_anode=1.0,
        rh_cathode=1.0,
        stoich_anode=1.2,
        stoich_cathode=2.0,
        mass_flow_anode=1.3e-7,
        mass_flow_cathode=1.4e-6,
        mass_fractions={
            "anode": dict(_ANODE_FRACTIONS),
            "cathode": {"O2": o2, "H2O": _CATHODE_H2O, "N2": 1.0 - o2 - _CATHODE_H2O},
        },
    )


def cell_spec(tag: ModelTag | str = ModelTag.CUBIC, limiting_current: float = 1.4e4) -> CellSpec:
    """Cell preset; reference concentrations equal the preset inlet concentrations."""
    tag = ModelTag(tag)
    op = operating_point(tag)
    anode = ElectrodeKinetics(
        volumetric_exchange_current=30.0,
        alpha_anodic=0.5,
        alpha_cathodic=1.0,
        concentration_exponent=0.5,
        reference_concentration=inlet_concentration(op, "anode", "H2"),
    )
    cathode = ElectrodeKinetics(
        volumetric_exchange_current=0.004,
        alpha_anodic=0.5,
        alpha_cathodic=1.0,
        concentration_exponent=1.0,
        reference_concentration=inlet_concentration(op, "cathode", "O2"),
    )
    return CellSpec(GEOMETRIES[tag], MEA, anode, cathode, limiting_current=limiting_current)


def resolve(name: str) -> ModelTag:
    try:
        return ModelTag(name.lower())
    except ValueError:
        raise DomainError(f"unknown preset {name!r}; choose from cubic, pentagonal, hexagonal") from None
