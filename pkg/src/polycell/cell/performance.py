"""Zero-dimensional voltage loss budget, polarization curves and cell powers."""

from __future__ import annotations

import math
from typing import Iterable

from polycell.cell import kinetics
from polycell.cell.kinetics import invert_transfer_current, reversible_voltage
from polycell.cell.transport import (
    channel_pressure_drop,
    channel_velocity,
    inlet_concentration,
    partial_pressure,
    stream_density,
    stream_viscosity,
)
from polycell.cell.types import (
    CONSTANTS,
    CellGeometry,
    CellSpec,
    Electrode,
    MEAProperties,
    OperatingPoint,
    PhysicalConstants,
    PolarizationCurve,
    PolarizationPoint,
    PowerReport,
)
from polycell.cell.water import ATM
from polycell.errors import ConvergenceError, DomainError, LimitingCurrentError, NumericError

VOLTAGE_TOL = 1e-8


def ohmic_overpotential(current_density: float, mea: MEAProperties, membrane_thickness: float) -> float:
    if current_density < 0:
        raise DomainError("current density must be non-negative")
    return current_density * (membrane_thickness / mea.sigma_mem + mea.contact_resistance)


def concentration_overpotential(
    current_density: float,
    limiting_current: float,
    temperature: float,
    constants: PhysicalConstants = CONSTANTS,
) -> float:
    if current_density < 0:
        raise DomainError("current density must be non-negative")
    if current_density >= limiting_current:
        raise LimitingCurrentError(f"current density {current_density} A/m^2 >= limiting current {limiting_current}")
    rt_2f = constants.gas_constant * temperature / (2.0 * constants.faraday)
    return -rt_2f * math.log1p(-current_density / limiting_current)


def open_circuit_voltage(op: OperatingPoint, constants: PhysicalConstants = CONSTANTS) -> float:
    return reversible_voltage(
        op.inlet_temperature,
        partial_pressure(op, "anode", "H2", constants) / ATM,
        partial_pressure(op, "cathode", "O2", constants) / ATM,
        constants,
    )


def _concentration_ratios(cell: CellSpec, op: OperatingPoint) -> tuple[float, float]:
    c = cell.constants
    return (
        inlet_concentration(op, "anode", "H2", c) / cell.anode.reference_concentration,
        inlet_concentration(op, "cathode", "O2", c) / cell.cathode.reference_concentration,
    )


def voltage_losses(cell: CellSpec, op: OperatingPoint, current_density: float) -> dict[str, float]:
    """Each loss term (V) at `current_density`; activation terms are magnitudes."""
    T = op.inlet_temperature
    c = cell.constants
    # i = R V_cl / A  =>  R = i / t_cl for a uniform catalyst layer
    rate = current_density / cell.geometry.cl_thickness
    ratio_a, ratio_c = _concentration_ratios(cell, op)
    eta_a = invert_transfer_current(Electrode.ANODE, cell.anode, ratio_a, rate, T, c)
    eta_c = invert_transfer_current(Electrode.CATHODE, cell.cathode, ratio_c, rate, T, c)
    return {
        "activation_anode": abs(eta_a),
        "activation_cathode": abs(eta_c),
        "ohmic": ohmic_overpotential(current_density, cell.mea, cell.geometry.membrane_thickness),
        "concentration": concentration_overpotential(current_density, cell.limiting_current, T, c),
    }


def cell_voltage(cell: CellSpec, op: OperatingPoint, current_density: float) -> float:
    """Forward loss budget: E_rev minus every overpotential."""
    return open_circuit_voltage(op, cell.constants) - math.fsum(voltage_losses(cell, op, current_density).values())


def solve_current_at_voltage(
    cell: CellSpec,
    op: OperatingPoint,
    voltage: float,
    max_iter: int = kinetics.MAX_ITER,
) -> float:
    """Current density (A/m^2) at which the loss budget yields `voltage`.

    Bisection on [0, i_lim). Points where a kinetic term cannot be evaluated
    count as overshooting the voltage.
    """
    if voltage <= 0:
        raise DomainError(f"cell voltage must be positive, got {voltage}")
    e_rev = open_circuit_voltage(op, cell.constants)
    if voltage >= e_rev:
        return 0.0

    def residual(i: float) -> float:
        try:
            return cell_voltage(cell, op, i) - voltage
        except NumericError:
            return -math.inf

    lo, hi = 0.0, cell.limiting_current
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            return lo
        r = residual(mid)
        if abs(r) <= VOLTAGE_TOL:
            return mid
        if r > 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(f"loss-budget bisection did not converge in {max_iter} iterations at V={voltage}")


class PolarizationError(NumericError):
    def __init__(self, voltage: float, cause: Exception):
        self.voltage = voltage
        self.cause = cause
        super().__init__(f"at {voltage} V: {cause}")


def polarization_curve(cell: CellSpec, op: OperatingPoint, voltages: Iterable[float]) -> PolarizationCurve:
    voltages = list(voltages)
    if not voltages:
        raise DomainError("at least one voltage is required")
    e_rev = open_circuit_voltage(op, cell.constants)
    points = []
    for v in voltages:
        if not 0 < v <= e_rev:
            raise PolarizationError(v, DomainError(f"voltage outside (0, {e_rev:.6f}]"))
        try:
            i = solve_current_at_voltage(cell, op, v)
        except NumericError as exc:
            raise PolarizationError(v, exc) from exc
        points.append(PolarizationPoint(v, i, v * i))
    return PolarizationCurve(tuple(points))


def power_report(
    current_density: float,
    voltage: float,
    geometry: CellGeometry,
    pressure_drop: float,
    inlet_velocity: float,
) -> PowerReport:
    """Production I*V*A_eff and consumption dP*A_in*u_in."""
    return PowerReport(
        production_power=current_density * voltage * geometry.active_area,
        consumption_power=pressure_drop * geometry.inlet_area * inlet_velocity,
        pressure_drop=pressure_drop,
        inlet_velocity=inlet_velocity,
    )


def operating_powers(cell: CellSpec, op: OperatingPoint, voltage: float) -> PowerReport:
    """Powers at one operating point; consumption is the cathode pumping power."""
    i = solve_current_at_voltage(cell, op, voltage)
    rho = stream_density(op, "cathode", cell.constants)
    mu = stream_viscosity("cathode", op.inlet_temperature)
    dp = channel_pressure_drop(cell.geometry, mu, rho, op.mass_flow_cathode)
    u = channel_velocity(cell.geometry, rho, op.mass_flow_cathode)
    return power_report(i, voltage, cell.geometry, dp, u)
