"""Water saturation, activity, membrane hydration and electro-osmotic drag."""

from __future__ import annotations

from polycell.cell.types import CONSTANTS
from polycell.errors import DomainError

ATM = 101325.0
T_MIN_SAT = 273.15
T_MAX_SAT = 423.15

# Springer-type log10 polynomial in degC; result in atm.
_PSAT_COEFFS = (-2.1794, 0.02953, -9.1837e-5, 1.4454e-7)

MAX_ACTIVITY = 3.0


def saturation_pressure(temperature: float) -> float:
    """Water vapour saturation pressure in Pa for a temperature in K."""
    if not (T_MIN_SAT <= temperature <= T_MAX_SAT):
        raise DomainError(f"temperature {temperature} K outside [{T_MIN_SAT}, {T_MAX_SAT}] K")
    t = temperature - 273.15
    a0, a1, a2, a3 = _PSAT_COEFFS
    return ATM * 10.0 ** (a0 + a1 * t + a2 * t**2 + a3 * t**3)


def water_activity(vapor_pressure: float, sat_pressure: float) -> float:
    if sat_pressure <= 0:
        raise DomainError(f"sat_pressure must be positive, got {sat_pressure}")
    if vapor_pressure < 0:
        raise DomainError(f"vapor_pressure must be non-negative, got {vapor_pressure}")
    return min(vapor_pressure / sat_pressure, MAX_ACTIVITY)


def membrane_water_content(activity: float) -> float:
    """Water molecules per sulfonic site.

    The two branches disagree by 0.003 at a = 1; the linear branch is used
    there (14.0).
    """
    if activity < 0:
        raise DomainError(f"water activity must be non-negative, got {activity}")
    if activity < 1.0:
        return cubic_branch(activity)
    return linear_branch(activity)


def cubic_branch(activity: float) -> float:
    a = activity
    return 0.043 + 17.81 * a - 39.85 * a**2 + 36.0 * a**3


def linear_branch(activity: float) -> float:
    return 14.0 + 1.4 * (activity - 1.0)


def drag_coefficient(water_content: float) -> float:
    return 2.5 * water_content / 22.0


def electroosmotic_drag_flux(water_content: float, current_density: float, faraday: float = CONSTANTS.faraday) -> float:
    """Water flux (mol/m^2/s) dragged anode-to-cathode by the proton current."""
    if water_content < 0 or current_density < 0:
        raise DomainError("water content and current density must be non-negative")
    return drag_coefficient(water_content) * current_density / faraday

