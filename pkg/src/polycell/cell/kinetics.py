"""Butler-Volmer volumetric transfer currents and the reversible cell voltage."""

from __future__ import annotations

import math

from polycell.cell.types import CONSTANTS, Electrode, ElectrodeKinetics, PhysicalConstants
from polycell.errors import ConvergenceError, DomainError, SaturationError

EXPONENT_LIMIT = 500.0
MAX_ITER = 200
ABS_TOL = 1e-10
REL_TOL = 1e-8


def _exponents(kinetics: ElectrodeKinetics, overpotential: float, temperature: float, constants: PhysicalConstants):
    f = constants.faraday / (constants.gas_constant * temperature)
    xa = kinetics.alpha_anodic * f * overpotential
    xc = kinetics.alpha_cathodic * f * overpotential
    if abs(xa) > EXPONENT_LIMIT or abs(xc) > EXPONENT_LIMIT:
        raise SaturationError(
            f"Butler-Volmer exponent overflow at eta={overpotential} V, T={temperature} K"
        )
    return xa, xc


def transfer_current(
    electrode: Electrode,
    kinetics: ElectrodeKinetics,
    concentration_ratio: float,
    overpotential: float,
    temperature: float,
    constants: PhysicalConstants = CONSTANTS,
) -> float:
    """Volumetric transfer current in A/m^3.

    Anode: j (C/Cref)^g [exp(aa F eta/RT) - exp(-ac F eta/RT)]
    Cathode: j (C/Cref)^g [-exp(aa F eta/RT) + exp(-ac F eta/RT)]
    so the anode rate is >= 0 for eta >= 0 and the cathode rate >= 0 for eta <= 0.
    """
    if temperature <= 0:
        raise DomainError(f"temperature must be positive, got {temperature}")
    if concentration_ratio < 0:
        raise DomainError(f"concentration ratio must be non-negative, got {concentration_ratio}")
    xa, xc = _exponents(kinetics, overpotential, temperature, constants)
    prefactor = kinetics.volumetric_exchange_current * concentration_ratio**kinetics.concentration_exponent
    bracket = math.exp(xa) - math.exp(-xc)
    if Electrode(electrode) is Electrode.CATHODE:
        bracket = -bracket
    return prefactor * bracket


def overpotential_limit(kinetics: ElectrodeKinetics, temperature: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Largest |eta| that keeps both exponents inside the overflow limit."""
    f = constants.faraday / (constants.gas_constant * temperature)
    return EXPONENT_LIMIT / (max(kinetics.alpha_anodic, kinetics.alpha_cathodic) * f)


def invert_transfer_current(
    electrode: Electrode,
    kinetics: ElectrodeKinetics,
    concentration_ratio: float,
    target_current: float,
    temperature: float,
    constants: PhysicalConstants = CONSTANTS,
    max_iter: int = MAX_ITER,
) -> float:
    """Overpotential giving `target_current`, found by bisection.

    The bracket is [0, eta_max] for the anode and [-eta_max, 0] for the cathode,
    with eta_max the overflow limit. Stops once the residual is within
    max(1e-10, 1e-8 |target|) or the bracket collapses to adjacent floats.
    """
    electrode = Electrode(electrode)
    if target_current < 0:
        raise DomainError(f"{electrode.value} transfer current must be non-negative, got {target_current}")
    if target_current == 0:
        return 0.0
    if concentration_ratio <= 0:
        raise ConvergenceError("zero reactant concentration cannot sustain a positive current")
    sign = 1.0 if electrode is Electrode.ANODE else -1.0
    tol = max(ABS_TOL, REL_TOL * abs(target_current))

    def residual(eta_mag: float) -> float:
        return transfer_current(electrode, kinetics, concentration_ratio, sign * eta_mag, temperature, constants) - target_current

    lo, hi = 0.0, overpotential_limit(kinetics, temperature, constants) * (1.0 - 1e-12)
    if residual(hi) < 0:
        raise ConvergenceError(
            f"target {target_current} A/m^3 exceeds the largest representable {electrode.value} current"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        r = residual(mid)
        if abs(r) <= tol or mid in (lo, hi):
            return sign * mid
        if r < 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(f"bisection did not converge in {max_iter} iterations (target={target_current})")


def reversible_voltage(
    temperature: float,
    p_h2_atm: float,
    p_o2_atm: float,
    constants: PhysicalConstants = CONSTANTS,
) -> float:
    """Nernst open-circuit voltage with partial pressures in atm."""
    if p_h2_atm <= 0 or p_o2_atm <= 0:
        raise DomainError("reactant partial pressures must be positive")
    rt_2f = constants.gas_constant * temperature / (2.0 * constants.faraday)
    return 1.229 - 0.85e-3 * (temperature - 298.15) + rt_2f * math.log(p_h2_atm * math.sqrt(p_o2_atm))
