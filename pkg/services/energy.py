"""Power dissipation, energy per bit and the MBL small-signal limit.

Normalized mode measures voltages in thermal units, power in KT * f_c and
capacity in bits per measurement, so the FOM comes out in KT/bit.
"""
import math
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

from utils import DomainError
from utils.special_functions import LN_2

from .logic_models import DEFAULT_SETUP, MblParams, MeasurementSetup, VblParams


class UnitMode(StrEnum):
    NORMALIZED = "normalized"
    PHYSICAL = "physical"


class FomStatus(StrEnum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNDEFINED = "undefined"


@dataclass(frozen=True, slots=True)
class EnergyPoint:
    power: float
    fom_kt_per_bit: float
    fom_joules_per_bit: float
    status: FomStatus = FomStatus.FINITE

    @property
    def is_finite(self) -> bool:
        return self.status is FomStatus.FINITE


@dataclass(frozen=True, slots=True)
class BarrierEnergies:
    e1: float
    e_mbl_per_transition: float


# 2 pi ln 2 KT/bit
FOM_MBL_LIMIT = 2.0 * math.pi * LN_2


def power_mbl(
    params: MblParams,
    setup: MeasurementSetup = DEFAULT_SETUP,
    units: UnitMode = UnitMode.NORMALIZED,
) -> float:
    """f_c * C_meas * mu^2 / 2; mu stays in thermal units in both modes."""
    if units is UnitMode.PHYSICAL:
        mu_volts = setup.to_volts(params.mu)
        return setup.f_c * 0.5 * setup.c_meas * mu_volts * mu_volts
    return 0.5 * params.mu * params.mu


def power_vbl(
    params: VblParams,
    setup: MeasurementSetup = DEFAULT_SETUP,
    units: UnitMode = UnitMode.NORMALIZED,
) -> float:
    """f_c * C_meas * (sigma1^2 - sigma0^2)."""
    if units is UnitMode.PHYSICAL:
        s0 = setup.to_volts(params.sigma0)
        s1 = setup.to_volts(params.sigma1)
        return setup.f_c * setup.c_meas * (s1 * s1 - s0 * s0)
    return params.sigma1 * params.sigma1 - params.sigma0 * params.sigma0


def fom(
    power: float,
    capacity: float,
    setup: MeasurementSetup = DEFAULT_SETUP,
    units: UnitMode = UnitMode.NORMALIZED,
) -> EnergyPoint:
    """Energy per bit. Zero capacity is flagged rather than raised."""
    if power < 0 or capacity < 0:
        raise DomainError(f"power and capacity must be non-negative, got {power!r}, {capacity!r}")
    if capacity == 0.0:
        if power == 0.0:
            return EnergyPoint(power, math.nan, math.nan, FomStatus.UNDEFINED)
        return EnergyPoint(power, math.inf, math.inf, FomStatus.INFINITE)

    ratio = power / capacity
    if units is UnitMode.PHYSICAL:
        return EnergyPoint(power, ratio / setup.kt, ratio)
    return EnergyPoint(power, ratio, ratio * setup.kt)


def fom_mbl_fundamental_limit() -> float:
    return FOM_MBL_LIMIT


def mbl_transition_energy(e1: float) -> BarrierEnergies:
    if not e1 >= 0:
        raise DomainError(f"barrier energy must be non-negative, got {e1!r}")
    return BarrierEnergies(e1=e1, e_mbl_per_transition=2.0 * e1)
