"""Logic configurations (MBL, VBL) and their error probabilities.

All voltages are in thermal units: multiples of sqrt(KT / C_meas).
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

from utils import ConfigurationError, DomainError, erfc, gaussian_pdf
from utils.special_functions import SQRT_2

BOLTZMANN = 1.380649e-23  # J/K


class Logic(StrEnum):
    MBL = "mbl"
    VBL = "vbl"


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True, slots=True)
class MeasurementSetup:
    temperature: float = 300.0
    c_meas: float = 1e-15
    f_c: float = 1e6

    def __post_init__(self):
        _require(self.temperature > 0, f"temperature must be positive, got {self.temperature!r}")
        _require(self.c_meas > 0, f"c_meas must be positive, got {self.c_meas!r}")
        _require(self.f_c > 0, f"f_c must be positive, got {self.f_c!r}")

    @property
    def kt(self) -> float:
        """Thermal energy KT in joules."""
        return BOLTZMANN * self.temperature

    @property
    def thermal_variance(self) -> float:
        """KT / C_meas in V^2."""
        return self.kt / self.c_meas

    @property
    def thermal_voltage(self) -> float:
        return math.sqrt(self.thermal_variance)

    @property
    def power_unit(self) -> float:
        """One KT * f_c in watts."""
        return self.kt * self.f_c

    def to_volts(self, x: float) -> float:
        return x * self.thermal_voltage


DEFAULT_SETUP = MeasurementSetup()


@dataclass(frozen=True, slots=True)
class MblParams:
    mu: float
    sigma0: float = 1.0
    sigma1: float = 1.0
    v_th: float | None = None

    def __post_init__(self):
        # v_th defaults to the midpoint between the two means
        if self.v_th is None:
            object.__setattr__(self, "v_th", self.mu / 2.0)
        _require(_finite(self.mu, self.sigma0, self.sigma1, self.v_th), "MBL parameters must be finite")
        _require(self.sigma0 > 0, f"sigma0 must be positive, got {self.sigma0!r}")
        _require(self.sigma1 > 0, f"sigma1 must be positive, got {self.sigma1!r}")
        _require(self.mu >= 0, f"mu must be non-negative, got {self.mu!r}")


@dataclass(frozen=True, slots=True)
class VblParams:
    sigma0: float
    sigma1: float
    v_th: float

    def __post_init__(self):
        _require(_finite(self.sigma0, self.sigma1, self.v_th), "VBL parameters must be finite")
        _require(self.sigma0 > 0, f"sigma0 must be positive, got {self.sigma0!r}")
        _require(
            self.sigma1 >= self.sigma0,
            f"sigma1 must be >= sigma0 for VBL, got sigma0={self.sigma0!r} sigma1={self.sigma1!r}",
        )
        _require(self.v_th >= 0, f"v_th must be non-negative, got {self.v_th!r}")


LogicParams = MblParams | VblParams


def _is_probability(p: float) -> bool:
    return 0.0 <= p <= 1.0


@dataclass(frozen=True, slots=True)
class ErrorPair:
    p_1_given_0: float
    p_0_given_1: float

    def __post_init__(self):
        _require(
            _is_probability(self.p_1_given_0) and _is_probability(self.p_0_given_1),
            f"error probabilities must lie in [0, 1], got {self.p_1_given_0!r}, {self.p_0_given_1!r}",
        )


@dataclass(frozen=True, slots=True)
class Priors:
    p0: float = 0.5
    p1: float = 0.5

    def __post_init__(self):
        _require(self.p0 >= 0 and self.p1 >= 0, "priors must be non-negative")
        _require(abs(self.p0 + self.p1 - 1.0) <= 1e-12, f"priors must sum to 1, got {self.p0!r} + {self.p1!r}")


EQUAL_PRIORS = Priors()


def mbl_conditional_errors(params: MblParams) -> ErrorPair:
    """One-sided threshold on states N(0, sigma0) and N(mu, sigma1)."""
    return ErrorPair(
        p_1_given_0=0.5 * erfc(params.v_th / (SQRT_2 * params.sigma0)),
        p_0_given_1=0.5 * erfc((params.mu - params.v_th) / (SQRT_2 * params.sigma1)),
    )


def vbl_conditional_errors(params: VblParams) -> ErrorPair:
    """Magnitude threshold |x| > v_th on zero-mean states with sigma0 <= sigma1."""
    return ErrorPair(
        p_1_given_0=erfc(params.v_th / (SQRT_2 * params.sigma0)),
        p_0_given_1=1.0 - erfc(params.v_th / (SQRT_2 * params.sigma1)),
    )


def conditional_errors(params: LogicParams) -> ErrorPair:
    if isinstance(params, MblParams):
        return mbl_conditional_errors(params)
    return vbl_conditional_errors(params)


def average_error(priors: Priors, errors: ErrorPair) -> float:
    return priors.p0 * errors.p_1_given_0 + priors.p1 * errors.p_0_given_1


def p_avg_mbl(params: MblParams, priors: Priors = EQUAL_PRIORS) -> float:
    return average_error(priors, mbl_conditional_errors(params))


def p_avg_vbl(params: VblParams, priors: Priors = EQUAL_PRIORS) -> float:
    return average_error(priors, vbl_conditional_errors(params))


def decides_one(params: LogicParams, x: float) -> bool:
    """Readout rule: one-sided for MBL, magnitude for VBL."""
    if isinstance(params, MblParams):
        return x > params.v_th
    return abs(x) > params.v_th


@dataclass(frozen=True, slots=True)
class DensityRow:
    x: float
    pdf_state0: float
    pdf_state1: float
    decides_one: bool


def state_density_profile(params: LogicParams, x_min: float, x_max: float, count: int = 401) -> list[DensityRow]:
    """Both state densities on a linear x grid together with the readout decision."""
    if count < 2 or not x_min < x_max:
        raise ConfigurationError(f"density grid needs count >= 2 and x_min < x_max, got {x_min}, {x_max}, {count}")
    mean1 = params.mu if isinstance(params, MblParams) else 0.0
    step = (x_max - x_min) / (count - 1)
    rows = []
    for i in range(count):
        x = x_min + i * step
        rows.append(
            DensityRow(
                x=x,
                pdf_state0=gaussian_pdf(x, 0.0, params.sigma0),
                pdf_state1=gaussian_pdf(x, mean1, params.sigma1),
                decides_one=decides_one(params, x),
            )
        )
    return rows
