"""Information rates of the binary threshold channel.

``capacity_paper_asymmetric`` evaluates 1 - H(Y|X), read with base-2
logarithms so that it reduces to the BSC capacity for symmetric errors.
``mutual_information_true`` is H(Y) - H(Y|X). The two agree only when the
output distribution is uniform.
"""
import math
from dataclasses import dataclass

from utils import DomainError, binary_entropy_bits
from utils.special_functions import LN_2, SQRT_2PI

from .logic_models import ErrorPair, MeasurementSetup, Priors


@dataclass(frozen=True, slots=True)
class ChannelRates:
    capacity_paper: float
    mutual_info_true: float
    per_sample_capacity_paper: float
    per_sample_mi_true: float


@dataclass(frozen=True, slots=True)
class CapacityApprox:
    delta_p: float
    capacity_bits_per_sample: float


def _clamp_unit(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def conditional_entropy(errors: ErrorPair, priors: Priors) -> float:
    """H(Y|X) in bits per sample."""
    return priors.p1 * binary_entropy_bits(errors.p_0_given_1) + priors.p0 * binary_entropy_bits(errors.p_1_given_0)


def output_one_probability(errors: ErrorPair, priors: Priors) -> float:
    """P(Y = 1)."""
    return priors.p1 * (1.0 - errors.p_0_given_1) + priors.p0 * errors.p_1_given_0


def mutual_information_true(errors: ErrorPair, priors: Priors) -> float:
    h_y = binary_entropy_bits(min(max(output_one_probability(errors, priors), 0.0), 1.0))
    return max(h_y - conditional_entropy(errors, priors), 0.0)


def capacity_paper_asymmetric(errors: ErrorPair, priors: Priors, f_c: float = 1.0) -> ChannelRates:
    per_sample_paper = _clamp_unit(1.0 - conditional_entropy(errors, priors))
    per_sample_mi = _clamp_unit(mutual_information_true(errors, priors))
    return ChannelRates(
        capacity_paper=f_c * per_sample_paper,
        mutual_info_true=f_c * per_sample_mi,
        per_sample_capacity_paper=per_sample_paper,
        per_sample_mi_true=per_sample_mi,
    )


def capacity_bsc(p: float, f_c: float = 1.0) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"crossover probability must lie in [0, 1], got {p!r}")
    return f_c * _clamp_unit(1.0 - binary_entropy_bits(p))


def capacity_taylor(delta_p: float, f_c: float = 1.0) -> float:
    """Second-order expansion of the BSC capacity around p = 1/2."""
    if not abs(delta_p) <= 0.5:
        raise DomainError(f"|delta_p| must not exceed 0.5, got {delta_p!r}")
    return 2.0 / LN_2 * f_c * delta_p * delta_p


def capacity_approx(p_avg: float) -> CapacityApprox:
    delta_p = p_avg - 0.5
    return CapacityApprox(delta_p=delta_p, capacity_bits_per_sample=capacity_taylor(delta_p))


def _thermal_mu(mu: float, setup: MeasurementSetup | None) -> float:
    if mu < 0:
        raise DomainError(f"mu must be non-negative, got {mu!r}")
    if setup is None:
        return mu
    return mu / setup.thermal_voltage


def delta_p_mbl(mu: float, setup: MeasurementSetup | None = None) -> float:
    """Small-signal shift of p_avg for MBL at v_th = mu / 2, sigma = 1.

    With ``setup`` given, ``mu`` is read in volts and divided by
    sqrt(KT / C_meas); otherwise it is already in thermal units.
    """
    return _thermal_mu(mu, setup) / (2.0 * SQRT_2PI)


def capacity_mbl_small_signal(mu: float, setup: MeasurementSetup | None = None) -> float:
    """mu^2 / (4 pi ln 2) per sample, times f_c in bit/s when ``setup`` is given."""
    mu_t = _thermal_mu(mu, setup)
    f_c = 1.0 if setup is None else setup.f_c
    return f_c * mu_t * mu_t / (4.0 * math.pi * LN_2)

