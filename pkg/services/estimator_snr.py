"""SNR of the sample mean (MBL) and of the sample variance (VBL).

``kurtosis_excess`` is the fourth standardized moment minus 3, so the
Gaussian case reduces to the classical Var(s^2) = 2 sigma^4 / (N - 1).
"""
import math
from dataclasses import dataclass

from utils import DomainError

from .logic_models import Logic


def _check_n(n: int) -> None:
    if int(n) != n or n < 2:
        raise DomainError(f"sample count must be an integer >= 2, got {n!r}")


@dataclass(frozen=True, slots=True)
class SnrModel:
    n: int
    mu: float
    sigma: float
    kurtosis_excess: float = 0.0

    def __post_init__(self):
        _check_n(self.n)
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")


@dataclass(frozen=True, slots=True)
class LogicChoice:
    choice: Logic
    snr_mbl: float
    snr_vbl: float


def snr_mbl(model: SnrModel) -> float:
    return model.n * model.mu * model.mu / (model.sigma * model.sigma)


def _relative_variance(n: int, kurtosis_excess: float) -> float:
    _check_n(n)
    return 2.0 / (n - 1) + kurtosis_excess / n


def var_of_sample_variance(sigma: float, n: int, kurtosis_excess: float = 0.0) -> float:
    relative = _relative_variance(n, kurtosis_excess)
    if relative < 0:
        raise DomainError(f"kurtosis {kurtosis_excess!r} gives a negative variance at n={n}")
    return sigma**4 * relative


def snr_vbl(n: int, kurtosis_excess: float = 0.0) -> float:
    relative = _relative_variance(n, kurtosis_excess)
    if relative <= 0:
        raise DomainError(f"kurtosis {kurtosis_excess!r} gives a non-positive SNR denominator at n={n}")
    return 1.0 / relative


def choose_logic(model: SnrModel) -> LogicChoice:
    """Larger SNR wins; a tie goes to VBL."""
    mbl = snr_mbl(model)
    vbl = snr_vbl(model.n, model.kurtosis_excess)
    choice = Logic.MBL if mbl > vbl else Logic.VBL
    return LogicChoice(choice=choice, snr_mbl=mbl, snr_vbl=vbl)


def crossover_mu(n: int, sigma: float, kurtosis_excess: float = 0.0) -> float:
    """Mean at which SNR_MBL equals SNR_VBL: sigma * sqrt(SNR_VBL / N)."""
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    return sigma * math.sqrt(snr_vbl(n, kurtosis_excess) / n)
