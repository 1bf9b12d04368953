"""Seeded Monte Carlo oracles for the analytic formulas.

Work is cut into fixed-size units independent of the worker count. Unit
``i`` of stream ``s`` draws from Philox seeded by
``SeedSequence(seed, spawn_key=(s, i))`` and returns sufficient statistics,
which are summed in unit order. Results are therefore bit-identical for
any number of workers.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import Callable, Sequence

import numpy as np

from utils import DomainError

from .channel import mutual_information_true
from .estimator_snr import SnrModel, snr_mbl, snr_vbl, var_of_sample_variance
from .logic_models import EQUAL_PRIORS, LogicParams, MblParams, VblParams, conditional_errors

logger = logging.getLogger(__name__)

SAMPLE_UNIT = 1 << 16
TRIAL_UNIT = 1 << 14

_STREAM_ERRORS = 1
_STREAM_MI = 2
_STREAM_VARVAR = 3
_STREAM_SNR = 4


class NoiseShape(StrEnum):
    GAUSSIAN = "gaussian"
    UNIFORM = "uniform"
    LAPLACE = "laplace"

    @property
    def excess_kurtosis(self) -> float:
        return _EXCESS_KURTOSIS[self]


_EXCESS_KURTOSIS = {
    NoiseShape.GAUSSIAN: 0.0,
    NoiseShape.UNIFORM: -1.2,
    NoiseShape.LAPLACE: 3.0,
}


@dataclass(frozen=True, slots=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int

    def z_score(self, expected: float) -> float:
        if self.std_error == 0.0:
            return 0.0 if self.mean == expected else math.copysign(math.inf, self.mean - expected)
        return (self.mean - expected) / self.std_error


@dataclass(frozen=True, slots=True)
class EmpiricalErrors:
    p_1_given_0: McEstimate
    p_0_given_1: McEstimate

    @property
    def p_avg(self) -> McEstimate:
        se = 0.5 * math.hypot(self.p_1_given_0.std_error, self.p_0_given_1.std_error)
        return McEstimate(
            mean=0.5 * (self.p_1_given_0.mean + self.p_0_given_1.mean),
            std_error=se,
            n_samples=self.p_1_given_0.n_samples + self.p_0_given_1.n_samples,
            seed=self.p_1_given_0.seed,
        )


@dataclass(frozen=True, slots=True)
class EmpiricalSnr:
    snr_mean: McEstimate
    snr_var: McEstimate


@dataclass(frozen=True, slots=True)
class ValidationRow:
    quantity: str
    analytic: float
    empirical: float
    std_error: float
    z: float
    passed: bool


# --- sampling -------------------------------------------------------------


def unit_rng(seed: int, stream: int, unit: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(stream, unit))
    return np.random.Generator(np.random.Philox(sequence))


def draw_noise(shape: NoiseShape, size, rng: np.random.Generator) -> np.ndarray:
    """Zero-mean, unit-variance samples.

    Gaussian uses numpy's ziggurat sampler; uniform and Laplace use the
    inverse CDF.
    """
    if shape is NoiseShape.GAUSSIAN:
        return rng.standard_normal(size)
    if shape is NoiseShape.UNIFORM:
        return math.sqrt(3.0) * (2.0 * rng.random(size) - 1.0)
    # exponential magnitude with a random sign; b = 1/sqrt(2) gives unit variance
    magnitude = -np.log(1.0 - rng.random(size))
    sign = np.where(rng.random(size) < 0.5, -1.0, 1.0)
    return sign * magnitude / math.sqrt(2.0)


def _check_seed(seed: int) -> int:
    if int(seed) != seed or not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an integer in [0, 2^64), got {seed!r}")
    return int(seed)


def _partition(total: int, unit_size: int) -> list[tuple[int, int]]:
    units = []
    start = 0
    index = 0
    while start < total:
        count = min(unit_size, total - start)
        units.append((index, count))
        start += count
        index += 1
    return units


def _map_units(worker: Callable, tasks: Sequence, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, tasks))


def _grouped_jackknife(unit_stats: np.ndarray, statistic: Callable[[np.ndarray], float]) -> tuple[float, float]:
    """Delete-a-unit jackknife over per-unit sufficient statistics."""
    total = unit_stats.sum(axis=0)
    value = statistic(total)
    groups = len(unit_stats)
    if groups < 2:
        return value, 0.0
    leave_out = np.array([statistic(total - row) for row in unit_stats])
    spread = ((leave_out - leave_out.mean()) ** 2).sum()
    return value, math.sqrt((groups - 1) / groups * spread)


# --- error rates ----------------------------------------------------------


def _error_unit(task) -> tuple[int, int, int]:
    seed, unit, count, params = task
    rng = unit_rng(seed, _STREAM_ERRORS, unit)
    z0 = rng.standard_normal(count)
    z1 = rng.standard_normal(count)
    if isinstance(params, MblParams):
        wrong_0 = np.count_nonzero(params.sigma0 * z0 > params.v_th)
        wrong_1 = np.count_nonzero(params.mu + params.sigma1 * z1 <= params.v_th)
    else:
        wrong_0 = np.count_nonzero(np.abs(params.sigma0 * z0) > params.v_th)
        wrong_1 = np.count_nonzero(np.abs(params.sigma1 * z1) <= params.v_th)
    return count, int(wrong_0), int(wrong_1)


def _binomial(errors: int, count: int, seed: int) -> McEstimate:
    p = errors / count
    return McEstimate(mean=p, std_error=math.sqrt(p * (1.0 - p) / count), n_samples=count, seed=seed)


def empirical_error_rates(logic: LogicParams, n_samples: int, seed: int, workers: int = 1) -> EmpiricalErrors:
    """Conditional error frequencies, n_samples / 2 draws per state."""
    if n_samples < 1000:
        raise DomainError(f"error-rate estimation needs at least 1000 samples, got {n_samples}")
    seed = _check_seed(seed)
    tasks = [(seed, unit, count, logic) for unit, count in _partition(n_samples // 2, SAMPLE_UNIT)]
    logger.debug("error rates: %d units for %d samples", len(tasks), n_samples)
    totals = np.array(_map_units(_error_unit, tasks, workers), dtype=np.int64).sum(axis=0)
    count, wrong_0, wrong_1 = (int(v) for v in totals)
    return EmpiricalErrors(
        p_1_given_0=_binomial(wrong_0, count, seed),
        p_0_given_1=_binomial(wrong_1, count, seed),
    )


# --- mutual information ---------------------------------------------------


def _mi_unit(task) -> list[int]:
    seed, unit, count, params = task
    rng = unit_rng(seed, _STREAM_MI, unit)
    x = rng.random(count) < 0.5
    z = rng.standard_normal(count)
    if isinstance(params, MblParams):
        signal = np.where(x, params.mu + params.sigma1 * z, params.sigma0 * z)
        y = signal > params.v_th
    else:
        signal = np.where(x, params.sigma1 * z, params.sigma0 * z)
        y = np.abs(signal) > params.v_th
    return [
        int(np.count_nonzero(~x & ~y)),
        int(np.count_nonzero(~x & y)),
        int(np.count_nonzero(x & ~y)),
        int(np.count_nonzero(x & y)),
    ]


def plugin_mutual_information(joint_counts: np.ndarray) -> tuple[float, float]:
    """Plug-in I(X;Y) in bits from a 2x2 count table, with a delta-method standard error."""
    counts = np.asarray(joint_counts, dtype=float).reshape(2, 2)
    n = counts.sum()
    pxy = counts / n
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        info = np.where(pxy > 0, np.log2(pxy / np.outer(px, py)), 0.0)
    mi = float((pxy * info).sum())
    spread = float((pxy * info * info).sum()) - mi * mi
    return max(mi, 0.0), math.sqrt(max(spread, 0.0) / n)


def empirical_mutual_information(logic: LogicParams, n_samples: int, seed: int, workers: int = 1) -> McEstimate:
    if n_samples < 10_000:
        raise DomainError(f"mutual-information estimation needs at least 10^4 samples, got {n_samples}")
    seed = _check_seed(seed)
    tasks = [(seed, unit, count, logic) for unit, count in _partition(n_samples, SAMPLE_UNIT)]
    joint = np.array(_map_units(_mi_unit, tasks, workers), dtype=np.int64).sum(axis=0)
    mi, se = plugin_mutual_information(joint)
    return McEstimate(mean=mi, std_error=se, n_samples=n_samples, seed=seed)


# --- sample-variance statistics -------------------------------------------


def _check_trials(n: int, trials: int) -> None:
    if int(n) != n or n < 2:
        raise DomainError(f"sample count must be an integer >= 2, got {n!r}")
    if trials < 10_000:
        raise DomainError(f"at least 10^4 trials are required, got {trials}")


def _moments_unit(task) -> list[float]:
    seed, stream, unit, count, shape, mu, sigma, n = task
    rng = unit_rng(seed, stream, unit)
    x = mu + sigma * draw_noise(shape, (count, n), rng)
    means = x.mean(axis=1)
    s2 = x.var(axis=1, ddof=1)
    return [float(count), float(means.sum()), float((means * means).sum()), float(s2.sum()), float((s2 * s2).sum())]


def _trial_stats(stream: int, shape: NoiseShape, mu: float, sigma: float, n: int, trials: int, seed: int, workers: int) -> np.ndarray:
    seed = _check_seed(seed)
    tasks = [(seed, stream, unit, count, shape, mu, sigma, n) for unit, count in _partition(trials, TRIAL_UNIT)]
    logger.debug("%s trials of n=%d in %d units", trials, n, len(tasks))
    return np.array(_map_units(_moments_unit, tasks, workers), dtype=float)


def _variance(count: float, total: float, total_sq: float) -> float:
    return (total_sq - total * total / count) / (count - 1.0)


def _var_of_s2(stats: np.ndarray) -> float:
    return _variance(stats[0], stats[3], stats[4])


def _snr_of_mean(stats: np.ndarray) -> float:
    mean = stats[1] / stats[0]
    return mean * mean / _variance(stats[0], stats[1], stats[2])


def _snr_of_s2(stats: np.ndarray) -> float:
    mean = stats[3] / stats[0]
    return mean * mean / _variance(stats[0], stats[3], stats[4])


def empirical_variance_of_sample_variance(
    shape: NoiseShape,
    sigma: float,
    n: int,
    trials: int,
    seed: int,
    workers: int = 1,
) -> McEstimate:
    """Variance over ``trials`` of the (n - 1)-divisor sample variance."""
    _check_trials(n, trials)
    stats = _trial_stats(_STREAM_VARVAR, shape, 0.0, sigma, n, trials, seed, workers)
    value, se = _grouped_jackknife(stats, _var_of_s2)
    return McEstimate(mean=value, std_error=se, n_samples=trials, seed=seed)


def empirical_snr(
    shape: NoiseShape,
    mu: float,
    sigma: float,
    n: int,
    trials: int,
    seed: int,
    workers: int = 1,
) -> EmpiricalSnr:
    """E[x_hat]^2 / Var(x_hat) and E[s^2]^2 / Var(s^2) over ``trials``."""
    _check_trials(n, trials)
    stats = _trial_stats(_STREAM_SNR, shape, mu, sigma, n, trials, seed, workers)
    snr_mean, se_mean = _grouped_jackknife(stats, _snr_of_mean)
    snr_var, se_var = _grouped_jackknife(stats, _snr_of_s2)
    return EmpiricalSnr(
        snr_mean=McEstimate(mean=snr_mean, std_error=se_mean, n_samples=trials, seed=seed),
        snr_var=McEstimate(mean=snr_var, std_error=se_var, n_samples=trials, seed=seed),
    )


# --- validation report ----------------------------------------------------


def _row(quantity: str, analytic: float, estimate: McEstimate, z_limit: float = 4.0) -> ValidationRow:
    z = float(estimate.z_score(analytic))
    return ValidationRow(
        quantity=quantity,
        analytic=float(analytic),
        empirical=float(estimate.mean),
        std_error=float(estimate.std_error),
        z=z,
        passed=bool(abs(z) <= z_limit),
    )


def validation_report(samples: int = 10**6, trials: int = 10**6, seed: int = 0, workers: int = 1) -> list[ValidationRow]:
    """Every Monte Carlo oracle against its analytic counterpart."""
    rows = []

    mbl = MblParams(mu=2.0, sigma0=1.0, sigma1=1.0, v_th=1.0)
    vbl = VblParams(sigma0=1.0, sigma1=2.0, v_th=2.0)
    for label, params in (("mbl(mu=2,v_th=1)", mbl), ("vbl(sigma1=2,v_th=2)", vbl)):
        exact = conditional_errors(params)
        empirical = empirical_error_rates(params, samples, seed, workers)
        rows.append(_row(f"{label} p_1_given_0", exact.p_1_given_0, empirical.p_1_given_0))
        rows.append(_row(f"{label} p_0_given_1", exact.p_0_given_1, empirical.p_0_given_1))

    mi = empirical_mutual_information(vbl, samples, seed, workers)
    rows.append(_row("vbl(sigma1=2,v_th=2) mutual_information", mutual_information_true(conditional_errors(vbl), EQUAL_PRIORS), mi))

    for shape, n in ((NoiseShape.GAUSSIAN, 11), (NoiseShape.UNIFORM, 10), (NoiseShape.LAPLACE, 10)):
        estimate = empirical_variance_of_sample_variance(shape, 1.0, n, trials, seed, workers)
        rows.append(_row(f"var_s2 {shape} n={n}", var_of_sample_variance(1.0, n, shape.excess_kurtosis), estimate))

    snr = empirical_snr(NoiseShape.GAUSSIAN, 1.0, 1.0, 10, trials, seed, workers)
    rows.append(_row("snr_mean gaussian mu=1 n=10", snr_mbl(SnrModel(n=10, mu=1.0, sigma=1.0)), snr.snr_mean))
    snr = empirical_snr(NoiseShape.GAUSSIAN, 1.0, 1.0, 11, trials, seed, workers)
    rows.append(_row("snr_var gaussian n=11", snr_vbl(11), snr.snr_var))

    failed = [row.quantity for row in rows if not row.passed]
    if failed:
        logger.warning("Monte Carlo disagreement beyond 4 standard errors: %s", ", ".join(failed))
    else:
        logger.info("all %d Monte Carlo checks within 4 standard errors", len(rows))
    return rows
