"""Parameter sweeps, FOM minimization and the MBL/VBL transition point.

Every grid cell goes through ``evaluate_point``. A cell evaluated on its own
therefore reproduces the sweep row bit for bit.
"""
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import Any, Callable, Iterator, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils import ConfigurationError, NotFoundError, build_model

from .channel import capacity_paper_asymmetric
from .energy import fom, power_mbl, power_vbl
from .estimator_snr import SnrModel, choose_logic, crossover_mu
from .logic_models import (
    EQUAL_PRIORS,
    Logic,
    MblParams,
    MeasurementSetup,
    VblParams,
    average_error,
    conditional_errors,
    p_avg_mbl,
    p_avg_vbl,
)

logger = logging.getLogger(__name__)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_CHUNK = 64


class CapacityKind(StrEnum):
    PAPER = "paper"
    TRUE_MI = "true-mi"


class Spacing(StrEnum):
    LINEAR = "linear"
    LOG = "log"


class Axis(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: Literal["mu", "sigma1", "v_th"]
    min: float
    max: float
    count: int = Field(ge=2)
    spacing: Spacing = Spacing.LINEAR

    @model_validator(mode="after")
    def _check_range(self):
        if not self.min < self.max:
            raise ValueError(f"axis {self.name} needs min < max, got {self.min} >= {self.max}")
        if self.spacing is Spacing.LOG and self.min <= 0:
            raise ValueError(f"log-spaced axis {self.name} needs min > 0")
        return self

    def values(self) -> np.ndarray:
        if self.spacing is Spacing.LOG:
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


class SweepGrid(BaseModel):
    """Swept axes plus the fixed parameters of one logic family.

    With MBL, ``couple_threshold`` and no v_th axis, v_th = mu / 2 at every
    cell. ``sigma1`` defaults to ``sigma0``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: Logic
    axes: tuple[Axis, ...] = ()
    mu: float = Field(default=0.0, ge=0)
    sigma0: float = Field(default=1.0, gt=0)
    sigma1: float | None = None
    v_th: float | None = None
    capacity: CapacityKind = CapacityKind.PAPER
    couple_threshold: bool = True

    @model_validator(mode="after")
    def _check_family(self):
        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate sweep axes: {names}")
        swept = set(names)
        if self.family is Logic.VBL:
            if "mu" in swept:
                raise ValueError("VBL grids carry no mu axis")
            if "v_th" not in swept and self.v_th is None:
                raise ValueError("VBL grids need v_th or a v_th axis")
            sigma1_min = next((a.min for a in self.axes if a.name == "sigma1"), self.fixed_sigma1)
            if sigma1_min < self.sigma0:
                raise ValueError("VBL grids need sigma1 >= sigma0")
        elif "v_th" not in swept and self.v_th is None and not self.couple_threshold:
            raise ValueError("MBL grids need v_th, a v_th axis or couple_threshold")
        return self

    @classmethod
    def build(cls, **values) -> "SweepGrid":
        return build_model(cls, values)

    @property
    def fixed_sigma1(self) -> float:
        return self.sigma0 if self.sigma1 is None else self.sigma1

    @property
    def cardinality(self) -> int:
        return math.prod(axis.count for axis in self.axes)

    def cells(self) -> Iterator[dict[str, float]]:
        """Cell parameters in row-major axis order."""
        base = {"mu": self.mu, "sigma0": self.sigma0, "sigma1": self.fixed_sigma1, "v_th": self.v_th}
        names = [axis.name for axis in self.axes]
        for combo in itertools.product(*(axis.values() for axis in self.axes)):
            cell = dict(base)
            cell.update(zip(names, (float(v) for v in combo)))
            if self.family is Logic.MBL and cell["v_th"] is None:
                cell["v_th"] = cell["mu"] / 2.0
            if self.family is Logic.VBL:
                cell["mu"] = 0.0
            yield cell


@dataclass(frozen=True, slots=True)
class SweepRow:
    family: Logic
    mu: float
    sigma0: float
    sigma1: float
    v_th: float
    p_1_given_0: float
    p_0_given_1: float
    p_avg: float
    capacity_paper: float
    mi_true: float
    power: float
    fom_paper: float
    fom_true: float

    def fom_for(self, capacity: CapacityKind) -> float:
        value = self.fom_paper if capacity is CapacityKind.PAPER else self.fom_true
        return math.inf if math.isnan(value) else value

    def in_physical_units(self, setup: MeasurementSetup) -> "SweepRow":
        """Volts, watts, bit/s and J/bit."""
        return replace(
            self,
            mu=setup.to_volts(self.mu),
            sigma0=setup.to_volts(self.sigma0),
            sigma1=setup.to_volts(self.sigma1),
            v_th=setup.to_volts(self.v_th),
            capacity_paper=self.capacity_paper * setup.f_c,
            mi_true=self.mi_true * setup.f_c,
            power=self.power * setup.power_unit,
            fom_paper=self.fom_paper * setup.kt,
            fom_true=self.fom_true * setup.kt,
        )


@dataclass(slots=True)
class SweepResult:
    rows: list[Any]

    @property
    def columns(self) -> tuple[str, ...]:
        return tuple(f.name for f in fields(self.rows[0])) if self.rows else ()

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True, slots=True)
class MinimizeReport:
    family: Logic
    capacity: CapacityKind
    best_params: dict[str, float]
    best_fom: float
    iterations: int
    evaluations: int
    converged: bool
    tolerance_achieved: float
    boundary: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class TransitionPoint:
    sigma1: float
    p_avg_mbl: float
    p_avg_vbl: float
    iterations: int


@dataclass(frozen=True, slots=True)
class SnrCell:
    mu: float
    sigma: float
    snr_mbl: float
    snr_vbl: float
    choice: Logic
    boundary_mu: float


# --- single-cell pipeline -------------------------------------------------


def evaluate_point(family: Logic, mu: float, sigma0: float, sigma1: float, v_th: float) -> SweepRow:
    """logic_models -> channel -> energy at one operating point, normalized units."""
    if family is Logic.MBL:
        params = MblParams(mu=mu, sigma0=sigma0, sigma1=sigma1, v_th=v_th)
        power = power_mbl(params)
    else:
        params = VblParams(sigma0=sigma0, sigma1=sigma1, v_th=v_th)
        power = power_vbl(params)
        mu = 0.0
    errors = conditional_errors(params)
    rates = capacity_paper_asymmetric(errors, EQUAL_PRIORS)
    return SweepRow(
        family=family,
        mu=mu,
        sigma0=sigma0,
        sigma1=sigma1,
        v_th=v_th,
        p_1_given_0=errors.p_1_given_0,
        p_0_given_1=errors.p_0_given_1,
        p_avg=average_error(EQUAL_PRIORS, errors),
        capacity_paper=rates.per_sample_capacity_paper,
        mi_true=rates.per_sample_mi_true,
        power=power,
        fom_paper=fom(power, rates.per_sample_capacity_paper).fom_kt_per_bit,
        fom_true=fom(power, rates.per_sample_mi_true).fom_kt_per_bit,
    )


def _evaluate_cell(task: tuple[Logic, dict[str, float]]) -> SweepRow:
    family, cell = task
    return evaluate_point(family, cell["mu"], cell["sigma0"], cell["sigma1"], cell["v_th"])


def _evaluate_grid(grid: SweepGrid, workers: int) -> list[SweepRow]:
    tasks = [(grid.family, cell) for cell in grid.cells()]
    logger.info("evaluating %d %s cells on %d worker(s)", len(tasks), grid.family, max(workers, 1))
    if workers <= 1 or len(tasks) < 2 * _CHUNK:
        return [_evaluate_cell(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_cell, tasks, chunksize=_CHUNK))


def fom_surface(grid: SweepGrid, workers: int = 1) -> SweepResult:
    return SweepResult(rows=_evaluate_grid(grid, workers))


def capacity_vs_perror(*grids: SweepGrid, workers: int = 1) -> SweepResult:
    """Capacity against p_avg, each family's rows ordered by p_avg."""
    rows = []
    for grid in grids:
        rows.extend(sorted(_evaluate_grid(grid, workers), key=lambda row: (row.p_avg, row.sigma1, row.v_th, row.mu)))
    return SweepResult(rows=rows)


def default_mbl_grid(mu_min: float = 0.05, mu_max: float = 3.0, count: int = 60, **extra) -> SweepGrid:
    return SweepGrid.build(
        family=Logic.MBL,
        axes=(Axis(name="mu", min=mu_min, max=mu_max, count=count),),
        **extra,
    )


def default_vbl_grid(
    sigma1_min: float = 1.05,
    sigma1_max: float = 2.0,
    sigma1_count: int = 40,
    v_th_min: float = 2.0,
    v_th_max: float = 6.0,
    v_th_count: int = 41,
    sigma1_spacing: Spacing = Spacing.LOG,
    **extra,
) -> SweepGrid:
    return SweepGrid.build(
        family=Logic.VBL,
        axes=(
            Axis(name="sigma1", min=sigma1_min, max=sigma1_max, count=sigma1_count, spacing=sigma1_spacing),
            Axis(name="v_th", min=v_th_min, max=v_th_max, count=v_th_count),
        ),
        **extra,
    )


# --- minimization ---------------------------------------------------------


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Minimize ``f`` on [lo, hi]; both endpoints are also probed so boundary minima are exact."""
    if hi <= lo:
        return lo, f(lo)
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    # endpoints first so a tie on a plateau resolves to the bound
    candidates = [(f(lo), lo), (f(hi), hi), (fc, c), (fd, d)]
    best_f, best_x = min(candidates, key=lambda item: item[0])
    return best_x, best_f


class _Recorder:
    """Objective wrapper that remembers the best probe."""

    def __init__(self, family: Logic, capacity: CapacityKind, fixed: dict[str, float], couple_threshold: bool):
        self.family = family
        self.capacity = capacity
        self.fixed = fixed
        self.couple_threshold = couple_threshold
        self.evaluations = 0
        self.best_fom = math.inf
        self.best_params: dict[str, float] = {}

    def resolve(self, point: dict[str, float]) -> dict[str, float]:
        cell = {**self.fixed, **point}
        if self.family is Logic.MBL and self.couple_threshold:
            cell["v_th"] = cell["mu"] / 2.0
        return cell

    def __call__(self, point: dict[str, float]) -> float:
        cell = self.resolve(point)
        row = evaluate_point(self.family, cell["mu"], cell["sigma0"], cell["sigma1"], cell["v_th"])
        value = row.fom_for(self.capacity)
        self.evaluations += 1
        if value < self.best_fom or not self.best_params:
            self.best_fom = value
            self.best_params = {k: cell[k] for k in ("mu", "sigma0", "sigma1", "v_th")}
        return value


def _coordinates(family: Logic, couple_threshold: bool) -> tuple[str, ...]:
    if family is Logic.VBL:
        return ("sigma1", "v_th")
    return ("mu",) if couple_threshold else ("mu", "v_th")


def _start_points(coords: tuple[str, ...], bounds: dict[str, tuple[float, float]]) -> list[dict[str, float]]:
    if len(coords) == 1:
        fractions = [(0.5,), (0.1,), (0.3,), (0.7,), (0.9,)]
    else:
        fractions = [(0.5, 0.5), (0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)]
    starts = []
    for frac in fractions:
        starts.append({c: bounds[c][0] + f * (bounds[c][1] - bounds[c][0]) for c, f in zip(coords, frac)})
    return starts


def _check_bounds(
    family: Logic,
    coords: tuple[str, ...],
    bounds: dict[str, tuple[float, float]],
    sigma0: float,
    tol: float,
) -> dict[str, tuple[float, float]]:
    if not tol > 0:
        raise ConfigurationError(f"tol must be positive, got {tol!r}")
    checked = {}
    for name in coords:
        if name not in bounds:
            raise ConfigurationError(f"missing bounds for {name}")
        lo, hi = (float(v) for v in bounds[name])
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
            raise ConfigurationError(f"bounds for {name} must satisfy min <= max, got ({lo}, {hi})")
        checked[name] = (lo, hi)
    if family is Logic.VBL and checked["sigma1"][0] < sigma0:
        raise ConfigurationError("VBL bounds need sigma1 >= sigma0")
    if "mu" in checked and checked["mu"][0] < 0:
        raise ConfigurationError("mu bounds must be non-negative")
    if "v_th" in checked and family is Logic.VBL and checked["v_th"][0] < 0:
        raise ConfigurationError("VBL v_th bounds must be non-negative")
    return checked


def _settle_on_bounds(
    objective: _Recorder,
    coords: tuple[str, ...],
    box: dict[str, tuple[float, float]],
    tol: float,
) -> tuple[dict[str, float], float, tuple[str, ...]]:
    """Move each coordinate onto its nearer bound when the bound is as good as the best probe.

    Returns the settled point, its FOM and the coordinates that sit at a bound.
    """
    best = dict(objective.best_params)
    best_fom = objective.best_fom
    at_bound = []
    for name in coords:
        lo, hi = box[name]
        edge = lo if best[name] - lo <= hi - best[name] else hi
        value = best_fom if best[name] == edge else objective({**best, name: edge})
        if value <= best_fom * (1.0 + tol):
            best, best_fom = objective.resolve({**best, name: edge}), value
            at_bound.append(name)
    return best, best_fom, tuple(at_bound)


def minimize_fom(
    family: Logic,
    bounds: dict[str, tuple[float, float]],
    tol: float = 1e-6,
    capacity: CapacityKind = CapacityKind.PAPER,
    sigma0: float = 1.0,
    couple_threshold: bool = True,
    max_iter: int = 100,
) -> MinimizeReport:
    """Coordinate descent with golden-section line searches from five fixed starts.

    MBL searches mu with v_th = mu / 2 unless ``couple_threshold`` is off;
    sigma1 stays at sigma0. VBL searches (sigma1, v_th).
    """
    coords = _coordinates(family, couple_threshold)
    box = _check_bounds(family, coords, bounds, sigma0, tol)
    fixed = {"mu": 0.0, "sigma0": sigma0, "sigma1": sigma0, "v_th": 0.0}
    objective = _Recorder(family, capacity, fixed, couple_threshold)

    best_run = None
    for start in _start_points(coords, box):
        point = dict(start)
        value = objective(point)
        converged = False
        displacement = math.inf
        iterations = 0
        for iterations in range(1, max_iter + 1):
            previous_point, previous_value = dict(point), value
            for name in coords:
                lo, hi = box[name]
                x, fx = golden_section(lambda v: objective({**point, name: v}), lo, hi, tol)
                if fx <= value:
                    point[name], value = x, fx
            displacement = max(abs(point[c] - previous_point[c]) for c in coords)
            change = 0.0 if value == previous_value else abs(value - previous_value)
            if displacement < tol and change <= tol * abs(value):
                converged = True
                break
        logger.debug("start %s -> %s fom=%.6g after %d iterations", start, point, value, iterations)
        if best_run is None or value < best_run[0]:
            best_run = (value, iterations, converged, displacement)

    _, iterations, converged, displacement = best_run
    best, best_fom, at_bound = _settle_on_bounds(objective, coords, box, tol)
    if not converged:
        logger.warning("minimize_fom did not converge within %d iterations", max_iter)
    logger.info("minimum fom %.9g at %s (boundary: %s)", best_fom, best, ", ".join(at_bound) or "none")
    return MinimizeReport(
        family=family,
        capacity=capacity,
        best_params=best,
        best_fom=best_fom,
        iterations=iterations,
        evaluations=objective.evaluations,
        converged=converged,
        tolerance_achieved=displacement,
        boundary=at_bound,
    )


# --- transition point ------------------------------------------------------


def p_avg_difference(mu: float, sigma0: float, sigma1: float, v_th_mbl: float, v_th_vbl: float) -> tuple[float, float]:
    """(p_avg of MBL, p_avg of VBL) at one sigma1."""
    mbl = p_avg_mbl(MblParams(mu=mu, sigma0=sigma0, sigma1=sigma1, v_th=v_th_mbl))
    vbl = p_avg_vbl(VblParams(sigma0=sigma0, sigma1=sigma1, v_th=v_th_vbl))
    return mbl, vbl


def find_transition_point(
    mu: float = 2.0,
    sigma0: float = 1.0,
    v_th_mbl: float = 1.0,
    v_th_vbl: float = 2.0,
    sigma1_range: tuple[float, float] = (1.0, 5.0),
    xtol: float = 1e-9,
    max_iter: int = 200,
) -> TransitionPoint:
    """Bisection on the sign of p_avg(MBL) - p_avg(VBL) over sigma1."""
    lo, hi = sigma1_range
    if not sigma0 <= lo < hi:
        raise ConfigurationError(f"sigma1 range must satisfy sigma0 <= min < max, got {sigma1_range}")

    def difference(s1: float) -> float:
        mbl, vbl = p_avg_difference(mu, sigma0, s1, v_th_mbl, v_th_vbl)
        return mbl - vbl

    d_lo, d_hi = difference(lo), difference(hi)
    if d_lo == 0.0:
        return TransitionPoint(lo, *p_avg_difference(mu, sigma0, lo, v_th_mbl, v_th_vbl), iterations=0)
    if d_hi == 0.0:
        return TransitionPoint(hi, *p_avg_difference(mu, sigma0, hi, v_th_mbl, v_th_vbl), iterations=0)
    if (d_lo > 0) == (d_hi > 0):
        raise NotFoundError(f"p_avg curves do not cross on sigma1 in [{lo}, {hi}]")

    iterations = 0
    while hi - lo > xtol and iterations < max_iter:
        iterations += 1
        mid = 0.5 * (lo + hi)
        d_mid = difference(mid)
        if d_mid == 0.0:
            lo = hi = mid
            break
        if (d_mid > 0) == (d_lo > 0):
            lo, d_lo = mid, d_mid
        else:
            hi = mid
    sigma1 = 0.5 * (lo + hi)
    mbl, vbl = p_avg_difference(mu, sigma0, sigma1, v_th_mbl, v_th_vbl)
    return TransitionPoint(sigma1=sigma1, p_avg_mbl=mbl, p_avg_vbl=vbl, iterations=iterations)


def dense_scan_transition(
    mu: float = 2.0,
    sigma0: float = 1.0,
    v_th_mbl: float = 1.0,
    v_th_vbl: float = 2.0,
    sigma1_range: tuple[float, float] = (1.0, 5.0),
    count: int = 10_000,
) -> list[tuple[float, float]]:
    """Grid cells [s_i, s_i+1] on which the p_avg difference changes sign."""
    grid = np.linspace(sigma1_range[0], sigma1_range[1], count)
    signs = []
    for s1 in grid:
        mbl, vbl = p_avg_difference(mu, sigma0, float(s1), v_th_mbl, v_th_vbl)
        signs.append(mbl - vbl > 0)
    return [(float(grid[i]), float(grid[i + 1])) for i in range(count - 1) if signs[i] != signs[i + 1]]


# --- SNR regions ----------------------------------------------------------


def snr_region_map(
    mu_range: tuple[float, float],
    sigma_range: tuple[float, float],
    n: int,
    kurtosis: float = 0.0,
    resolution: int = 61,
) -> SweepResult:
    """Larger-SNR logic per (mu, sigma) cell; sigma is the outer loop."""
    if resolution < 2:
        raise ConfigurationError(f"resolution must be >= 2, got {resolution}")
    if not (0 <= mu_range[0] < mu_range[1]):
        raise ConfigurationError(f"mu range must satisfy 0 <= min < max, got {mu_range}")
    if not (0 < sigma_range[0] < sigma_range[1]):
        raise ConfigurationError(f"sigma range must satisfy 0 < min < max, got {sigma_range}")
    rows = []
    for sigma in np.linspace(sigma_range[0], sigma_range[1], resolution):
        sigma = float(sigma)
        boundary = crossover_mu(n, sigma, kurtosis)
        for mu in np.linspace(mu_range[0], mu_range[1], resolution):
            choice = choose_logic(SnrModel(n=n, mu=float(mu), sigma=sigma, kurtosis_excess=kurtosis))
            rows.append(
                SnrCell(
                    mu=float(mu),
                    sigma=sigma,
                    snr_mbl=choice.snr_mbl,
                    snr_vbl=choice.snr_vbl,
                    choice=choice.choice,
                    boundary_mu=boundary,
                )
            )
    return SweepResult(rows=rows)
