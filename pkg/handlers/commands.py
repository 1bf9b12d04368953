import logging
from dataclasses import dataclass, fields
from typing import Any, Callable

from config import RunSettings, build_setup
from services import (
    FOM_MBL_LIMIT,
    HybridConfig,
    Logic,
    MblParams,
    MinimizeReport,
    UnitMode,
    VblParams,
    capacity_vs_perror,
    default_mbl_grid,
    default_vbl_grid,
    evaluate_point,
    find_transition_point,
    fom_surface,
    minimize_fom,
    reliability_profile,
    simulate_startup,
    snr_region_map,
    state_density_profile,
    validation_report,
)
from utils import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class CommandResult:
    columns: tuple[str, ...]
    rows: list[Any]

    @classmethod
    def from_rows(cls, row_type: type, rows: list[Any]) -> "CommandResult":
        return cls(columns=tuple(f.name for f in fields(row_type)), rows=rows)


@dataclass(frozen=True, slots=True)
class MinimumRow:
    family: Logic
    capacity: str
    mu: float
    sigma0: float
    sigma1: float
    v_th: float
    best_fom: float
    iterations: int
    evaluations: int
    converged: bool
    tolerance_achieved: float
    boundary: str


@dataclass(frozen=True, slots=True)
class LimitRow:
    quantity: str
    value: float
    unit: str


@dataclass(frozen=True, slots=True)
class DistributionRow:
    family: Logic
    x: float
    pdf_state0: float
    pdf_state1: float
    decides_one: bool


class CommandHandler:
    SUBCOMMANDS = (
        "fom-sweep",
        "capacity-curve",
        "fom-min",
        "snr-map",
        "transition-point",
        "reliability",
        "hybrid-sim",
        "mc-validate",
        "limits",
        "distributions",
    )

    def __init__(self, settings: RunSettings):
        self.settings = settings
        self.setup = build_setup(settings)
        self.physical = settings.units is UnitMode.PHYSICAL
        self._dispatch: dict[str, Callable[[], CommandResult]] = {
            "fom-sweep": self.fom_sweep,
            "capacity-curve": self.capacity_curve,
            "fom-min": self.fom_min,
            "snr-map": self.snr_map,
            "transition-point": self.transition_point,
            "reliability": self.reliability,
            "hybrid-sim": self.hybrid_sim,
            "mc-validate": self.mc_validate,
            "limits": self.limits,
            "distributions": self.distributions,
        }

    def handle(self, subcommand: str) -> CommandResult:
        action = self._dispatch.get(subcommand)
        if action is None:
            raise ConfigurationError(f"unknown subcommand {subcommand!r}")
        logger.info("running %s (units=%s, seed=%d)", subcommand, self.settings.units, self.settings.seed)
        return action()

    def _families(self) -> tuple[Logic, ...]:
        if self.settings.family is None:
            return (Logic.MBL, Logic.VBL)
        return (self.settings.family,)

    def _grids(self) -> list:
        s = self.settings
        grids = []
        for family in self._families():
            if family is Logic.MBL:
                grids.append(
                    default_mbl_grid(s.mu_min, s.mu_max, s.mu_count, sigma0=s.sigma0, capacity=s.capacity)
                )
            else:
                grids.append(
                    default_vbl_grid(
                        s.sigma1_min,
                        s.sigma1_max,
                        s.sigma1_count,
                        s.v_th_min,
                        s.v_th_max,
                        s.v_th_count,
                        s.sigma1_spacing,
                        sigma0=s.sigma0,
                        capacity=s.capacity,
                    )
                )
        return grids

    def _sweep_rows(self, rows: list) -> list:
        if self.physical:
            return [row.in_physical_units(self.setup) for row in rows]
        return rows

    def fom_sweep(self) -> CommandResult:
        rows = []
        for grid in self._grids():
            rows.extend(fom_surface(grid, workers=self.settings.workers).rows)
        result = self._sweep_rows(rows)
        return CommandResult(columns=_columns_of(result), rows=result)

    def capacity_curve(self) -> CommandResult:
        result = capacity_vs_perror(*self._grids(), workers=self.settings.workers)
        rows = self._sweep_rows(result.rows)
        return CommandResult(columns=_columns_of(rows), rows=rows)

    def _minimum_row(self, report: MinimizeReport) -> MinimumRow:
        best = report.best_params
        scale = self.setup.to_volts if self.physical else float
        fom_value = report.best_fom * self.setup.kt if self.physical else report.best_fom
        return MinimumRow(
            family=report.family,
            capacity=str(report.capacity),
            mu=scale(best["mu"]),
            sigma0=scale(best["sigma0"]),
            sigma1=scale(best["sigma1"]),
            v_th=scale(best["v_th"]),
            best_fom=fom_value,
            iterations=report.iterations,
            evaluations=report.evaluations,
            converged=report.converged,
            tolerance_achieved=report.tolerance_achieved,
            boundary=";".join(report.boundary),
        )

    def fom_min(self) -> CommandResult:
        s = self.settings
        rows = []
        for family in self._families():
            if family is Logic.MBL:
                bounds = {"mu": (s.mu_min, s.mu_max)}
            else:
                bounds = {"sigma1": (s.sigma1_min, s.sigma1_max), "v_th": (s.v_th_min, s.v_th_max)}
            report = minimize_fom(family, bounds, tol=s.tol, capacity=s.capacity, sigma0=s.sigma0)
            rows.append(self._minimum_row(report))
        return CommandResult.from_rows(MinimumRow, rows)

    def snr_map(self) -> CommandResult:
        s = self.settings
        result = snr_region_map(
            (s.snr_mu_min, s.snr_mu_max),
            (s.snr_sigma_min, s.snr_sigma_max),
            s.n,
            kurtosis=s.kurtosis,
            resolution=s.resolution,
        )
        return CommandResult(columns=result.columns, rows=result.rows)

    def transition_point(self) -> CommandResult:
        s = self.settings
        point = find_transition_point(
            mu=s.transition_mu,
            sigma0=s.sigma0,
            v_th_mbl=s.v_th_mbl,
            v_th_vbl=s.v_th_vbl,
            sigma1_range=(s.transition_sigma1_min, s.transition_sigma1_max),
        )
        return CommandResult(columns=_columns_of([point]), rows=[point])

    def _hybrid_config(self) -> HybridConfig:
        s = self.settings
        return HybridConfig.build(
            mu_target=s.mu_target,
            tau_mu=s.tau_mu,
            sigma_ambient=s.sigma_ambient,
            sigma_floor=s.sigma_floor,
            tau_sigma=s.tau_sigma,
            dt=s.dt,
            t_end=s.t_end,
            n_snr=s.n_snr,
            kurtosis=s.kurtosis,
            v_th_vbl=s.v_th_vbl,
            crossover_factor=s.crossover_factor,
        )

    def reliability(self) -> CommandResult:
        s = self.settings
        profile = reliability_profile(
            self._hybrid_config(),
            sigma1_grid=(s.transition_sigma1_min, s.transition_sigma1_max),
            count=s.profile_count,
        )
        return CommandResult(columns=_columns_of(profile.rows), rows=profile.rows)

    def hybrid_sim(self) -> CommandResult:
        trace = simulate_startup(self._hybrid_config())
        return CommandResult(columns=_columns_of(trace.rows), rows=trace.rows)

    def mc_validate(self) -> CommandResult:
        s = self.settings
        rows = validation_report(samples=s.samples, trials=s.trials, seed=s.seed, workers=s.workers)
        return CommandResult(columns=_columns_of(rows), rows=rows)

    def limits(self) -> CommandResult:
        s = self.settings
        witness = evaluate_point(Logic.VBL, 0.0, s.sigma0, s.sigma1, s.v_th)
        if self.physical:
            witness = witness.in_physical_units(self.setup)
            fom_unit, power_unit, rate_unit = "J/bit", "W", "bit/s"
            limit = FOM_MBL_LIMIT * self.setup.kt
        else:
            fom_unit, power_unit, rate_unit = "KT/bit", "KT*f_c", "bit/sample"
            limit = FOM_MBL_LIMIT
        rows = [
            LimitRow("fom_mbl_limit", limit, fom_unit),
            LimitRow("witness_p_avg", witness.p_avg, "1"),
            LimitRow("witness_capacity_paper", witness.capacity_paper, rate_unit),
            LimitRow("witness_mi_true", witness.mi_true, rate_unit),
            LimitRow("witness_power", witness.power, power_unit),
            LimitRow("witness_fom_paper", witness.fom_paper, fom_unit),
            LimitRow("witness_fom_true", witness.fom_true, fom_unit),
        ]
        return CommandResult.from_rows(LimitRow, rows)

    def distributions(self) -> CommandResult:
        s = self.settings
        rows = []
        for family in self._families():
            if family is Logic.MBL:
                params = MblParams(mu=s.mu, sigma0=s.sigma0, sigma1=s.sigma0, v_th=s.mu / 2.0)
            else:
                params = VblParams(sigma0=s.sigma0, sigma1=s.sigma1, v_th=s.v_th)
            for row in state_density_profile(params, s.x_min, s.x_max, s.x_count):
                rows.append(DistributionRow(family, row.x, row.pdf_state0, row.pdf_state1, row.decides_one))
        return CommandResult.from_rows(DistributionRow, rows)


def _columns_of(rows: list) -> tuple[str, ...]:
    return tuple(f.name for f in fields(rows[0])) if rows else ()
