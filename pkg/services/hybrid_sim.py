"""Energy-scavenging startup: the supply mean charges up while the
logic-'1' variance settles, and the readout switches from VBL to MBL.

mu(t) follows a forward-Euler first-order charge toward ``mu_target``;
sigma1(t) relaxes exactly toward ``sigma_floor``.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils import ConfigurationError, build_model

from .estimator_snr import SnrModel, choose_logic, crossover_mu
from .logic_models import Logic, MblParams, VblParams, p_avg_mbl, p_avg_vbl

logger = logging.getLogger(__name__)


class HybridConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    mu_target: float = Field(default=2.0, ge=0)
    tau_mu: float = Field(default=1e-3, gt=0)
    sigma_ambient: float = Field(default=3.0, gt=0)
    sigma_floor: float = Field(default=1.0, gt=0)
    tau_sigma: float = Field(default=2e-3, gt=0)
    dt: float = Field(default=1e-5, gt=0)
    t_end: float = Field(default=1e-2, gt=0)
    n_snr: int = Field(default=11, ge=2)
    kurtosis: float = 0.0
    v_th_vbl: float | None = Field(default=None, ge=0)
    # Switch when mu > factor * sigma1 instead of comparing SNRs (sqrt(2) reproduces the rule of thumb).
    crossover_factor: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _check_dynamics(self):
        if not self.dt < self.tau_mu / 10:
            raise ValueError(f"dt must be below tau_mu / 10, got dt={self.dt} tau_mu={self.tau_mu}")
        if self.sigma_floor > self.sigma_ambient:
            raise ValueError("sigma_floor must not exceed sigma_ambient")
        if self.t_end < self.dt:
            raise ValueError("t_end must be at least one step")
        return self

    @classmethod
    def build(cls, **values) -> "HybridConfig":
        return build_model(cls, values)

    @property
    def vbl_threshold(self) -> float:
        return 2.0 * self.sigma_floor if self.v_th_vbl is None else self.v_th_vbl

    def switch_threshold(self, sigma1: float) -> float:
        """Mean above which MBL is chosen at this sigma1."""
        if self.crossover_factor is not None:
            return self.crossover_factor * sigma1
        return crossover_mu(self.n_snr, sigma1, self.kurtosis)


@dataclass(frozen=True, slots=True)
class HybridRow:
    t: float
    mu: float
    sigma1: float
    snr_mbl: float
    snr_vbl: float
    logic: Logic
    p_avg: float


@dataclass(slots=True)
class HybridTrace:
    rows: list[HybridRow]
    switch_index: int | None = None
    switch_time: float | None = None

    @property
    def transitions(self) -> list[tuple[Logic, Logic]]:
        return [(a.logic, b.logic) for a, b in zip(self.rows, self.rows[1:]) if a.logic is not b.logic]


@dataclass(frozen=True, slots=True)
class ReliabilityRow:
    sigma1: float
    p_avg_mbl: float
    p_avg_vbl: float
    better: Logic


@dataclass(slots=True)
class ReliabilityProfile:
    rows: list[ReliabilityRow]

    @property
    def crossings(self) -> list[tuple[float, float]]:
        """sigma1 cells on which the lower-p_avg logic changes."""
        return [(a.sigma1, b.sigma1) for a, b in zip(self.rows, self.rows[1:]) if a.better is not b.better]


def _chosen_logic(config: HybridConfig, mu: float, sigma1: float) -> tuple[Logic, float, float]:
    decision = choose_logic(SnrModel(n=config.n_snr, mu=mu, sigma=sigma1, kurtosis_excess=config.kurtosis))
    logic = decision.choice
    if config.crossover_factor is not None:
        logic = Logic.MBL if mu > config.switch_threshold(sigma1) else Logic.VBL
    return logic, decision.snr_mbl, decision.snr_vbl


def _p_avg(config: HybridConfig, logic: Logic, mu: float, sigma1: float) -> float:
    if logic is Logic.MBL:
        return p_avg_mbl(MblParams(mu=mu, sigma0=config.sigma_floor, sigma1=sigma1, v_th=mu / 2.0))
    return p_avg_vbl(VblParams(sigma0=config.sigma_floor, sigma1=sigma1, v_th=config.vbl_threshold))


def simulate_startup(config: HybridConfig) -> HybridTrace:
    steps = int(round(config.t_end / config.dt))
    gain = config.dt / config.tau_mu
    decay = math.exp(-config.dt / config.tau_sigma)

    mu = 0.0
    sigma1 = config.sigma_ambient
    rows: list[HybridRow] = []
    switch_index = None
    switch_time = None
    for k in range(steps + 1):
        logic, snr_m, snr_v = _chosen_logic(config, mu, sigma1)
        rows.append(
            HybridRow(
                t=k * config.dt,
                mu=mu,
                sigma1=sigma1,
                snr_mbl=snr_m,
                snr_vbl=snr_v,
                logic=logic,
                p_avg=_p_avg(config, logic, mu, sigma1),
            )
        )
        if switch_index is None and k > 0 and logic is Logic.MBL and rows[k - 1].logic is Logic.VBL:
            switch_index = k
            before = rows[k - 1].mu - config.switch_threshold(rows[k - 1].sigma1)
            after = mu - config.switch_threshold(sigma1)
            fraction = before / (before - after) if after != before else 1.0
            switch_time = rows[k - 1].t + min(max(fraction, 0.0), 1.0) * config.dt
        mu += gain * (config.mu_target - mu)
        sigma1 = config.sigma_floor + (sigma1 - config.sigma_floor) * decay

    if switch_time is None:
        logger.info("no VBL->MBL switch within %.3g s", config.t_end)
    else:
        logger.info("VBL->MBL switch at t=%.6g s (step %d)", switch_time, switch_index)
    return HybridTrace(rows=rows, switch_index=switch_index, switch_time=switch_time)


def reliability_profile(
    config: HybridConfig,
    sigma1_grid: tuple[float, float] = (1.0, 5.0),
    count: int = 401,
) -> ReliabilityProfile:
    """p_avg of both logics across sigma1 at mu = mu_target, v_th,MBL = mu / 2."""
    lo, hi = sigma1_grid
    if count < 2 or not config.sigma_floor <= lo < hi:
        raise ConfigurationError(
            f"sigma1 grid must satisfy sigma_floor <= min < max with count >= 2, got ({lo}, {hi}, {count})"
        )
    rows = []
    for sigma1 in np.linspace(lo, hi, count):
        sigma1 = float(sigma1)
        mbl = p_avg_mbl(
            MblParams(mu=config.mu_target, sigma0=config.sigma_floor, sigma1=sigma1, v_th=config.mu_target / 2.0)
        )
        vbl = p_avg_vbl(VblParams(sigma0=config.sigma_floor, sigma1=sigma1, v_th=config.vbl_threshold))
        rows.append(ReliabilityRow(sigma1=sigma1, p_avg_mbl=mbl, p_avg_vbl=vbl, better=Logic.MBL if mbl < vbl else Logic.VBL))
    return ReliabilityProfile(rows=rows)
