import logging
import os
import sys
from pathlib import Path

from dotenv import dotenv_values
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from services.energy import UnitMode
from services.logic_models import Logic, MeasurementSetup
from services.sweep_opt import CapacityKind, Spacing
from utils import ConfigurationError, build_model

TOOL_NAME = "vbl-limits"
TOOL_VERSION = "0.1.0"
DEFAULT_SEED = 20190314

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

# Settings that never change the numbers in an output file.
NON_REPRODUCING_FIELDS = frozenset({"workers", "out", "log_level"})


class RunSettings(BaseSettings):
    """Every run parameter of the command line, flat.

    Values come from flags and an optional key=value file; flags win.
    The process environment is never read.
    """

    model_config = SettingsConfigDict(extra="forbid", env_file=None, env_file_encoding="utf-8")

    # Run control
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    workers: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    out: Path | None = None
    format: str = "csv"
    units: UnitMode = UnitMode.NORMALIZED
    log_level: str = "WARNING"

    # Measurement setup, used by --units physical
    temperature: float = Field(default=300.0, gt=0)
    c_meas: float = Field(default=1e-15, gt=0)
    f_c: float = Field(default=1e6, gt=0)

    # Operating point: MBL limit point for `distributions`, VBL sub-KT witness
    family: Logic | None = None
    capacity: CapacityKind = CapacityKind.PAPER
    mu: float = Field(default=0.05, ge=0)
    sigma0: float = Field(default=1.0, gt=0)
    sigma1: float = Field(default=1.2, gt=0)
    v_th: float = Field(default=4.0, ge=0)

    # Sweep axes, also the fom-min search box
    mu_min: float = Field(default=0.05, ge=0)
    mu_max: float = 3.0
    mu_count: int = Field(default=60, ge=2)
    sigma1_min: float = Field(default=1.05, gt=0)
    sigma1_max: float = 2.0
    sigma1_count: int = Field(default=40, ge=2)
    sigma1_spacing: Spacing = Spacing.LOG
    v_th_min: float = Field(default=2.0, ge=0)
    v_th_max: float = 6.0
    v_th_count: int = Field(default=41, ge=2)
    tol: float = Field(default=1e-6, gt=0)

    # MBL/VBL transition point and reliability profile
    transition_mu: float = Field(default=2.0, ge=0)
    v_th_mbl: float = 1.0
    v_th_vbl: float = Field(default=2.0, ge=0)
    transition_sigma1_min: float = Field(default=1.0, gt=0)
    transition_sigma1_max: float = 5.0
    profile_count: int = Field(default=401, ge=2)

    # SNR region map
    n: int = Field(default=11, ge=2)
    kurtosis: float = 0.0
    snr_mu_min: float = Field(default=0.0, ge=0)
    snr_mu_max: float = 3.0
    snr_sigma_min: float = Field(default=0.1, gt=0)
    snr_sigma_max: float = 3.0
    resolution: int = Field(default=61, ge=2)

    # Startup simulation
    mu_target: float = Field(default=2.0, ge=0)
    tau_mu: float = Field(default=1e-3, gt=0)
    sigma_ambient: float = Field(default=3.0, gt=0)
    sigma_floor: float = Field(default=1.0, gt=0)
    tau_sigma: float = Field(default=2e-3, gt=0)
    dt: float = Field(default=1e-5, gt=0)
    t_end: float = Field(default=1e-2, gt=0)
    n_snr: int = Field(default=11, ge=2)
    crossover_factor: float | None = Field(default=None, gt=0)

    # Monte Carlo and density profiles
    samples: int = Field(default=10**6, ge=1)
    trials: int = Field(default=10**6, ge=1)
    x_min: float = -6.0
    x_max: float = 8.0
    x_count: int = Field(default=281, ge=2)

    @field_validator("format", mode="before")
    @classmethod
    def check_format(cls, v):
        value = str(v).lower()
        if value not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {v!r}")
        return value

    @field_validator("log_level", mode="before")
    @classmethod
    def check_log_level(cls, v):
        value = str(v).upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {v!r}")
        return value

    @classmethod
    def settings_customise_sources(cls, settings_cls, init_settings, env_settings, dotenv_settings, file_secret_settings):
        return init_settings, dotenv_settings

    def reproducing_items(self) -> list[tuple[str, object]]:
        """(name, value) of every setting that shapes the output, in field order."""
        return [
            (name, getattr(self, name))
            for name in type(self).model_fields
            if name not in NON_REPRODUCING_FIELDS and getattr(self, name) is not None
        ]


def load_config_file(path: str | Path) -> Path:
    """Check a key=value run file: it must exist and name only known settings."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file not found: {path}")
    for key in dotenv_values(path):
        if key.lower() not in RunSettings.model_fields:
            raise ConfigurationError(f"unknown setting {key!r} in {path}")
    return path


def load_settings(values: dict, config_file: str | Path | None = None) -> RunSettings:
    if config_file is not None:
        values = {**values, "_env_file": load_config_file(config_file)}
    return build_model(RunSettings, values)


def build_setup(settings: RunSettings) -> MeasurementSetup:
    return MeasurementSetup(temperature=settings.temperature, c_meas=settings.c_meas, f_c=settings.f_c)


def configure_logging(level: str | int = "WARNING") -> None:
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
