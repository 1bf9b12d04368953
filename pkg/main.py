"""Command-line entry point: ``python main.py <subcommand> [flags]``.

Exit status 0 on success, 2 on a configuration or usage error and 3 on a
numerical-domain error. Nothing is written when a run fails.
"""
import argparse
import logging
import sys
from typing import Sequence

from pydantic import ValidationError

from config import TOOL_NAME, TOOL_VERSION, RunSettings, configure_logging, load_settings
from handlers import CommandHandler, emit, format_value, read_header, render
from utils import ConfigurationError, DomainError

logger = logging.getLogger(TOOL_NAME)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3

COMMON_FIELDS = ("seed", "workers", "out", "format", "units", "temperature", "c_meas", "f_c", "log_level")

FLAG_ALIASES = {"c_meas": ("--cmeas",), "f_c": ("--fc",)}

_SWEEP_FIELDS = (
    "family",
    "capacity",
    "sigma0",
    "mu_min",
    "mu_max",
    "mu_count",
    "sigma1_min",
    "sigma1_max",
    "sigma1_count",
    "sigma1_spacing",
    "v_th_min",
    "v_th_max",
    "v_th_count",
)

_HYBRID_FIELDS = (
    "mu_target",
    "tau_mu",
    "sigma_ambient",
    "sigma_floor",
    "tau_sigma",
    "dt",
    "t_end",
    "n_snr",
    "kurtosis",
    "v_th_vbl",
    "crossover_factor",
)

SUBCOMMAND_FIELDS = {
    "fom-sweep": _SWEEP_FIELDS,
    "capacity-curve": _SWEEP_FIELDS,
    "fom-min": (
        "family",
        "capacity",
        "sigma0",
        "mu_min",
        "mu_max",
        "sigma1_min",
        "sigma1_max",
        "v_th_min",
        "v_th_max",
        "tol",
    ),
    "snr-map": ("n", "kurtosis", "snr_mu_min", "snr_mu_max", "snr_sigma_min", "snr_sigma_max", "resolution"),
    "transition-point": (
        "transition_mu",
        "sigma0",
        "v_th_mbl",
        "v_th_vbl",
        "transition_sigma1_min",
        "transition_sigma1_max",
    ),
    "reliability": _HYBRID_FIELDS + ("transition_sigma1_min", "transition_sigma1_max", "profile_count"),
    "hybrid-sim": _HYBRID_FIELDS,
    "mc-validate": ("samples", "trials"),
    "limits": ("sigma0", "sigma1", "v_th"),
    "distributions": ("family", "mu", "sigma0", "sigma1", "v_th", "x_min", "x_max", "x_count"),
}

SUBCOMMAND_HELP = {
    "fom-sweep": "FOM over the MBL mean axis and the VBL (sigma1, v_th) grid",
    "capacity-curve": "capacity against average error probability",
    "fom-min": "minimum FOM per logic family",
    "snr-map": "larger-SNR logic over a (mu, sigma) grid",
    "transition-point": "sigma1 at which MBL and VBL error rates cross",
    "reliability": "MBL and VBL error rates across sigma1",
    "hybrid-sim": "VBL to MBL startup trace",
    "mc-validate": "Monte Carlo check of every analytic formula",
    "limits": "MBL energy floor and the sub-KT VBL witness",
    "distributions": "state densities and readout decision at one operating point",
}

META_KEYS = ("tool", "version", "subcommand")


def _add_setting(parser: argparse.ArgumentParser, name: str) -> None:
    flags = ["--" + name.replace("_", "-"), *FLAG_ALIASES.get(name, ())]
    # values stay strings here; RunSettings coerces and validates them
    parser.add_argument(*flags, dest=name, default=argparse.SUPPRESS, metavar=name.upper())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for name in COMMON_FIELDS:
        _add_setting(common, name)
    common.add_argument("--config", dest="config_file", default=None, help="key=value run file; flags override it")
    common.add_argument("--verbose", action="store_true", help="log at INFO")
    common.add_argument("--debug", action="store_true", help="log at DEBUG")

    parser = argparse.ArgumentParser(prog=TOOL_NAME, description="VBL vs MBL thermal-noise energy limits")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    for subcommand, names in SUBCOMMAND_FIELDS.items():
        sub = subparsers.add_parser(subcommand, parents=[common], help=SUBCOMMAND_HELP[subcommand])
        for name in names:
            _add_setting(sub, name)
    replay = subparsers.add_parser("replay", parents=[common], help="re-run from the metadata of an output file")
    replay.add_argument("source", help="CSV or JSON file written by an earlier run")
    for name in dict.fromkeys(n for names in SUBCOMMAND_FIELDS.values() for n in names):
        _add_setting(replay, name)
    return parser


def _flag_values(args: argparse.Namespace) -> dict[str, str]:
    return {k: v for k, v in vars(args).items() if k in RunSettings.model_fields}


def _replay_values(source: str, overrides: dict[str, str]) -> tuple[str, dict[str, str]]:
    meta = read_header(source)
    if meta.get("tool") != TOOL_NAME:
        raise ConfigurationError(f"{source} was not written by {TOOL_NAME}")
    subcommand = meta.get("subcommand", "")
    if subcommand not in SUBCOMMAND_FIELDS:
        raise ConfigurationError(f"{source} names unknown subcommand {subcommand!r}")
    values = {k: v for k, v in meta.items() if k not in META_KEYS}
    values.update(overrides)
    return subcommand, values


def build_meta(subcommand: str, settings: RunSettings) -> dict[str, str]:
    meta = {"tool": TOOL_NAME, "version": TOOL_VERSION, "subcommand": subcommand}
    meta.update((name, format_value(value)) for name, value in settings.reproducing_items())
    return meta


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    configure_logging("WARNING")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG

    forced_level = "DEBUG" if args.debug else "INFO" if args.verbose else None
    try:
        flags = _flag_values(args)
        if args.subcommand == "replay":
            subcommand, values = _replay_values(args.source, flags)
            settings = load_settings(values)
        else:
            subcommand = args.subcommand
            settings = load_settings(flags, args.config_file)
        configure_logging(forced_level or settings.log_level)

        result = CommandHandler(settings).handle(subcommand)
        text = render(settings.format, build_meta(subcommand, settings), result.columns, result.rows)
        emit(text, settings.out, stdout or sys.stdout)
    except (ConfigurationError, ValidationError) as exc:
        logger.error("configuration error: %s", str(exc).splitlines()[0])
        return EXIT_CONFIG
    except DomainError as exc:
        logger.error("domain error: %s", exc)
        return EXIT_DOMAIN
    except OSError as exc:
        logger.error("cannot write output: %s", exc)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(run())
