import csv
import io
import json
import math

import numpy as np
import pytest

from config import load_settings
from handlers import format_value
from main import build_meta, build_parser, run


def _invoke(*argv: str) -> tuple[int, str]:
    buffer = io.StringIO()
    code = run(list(argv), stdout=buffer)
    return code, buffer.getvalue()


def _parse_csv(text: str) -> tuple[dict[str, str], list[dict[str, str]]]:
    lines = text.splitlines()
    meta = {}
    while lines and lines[0].startswith("# "):
        key, _, value = lines.pop(0)[2:].partition("=")
        meta[key] = value
    return meta, list(csv.DictReader(lines))


def _limits(rows: list[dict[str, str]]) -> dict[str, tuple[float, str]]:
    return {row["quantity"]: (float(row["value"]), row["unit"]) for row in rows}


class TestLimits:
    def test_normalized(self):
        code, text = _invoke("limits")
        assert code == 0
        meta, rows = _parse_csv(text)
        assert meta["tool"] == "vbl-limits"
        assert meta["subcommand"] == "limits"
        assert meta["seed"] == "20190314"
        values = _limits(rows)
        assert values["fom_mbl_limit"][0] == pytest.approx(4.35517, abs=1e-5)
        assert values["fom_mbl_limit"][1] == "KT/bit"
        assert values["witness_fom_paper"][0] == pytest.approx(0.4424, abs=1e-3)
        assert values["witness_power"] == (pytest.approx(0.44), "KT*f_c")
        assert values["witness_fom_true"][0] > 1.0

    def test_physical(self):
        code, text = _invoke("limits", "--units", "physical")
        assert code == 0
        values = _limits(_parse_csv(text)[1])
        kt = 1.380649e-23 * 300.0
        assert values["fom_mbl_limit"][0] == pytest.approx(2.0 * math.pi * math.log(2.0) * kt, rel=1e-9)
        assert values["fom_mbl_limit"][1] == "J/bit"
        assert values["witness_power"][1] == "W"
        assert values["witness_capacity_paper"][1] == "bit/s"

    def test_json(self):
        code, text = _invoke("limits", "--format", "json")
        assert code == 0
        document = json.loads(text)
        assert document["meta"]["subcommand"] == "limits"
        assert document["meta"]["format"] == "json"
        assert len(document["rows"]) == 7
        assert document["rows"][0]["quantity"] == "fom_mbl_limit"

    def test_floats_keep_seventeen_digits(self):
        _, text = _invoke("limits")
        value = next(row["value"] for row in _parse_csv(text)[1] if row["quantity"] == "fom_mbl_limit")
        assert float(value) == 2.0 * math.pi * math.log(2.0)


class TestExitCodes:
    def test_unknown_flag(self, tmp_path):
        out = tmp_path / "limits.csv"
        assert run(["limits", "--bogus", "1", "--out", str(out)]) == 2
        assert not out.exists()

    def test_missing_subcommand(self):
        assert run([]) == 2

    @pytest.mark.parametrize(
        "argv",
        [
            ("fom-sweep", "--mu-count", "1"),
            ("limits", "--format", "xml"),
            ("limits", "--seed", "-1"),
            ("limits", "--log-level", "chatty"),
            ("hybrid-sim", "--dt", "1e-3"),
            ("snr-map", "--resolution", "1"),
        ],
    )
    def test_configuration_errors(self, argv):
        assert _invoke(*argv)[0] == 2

    def test_no_crossing_is_a_domain_error(self, tmp_path):
        out = tmp_path / "point.csv"
        assert run(["transition-point", "--transition-sigma1-max", "3", "--out", str(out)]) == 3
        assert not out.exists()

    def test_invalid_operating_point(self):
        assert _invoke("limits", "--sigma1", "0.5")[0] == 3

    def test_unwritable_output(self, tmp_path):
        assert run(["limits", "--out", str(tmp_path / "missing" / "limits.csv")]) == 2


class TestReproducibility:
    SWEEP = ("fom-sweep", "--mu-count", "5", "--sigma1-count", "3", "--v-th-count", "4")

    def test_rerun_is_byte_identical(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run([*self.SWEEP, "--out", str(first)]) == 0
        assert run([*self.SWEEP, "--out", str(second), "--workers", "3"]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_worker_count_leaves_monte_carlo_unchanged(self, tmp_path):
        argv = ["mc-validate", "--samples", "262144", "--trials", "65536"]
        single, double = tmp_path / "one.csv", tmp_path / "two.csv"
        assert run([*argv, "--workers", "1", "--out", str(single)]) == 0
        assert run([*argv, "--workers", "2", "--out", str(double)]) == 0
        assert single.read_bytes() == double.read_bytes()
        meta, rows = _parse_csv(single.read_text())
        assert "workers" not in meta and "out" not in meta
        assert len(rows) == 10

    def test_passed_column_is_boolean(self):
        argv = ["mc-validate", "--samples", "20000", "--trials", "16384", "--workers", "1"]
        code, text = _invoke(*argv)
        assert code == 0
        assert {row["passed"] for row in _parse_csv(text)[1]} <= {"true", "false"}
        code, text = _invoke(*argv, "--format", "json")
        assert code == 0
        rows = json.loads(text)["rows"]
        assert len(rows) == 10
        assert all(type(row["passed"]) is bool for row in rows)

    def test_seed_changes_monte_carlo(self):
        argv = ("mc-validate", "--samples", "20000", "--trials", "16384", "--workers", "1")
        assert _invoke(*argv)[1] != _invoke(*argv, "--seed", "7")[1]

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_replay(self, tmp_path, fmt):
        original, replayed = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        argv = ["fom-sweep", "--family", "vbl", "--sigma1-count", "3", "--v-th-count", "3", "--units", "physical"]
        assert run([*argv, "--format", fmt, "--out", str(original)]) == 0
        assert run(["replay", str(original), "--out", str(replayed)]) == 0
        assert original.read_bytes() == replayed.read_bytes()

    def test_replay_flags_override(self, tmp_path):
        original = tmp_path / "limits.csv"
        assert run(["limits", "--out", str(original)]) == 0
        code, text = _invoke("replay", str(original), "--sigma1", "1.3")
        assert code == 0
        assert _parse_csv(text)[0]["sigma1"] == "1.3"

    def test_replay_accepts_every_setting_flag(self, tmp_path):
        original = tmp_path / "sweep.csv"
        argv = ["fom-sweep", "--family", "vbl", "--sigma1-count", "2", "--v-th-count", "2"]
        assert run([*argv, "--out", str(original)]) == 0
        code, text = _invoke("replay", str(original), "--v-th-count", "3", "--capacity", "true-mi")
        assert code == 0
        meta, rows = _parse_csv(text)
        assert meta["v_th_count"] == "3"
        assert meta["capacity"] == "true-mi"
        assert len(rows) == 6

    def test_replay_rejects_foreign_file(self, tmp_path):
        foreign = tmp_path / "foreign.csv"
        foreign.write_text("# tool=other\n# subcommand=limits\nquantity\n")
        assert run(["replay", str(foreign)]) == 2
        assert run(["replay", str(tmp_path / "absent.csv")]) == 2


class TestConfigFile:
    def test_values_and_override(self, tmp_path):
        config = tmp_path / "run.env"
        config.write_text("seed=5\nsigma1=1.3\n")
        meta, _ = _parse_csv(_invoke("limits", "--config", str(config))[1])
        assert meta["seed"] == "5"
        assert meta["sigma1"] == "1.3"
        meta, _ = _parse_csv(_invoke("limits", "--config", str(config), "--sigma1", "1.2")[1])
        assert meta["seed"] == "5"
        assert meta["sigma1"] == "1.2"

    def test_unknown_key(self, tmp_path):
        config = tmp_path / "run.env"
        config.write_text("seed=5\nwobble=1\n")
        assert _invoke("limits", "--config", str(config))[0] == 2

    def test_missing_file(self, tmp_path):
        assert _invoke("limits", "--config", str(tmp_path / "absent.env"))[0] == 2

    def test_environment_is_ignored(self, monkeypatch):
        monkeypatch.setenv("SEED", "99")
        assert _parse_csv(_invoke("limits")[1])[0]["seed"] == "20190314"


class TestSubcommands:
    def test_both_families_mbl_first(self):
        code, text = _invoke("fom-sweep", "--mu-count", "3", "--sigma1-count", "2", "--v-th-count", "2")
        assert code == 0
        rows = _parse_csv(text)[1]
        assert [row["family"] for row in rows] == ["mbl"] * 3 + ["vbl"] * 4

    def test_capacity_curve_sorted(self):
        code, text = _invoke("capacity-curve", "--family", "mbl", "--mu-count", "8")
        assert code == 0
        p = [float(row["p_avg"]) for row in _parse_csv(text)[1]]
        assert p == sorted(p)

    def test_fom_min(self):
        code, text = _invoke("fom-min", "--family", "mbl", "--mu-min", "0.01", "--mu-max", "3")
        assert code == 0
        (row,) = _parse_csv(text)[1]
        assert float(row["best_fom"]) == pytest.approx(4.3552, rel=1e-4)
        assert row["boundary"] == "mu"

    def test_snr_map(self):
        code, text = _invoke("snr-map", "--resolution", "3")
        assert code == 0
        rows = _parse_csv(text)[1]
        assert len(rows) == 9
        assert {row["choice"] for row in rows} <= {"mbl", "vbl"}

    def test_transition_point(self):
        code, text = _invoke("transition-point")
        assert code == 0
        (row,) = _parse_csv(text)[1]
        assert 3.0 < float(row["sigma1"]) < 3.15

    def test_reliability(self):
        code, text = _invoke("reliability", "--profile-count", "41")
        assert code == 0
        rows = _parse_csv(text)[1]
        assert len(rows) == 41
        assert rows[0]["better"] == "mbl" and rows[-1]["better"] == "vbl"

    def test_hybrid_sim(self):
        code, text = _invoke("hybrid-sim", "--t-end", "2e-3")
        assert code == 0
        rows = _parse_csv(text)[1]
        assert len(rows) == 201
        assert rows[0]["logic"] == "vbl" and rows[-1]["logic"] == "mbl"

    def test_distributions(self):
        code, text = _invoke("distributions", "--family", "vbl", "--x-count", "5", "--x-min", "-8", "--x-max", "8")
        assert code == 0
        rows = _parse_csv(text)[1]
        assert [row["decides_one"] for row in rows] == ["true", "false", "false", "false", "true"]


class TestMeta:
    def test_excludes_non_reproducing_settings(self, tmp_path):
        settings = load_settings({"workers": "2", "out": str(tmp_path / "x.csv"), "log_level": "debug"})
        meta = build_meta("limits", settings)
        assert list(meta)[:3] == ["tool", "version", "subcommand"]
        assert not {"workers", "out", "log_level", "family", "crossover_factor"} & set(meta)
        assert meta["mu"] == "0.050000000000000003"

    def test_parser_lists_every_subcommand(self):
        parser = build_parser()
        for name in ("fom-sweep", "capacity-curve", "fom-min", "snr-map", "transition-point", "reliability",
                     "hybrid-sim", "mc-validate", "limits", "distributions", "replay"):
            assert parser.parse_args([name] if name != "replay" else [name, "x.csv"]).subcommand == name


class TestFormatValue:
    def test_numpy_scalars_match_builtins(self):
        assert format_value(np.bool_(True)) == format_value(True) == "true"
        assert format_value(np.float64(0.1)) == format_value(0.1)
        assert format_value(np.int64(7)) == "7"
