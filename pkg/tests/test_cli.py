"""Tests for the command-line interface: parsing, output formats, exit codes."""

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from wigner_nonstd.cli import (
    ConfigError,
    main,
    parse_half,
    parse_k_list,
    parse_r_list,
    parse_tol,
    read_config_file,
)
from wigner_nonstd.halfint import HalfInt


def run_main(*argv):
    return main(list(argv))


def run_json(capsys, *argv):
    code = run_main(*argv)
    captured = capsys.readouterr()
    assert code == 0, captured.err
    return json.loads(captured.out)


class TestParsers:
    def test_parse_half(self):
        assert parse_half("3/2") == HalfInt(3)
        assert parse_half("2") == HalfInt(4)

    def test_parse_half_range_guard(self):
        with pytest.raises(ConfigError):
            parse_half("-1")
        with pytest.raises(ConfigError):
            parse_half("65")
        with pytest.raises(ConfigError):
            parse_half("x")

    def test_parse_r_list(self):
        assert parse_r_list("0,0.37") == (0.0, 0.37)
        assert parse_r_list("1/4") == (0.25,)
        assert parse_r_list("2, 3/2 ,0.5") == (2.0, 1.5, 0.5)

    def test_parse_r_list_errors(self):
        with pytest.raises(ConfigError):
            parse_r_list("abc")
        with pytest.raises(ConfigError):
            parse_r_list("1/0")
        with pytest.raises(ConfigError):
            parse_r_list(",")

    def test_parse_k_list(self):
        assert parse_k_list("2,4") == (2, 4)
        assert parse_k_list("2-5") == (2, 3, 4, 5)
        assert parse_k_list("2-3,7") == (2, 3, 7)

    def test_parse_k_list_errors(self):
        with pytest.raises(ConfigError):
            parse_k_list("1,3")  # k < 2
        with pytest.raises(ConfigError):
            parse_k_list("x")
        with pytest.raises(ConfigError):
            parse_k_list("")

    def test_parse_tol(self):
        assert parse_tol("1e-9") == 1e-9
        with pytest.raises(ConfigError):
            parse_tol("0")
        with pytest.raises(ConfigError):
            parse_tol("-1")
        with pytest.raises(ConfigError):
            parse_tol("soft")

    def test_read_config_file(self, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text("# commented\nj1 = 1/2\n\nr = 0,0.37\n")
        assert read_config_file(str(cfg)) == {"j1": "1/2", "r": "0,0.37"}

    def test_read_config_file_errors(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("no separator here\n")
        with pytest.raises(ConfigError):
            read_config_file(str(bad))
        with pytest.raises(ConfigError):
            read_config_file(str(tmp_path / "missing.cfg"))


class TestTabulateCg:
    def test_spin_half_pair_has_sixteen_rows(self, capsys):
        payload = run_json(capsys, "tabulate-cg", "--j1", "1/2", "--j2", "1/2")
        assert payload["scheme"] == "nonstandard"
        assert payload["formula"] == "cg"
        assert payload["columns"][:3] == ["j1", "j2", "j"]
        # 2*2*1 rows into j=0 plus 2*2*3 into j=1
        assert len(payload["rows"]) == 16

    def test_contains_coupling_phase_value(self, capsys):
        payload = run_json(capsys, "tabulate-cg", "--j1", "1/2", "--j2", "1/2")
        target = 1.0 / math.sqrt(2.0)
        hits = [row for row in payload["rows"]
                if abs(row["value"][0]) < 1e-12 and abs(abs(row["value"][1]) - target) < 1e-12]
        assert hits, "expected a purely imaginary coupling of magnitude 1/sqrt2"

    def test_rows_are_sorted_by_labels(self, capsys):
        from fractions import Fraction

        payload = run_json(capsys, "tabulate-cg", "--j1", "1/2", "--j2", "1/2")
        keys = [[float(Fraction(x)) for x in row["labels"][:4]]
                for row in payload["rows"]]
        assert keys == sorted(keys)

    def test_default_r_is_zero(self, capsys):
        payload = run_json(capsys, "tabulate-cg", "--j1", "1/2", "--j2", "1/2")
        assert {row["labels"][3] for row in payload["rows"]} == {"0.0"}

    def test_rational_r_flag(self, capsys):
        payload = run_json(capsys, "tabulate-cg", "--j1", "1/2", "--j2", "1/2",
                           "--r", "1/4")
        assert {row["labels"][3] for row in payload["rows"]} == {"0.25"}

    def test_csv_format(self, capsys):
        code = run_main("tabulate-cg", "--j1", "1/2", "--j2", "1/2",
                        "--format", "csv")
        assert code == 0
        reader = csv.reader(io.StringIO(capsys.readouterr().out))
        header = next(reader)
        assert header[-4:] == ["re", "im", "magnitude", "phase"]
        assert len(list(reader)) == 16

    def test_missing_labels_exit_two(self, capsys):
        assert run_main("tabulate-cg", "--j1", "1/2") == 2
        assert "error" in capsys.readouterr().err


class TestTabulateFbar:
    def test_row_count(self, capsys):
        payload = run_json(capsys, "tabulate-fbar", "--j1", "1/2", "--j2", "1/2",
                           "--j3", "1")
        assert len(payload["rows"]) == 2 * 2 * 3
        assert payload["formula"] == "fbar"

    def test_two_windings_double_rows(self, capsys):
        payload = run_json(capsys, "tabulate-fbar", "--j1", "1/2", "--j2", "1/2",
                           "--j3", "1", "--r", "0,0.37")
        assert len(payload["rows"]) == 24


class TestTabulateStandard:
    def test_cg_table_with_exact_strings(self, capsys):
        payload = run_json(capsys, "tabulate-standard", "--symbol", "cg",
                           "--j1", "1/2", "--j2", "1/2", "--j", "0")
        assert len(payload["rows"]) == 4
        exacts = {tuple(r["labels"]): r.get("exact") for r in payload["rows"]}
        assert exacts[("1/2", "1/2", "0", "1/2", "-1/2", "0")] == "sqrt(1/2)"

    def test_threejm_table(self, capsys):
        payload = run_json(capsys, "tabulate-standard", "--symbol", "threejm",
                           "--j1", "1", "--j2", "1", "--j3", "1")
        assert len(payload["rows"]) == 27
        by_labels = {tuple(r["labels"]): r for r in payload["rows"]}
        row = by_labels[("1", "1", "1", "1", "-1", "0")]
        assert math.isclose(row["value"][0], math.sqrt(1.0 / 6.0), abs_tol=1e-13)
        assert row["exact"] == "sqrt(1/6)"

    def test_sixj_single_row(self, capsys):
        payload = run_json(capsys, "tabulate-standard", "--symbol", "sixj",
                           "--labels", "1/2,1/2,1,1/2,1/2,1")
        assert len(payload["rows"]) == 1
        assert payload["rows"][0]["exact"] == "1/6"

    def test_sixj_needs_six_labels(self, capsys):
        assert run_main("tabulate-standard", "--symbol", "sixj",
                        "--labels", "1,1,1") == 2

    def test_csv_exact_column(self, capsys):
        code = run_main("tabulate-standard", "--symbol", "sixj",
                        "--labels", "1/2,1/2,1,1/2,1/2,1", "--format", "csv")
        assert code == 0
        reader = csv.reader(io.StringIO(capsys.readouterr().out))
        header = next(reader)
        assert header[-1] == "exact"
        assert next(reader)[-1] == "1/6"


class TestExportOps:
    def test_payload_structure(self, capsys):
        payload = run_json(capsys, "export-ops", "--j", "1")
        assert len(payload["exports"]) == 1
        export = payload["exports"][0]
        assert export["j"] == "1"
        assert export["r"] == 0.0
        assert export["basis_m"] == ["-1", "0", "1"]
        assert export["alpha"] == [0.0, 1.0, 2.0]
        assert set(export["operators"]) == {"h", "u_r", "j_plus", "j_minus",
                                            "j3", "j_squared"}

    def test_shift_wrap_entry(self, capsys):
        # at r = 0 the wrap m = 1 -> m = -1 carries phase exactly 1
        payload = run_json(capsys, "export-ops", "--j", "1")
        u = payload["exports"][0]["operators"]["u_r"]
        assert u[0][2] == [1.0, 0.0]
        assert u[1][0] == [1.0, 0.0]
        assert u[2][1] == [1.0, 0.0]

    def test_winding_changes_wrap_only(self, capsys):
        payload = run_json(capsys, "export-ops", "--j", "1", "--r", "0.37")
        u = payload["exports"][0]["operators"]["u_r"]
        re, im = u[0][2]
        assert math.isclose(math.hypot(re, im), 1.0, abs_tol=1e-12)
        assert abs(im) > 0.1  # nontrivial phase
        assert u[1][0] == [1.0, 0.0]

    def test_csv_format(self, capsys):
        code = run_main("export-ops", "--j", "1/2", "--format", "csv")
        assert code == 0
        reader = csv.reader(io.StringIO(capsys.readouterr().out))
        assert next(reader) == ["j", "r", "operator", "row", "col",
                                "re", "im", "magnitude", "phase"]
        rows = list(reader)
        assert len(rows) == 6 * 2 * 2  # six operators, 2x2 each

    def test_missing_j_exits_two(self, capsys):
        assert run_main("export-ops") == 2


class TestVerifyCommand:
    def test_small_grid_passes(self, capsys):
        code = run_main("verify", "--j-max", "1", "--k", "2-3",
                        "--r", "0,0.37", "--tol", "1e-9")
        captured = capsys.readouterr()
        assert code == 0
        report = json.loads(captured.out)
        assert report["all_pass"] is True
        assert report["failed"] == 0
        assert report["total"] > 50
        assert "checks passed" in captured.err

    def test_report_echoes_configuration(self, capsys):
        run_main("verify", "--j-max", "1/2", "--k", "2", "--r", "0",
                 "--tol", "1e-9", "--seed", "11", "--threads", "1")
        report = json.loads(capsys.readouterr().out)
        assert report["config"]["seed"] == 11
        assert report["config"]["threads"] == 1
        assert report["config"]["j_max"] == "1/2"
        assert report["config"]["r_values"] == [0.0]
        assert report["config"]["tol_override"] == 1e-9

    def test_impossible_tolerance_exits_one(self, capsys):
        code = run_main("verify", "--j-max", "1", "--k", "2", "--r", "0.37",
                        "--tol", "1e-300")
        report = json.loads(capsys.readouterr().out)
        assert code == 1
        assert report["all_pass"] is False
        assert report["failed"] > 0

    def test_deterministic_output(self, tmp_path):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        for out in (out1, out2):
            code = run_main("verify", "--j-max", "3/2", "--k", "2-3",
                            "--r", "0,0.37", "--output", str(out))
            assert code == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_csv_report(self, capsys):
        code = run_main("verify", "--j-max", "1", "--k", "2", "--r", "0",
                        "--format", "csv")
        assert code == 0
        reader = csv.reader(io.StringIO(capsys.readouterr().out))
        assert next(reader) == ["check", "parameters", "residual", "tolerance", "pass"]
        assert len(list(reader)) > 20

    def test_check_entries_have_required_fields(self, capsys):
        run_main("verify", "--j-max", "1", "--k", "2", "--r", "0")
        report = json.loads(capsys.readouterr().out)
        for check in report["checks"]:
            assert set(check) == {"check", "parameters", "residual", "tolerance", "pass"}
            assert isinstance(check["pass"], bool)
            assert check["residual"] >= 0.0


class TestConfigFile:
    def test_config_file_supplies_labels(self, capsys, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text("j1 = 1/2\nj2 = 1/2\n")
        payload = run_json(capsys, "tabulate-cg", "--config", str(cfg))
        assert len(payload["rows"]) == 16

    def test_flags_override_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text("j1 = 1/2\nj2 = 1/2\nr = 0.37\n")
        payload = run_json(capsys, "tabulate-cg", "--config", str(cfg),
                           "--j1", "1", "--r", "0")
        assert {row["labels"][0] for row in payload["rows"]} == {"1"}
        assert {row["labels"][3] for row in payload["rows"]} == {"0.0"}

    def test_config_supports_verify_keys(self, capsys, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text("j-max = 1\nk = 2\nr = 0\nseed = 5\n")
        code = run_main("verify", "--config", str(cfg))
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["config"]["seed"] == 5
        assert report["config"]["j_max"] == "1"


class TestOutputFiles:
    def test_atomic_write_leaves_no_partials(self, tmp_path):
        out = tmp_path / "table.json"
        code = run_main("tabulate-cg", "--j1", "1/2", "--j2", "1/2",
                        "--output", str(out))
        assert code == 0
        payload = json.loads(out.read_text())
        assert len(payload["rows"]) == 16
        leftovers = [p for p in tmp_path.iterdir() if p.name != "table.json"]
        assert leftovers == []

    def test_failed_job_writes_nothing(self, tmp_path, capsys):
        out = tmp_path / "table.json"
        code = run_main("tabulate-cg", "--j1", "1/2", "--output", str(out))
        assert code == 2
        assert not out.exists()
        assert list(tmp_path.iterdir()) == []


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "wigner_nonstd.cli", "tabulate-standard",
             "--symbol", "sixj", "--labels", "1/2,1/2,1,1/2,1/2,1"],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0, proc.stderr
        payload = json.loads(proc.stdout)
        assert payload["rows"][0]["exact"] == "1/6"

    def test_bad_flag_value_exits_two(self):
        proc = subprocess.run(
            [sys.executable, "-m", "wigner_nonstd.cli", "verify",
             "--j-max", "banana"],
            capture_output=True, text=True, timeout=120)
        assert proc.returncode == 2
        assert "error" in proc.stderr
