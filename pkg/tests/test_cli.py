import json
import math
import subprocess
import sys

import pytest

from specurve.cli import fmt_sig10, main, parse_theta, sig10

from _reference import TABLE_NEG_SQRT2, TABLE_POS_SQRT2


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFormatting:
    def test_ten_significant_digits(self):
        assert fmt_sig10(4.0) == "4.000000000"
        assert fmt_sig10(10.49997602) == "10.49997602"
        assert fmt_sig10(-1.459587134) == "-1.459587134"
        assert fmt_sig10(0.2) == "0.2000000000"
        assert fmt_sig10(0.0) == "0.000000000"

    def test_sig10_for_json(self):
        assert sig10(1.0 / 3.0) == 0.3333333333
        assert sig10(4.0) == 4.0

    def test_parse_theta_tokens(self):
        assert parse_theta("sqrt2") == math.sqrt(2.0)
        assert parse_theta("-sqrt2") == -math.sqrt(2.0)
        assert parse_theta("sqrt6") == math.sqrt(6.0)
        assert parse_theta("-sqrt6") == -math.sqrt(6.0)
        assert parse_theta("-1.25") == -1.25


class TestTruncateCommand:
    def test_csv_rows(self, capsys):
        code, out, _ = run_cli(capsys, "truncate", "--n", "1", "--s", "0")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,s,W,i,theta_root,a_0,a_1,node_count"
        assert lines[1] == "1,0.000000000,4.000000000,1,-1.414213562,1.000000000,1.414213562,0"
        assert lines[2] == "1,0.000000000,4.000000000,2,1.414213562,1.000000000,-1.414213562,1"

    def test_trivial_order_zero(self, capsys):
        code, out, _ = run_cli(capsys, "truncate", "--n", "0", "--s", "1")
        assert code == 0
        rows = out.strip().splitlines()
        assert len(rows) == 2
        assert rows[1].startswith("0,1.000000000,4.000000000,1,0.000000000")

    def test_json_structure(self, capsys):
        code, out, _ = run_cli(capsys, "truncate", "--n", "2", "--s", "0", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["schema_version"] == 1
        assert data["w"] == 6.0
        assert [r["node_count"] for r in data["roots"]] == [0, 1, 2]

    def test_domain_error_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "truncate", "--n", "-1", "--s", "0")
        assert code == 2
        assert "error" in err


class TestTableCommand:
    def test_matches_reference_table_negative(self, capsys):
        code, out, _ = run_cli(
            capsys, "table", "--s", "0", "--theta=-sqrt2", "--nmax", "10", "--k", "4"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "N,W_0,W_1,W_2,W_3"
        for line in lines[1:]:
            cells = line.split(",")
            n_basis = int(cells[0])
            expected = TABLE_NEG_SQRT2[n_basis] + [""] * (4 - len(TABLE_NEG_SQRT2[n_basis]))
            assert cells[1:] == expected, f"row N={n_basis}"

    def test_matches_reference_table_positive(self, capsys):
        code, out, _ = run_cli(
            capsys, "table", "--s", "0", "--theta", "sqrt2", "--nmax", "13", "--k", "4"
        )
        assert code == 0
        for line in out.strip().splitlines()[1:]:
            cells = line.split(",")
            n_basis = int(cells[0])
            expected = TABLE_POS_SQRT2[n_basis] + [""] * (4 - len(TABLE_POS_SQRT2[n_basis]))
            assert cells[1:] == expected, f"row N={n_basis}"

    def test_oscillator_columns_lock_to_ladder(self, capsys):
        code, out, _ = run_cli(
            capsys, "table", "--s", "0", "--theta", "0", "--nmax", "5", "--k", "3"
        )
        assert code == 0
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        assert rows[-1][1:] == ["2.000000000", "6.000000000", "10.00000000"]
        ladder = ["2.000000000", "6.000000000", "10.00000000"]
        for cells in rows:
            n_basis = int(cells[0])
            for j, expected in enumerate(ladder):
                # Level j is exact once its degree-2j eigenfunction fits.
                if n_basis >= 2 * j + 1:
                    assert cells[1 + j] == expected

    def test_missing_required_flag(self, capsys):
        code, _, err = run_cli(capsys, "table", "--s", "0")
        assert code == 1
        assert "--theta" in err


class TestFigureCommand:
    def test_dataset_schema(self, capsys):
        code, out, _ = run_cli(
            capsys, "figure", "--s", "0", "--nmax", "1", "--theta-step", "0.1"
        )
        assert code == 0
        data = json.loads(out)
        assert data["schema_version"] == 1
        assert data["kind"] == "figure_dataset"
        assert data["theta_grid"]["auto_range"] is True
        assert len(data["curves"]) == 2
        assert {(p["n"], p["i"]) for p in data["points"]} == {(0, 1), (1, 1), (1, 2)}
        for curve in data["curves"]:
            assert len(curve["theta"]) == data["theta_grid"]["count"]
            assert len(curve["w"]) == data["theta_grid"]["count"]

    def test_points_lie_near_curves(self, capsys):
        code, out, _ = run_cli(
            capsys, "figure", "--s", "1", "--nmax", "1", "--theta-step", "0.05"
        )
        assert code == 0
        data = json.loads(out)
        for point in data["points"]:
            curve = data["curves"][point["i"] - 1]
            idx = min(
                range(len(curve["theta"])),
                key=lambda q: abs(curve["theta"][q] - point["theta"]),
            )
            assert abs(curve["w"][idx] - point["w"]) < 0.05

    def test_zero_step_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "figure", "--s", "0", "--theta-step", "0")
        assert code == 1
        assert "theta-step" in err

    def test_range_missing_roots_is_coverage_error(self, capsys):
        code, _, err = run_cli(
            capsys,
            "figure",
            "--s",
            "0",
            "--nmax",
            "2",
            "--theta-min=-1",
            "--theta-max",
            "1",
            "--theta-step",
            "0.1",
        )
        assert code == 2
        assert "outside" in err


class TestPhysicalCommand:
    def test_alpha_zero_closed_form(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "physical",
            "--m", "1", "--pz", "0", "--alpha", "0", "--l", "1",
            "--g", "2", "--b", "1", "--chi", "1", "--j", "0",
        )
        assert code == 0
        data = json.loads(out)
        assert data["iterations"] == 0
        assert data["theta"] == 0.0
        assert data["energy"] == pytest.approx(math.sqrt(1.0 + data["w"]), rel=1e-9)

    def test_iterative_solution_reports_residual(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "physical",
            "--m", "1", "--pz", "0", "--alpha", "0.1", "--l", "1",
            "--g", "2", "--b", "1", "--chi", "1",
        )
        assert code == 0
        data = json.loads(out)
        assert data["iterations"] > 0
        assert abs(data["residual"]) <= 1e-9


class TestPermittedCommand:
    def test_artifact_flag_and_roundtrip(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "permitted",
            "--m", "1", "--pz", "0", "--alpha", "0.1", "--l", "1",
            "--g", "2", "--b", "1", "--n", "1", "--i", "2",
            "--roundtrip-check",
        )
        assert code == 0
        data = json.loads(out)
        assert data["artifact_of_truncation"] is True
        assert data["roundtrip_residual"] <= 1e-10

    def test_middle_root_is_domain_error(self, capsys):
        code, _, err = run_cli(
            capsys,
            "permitted",
            "--m", "1", "--pz", "0", "--alpha", "0.1", "--l", "1",
            "--g", "2", "--b", "1", "--n", "2", "--i", "2",
        )
        assert code == 2
        assert "unconstrained" in err


class TestConfigAndOutput:
    def test_config_file_supplies_values(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n=1\ns=0\n# comment line\nformat=csv\n")
        code, out, _ = run_cli(capsys, "truncate", "--config", str(cfg))
        assert code == 0
        assert "1.414213562" in out

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n=1\ns=0\n")
        code, out, _ = run_cli(capsys, "truncate", "--config", str(cfg), "--n", "0")
        assert code == 0
        assert len(out.strip().splitlines()) == 2  # header plus single root

    def test_unknown_config_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("nonsense=1\n")
        code, _, err = run_cli(capsys, "truncate", "--config", str(cfg))
        assert code == 1
        assert "nonsense" in err

    def test_output_file_atomic_write(self, capsys, tmp_path):
        target = tmp_path / "out.csv"
        code, out, _ = run_cli(
            capsys, "truncate", "--n", "1", "--s", "0", "--output", str(target)
        )
        assert code == 0
        assert out == ""
        assert "theta_root" in target.read_text()
        assert not list(tmp_path.glob(".specurve-*"))

    def test_output_env_override(self, capsys, tmp_path, monkeypatch):
        target = tmp_path / "env.csv"
        monkeypatch.setenv("SPECURVE_OUTPUT", str(target))
        code, out, _ = run_cli(capsys, "truncate", "--n", "0", "--s", "0")
        assert code == 0
        assert out == ""
        assert target.exists()

    def test_determinism(self, capsys):
        outputs = []
        for _ in range(2):
            code, out, _ = run_cli(
                capsys, "figure", "--s", "0", "--nmax", "1", "--theta-step", "0.25"
            )
            assert code == 0
            outputs.append(out)
        assert outputs[0] == outputs[1]

    def test_no_command_prints_usage(self, capsys):
        code, _, err = run_cli(capsys)
        assert code == 1
        assert "usage" in err


def test_console_script_installed():
    out = subprocess.run(
        [sys.executable, "-m", "specurve.cli", "truncate", "--n", "0", "--s", "0"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert "theta_root" in out.stdout
