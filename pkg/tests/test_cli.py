"""Command-line interface: outputs, determinism, config echo, exit codes."""

import json
import math
import subprocess
import sys

import pytest

from stable_stein.cli import main

CLI = [sys.executable, "-m", "stable_stein.cli"]


def run_cli(*args):
    return subprocess.run(CLI + list(args), capture_output=True, text=True)


def parse_csv_block(text):
    rows = [line.split(",") for line in text.strip().splitlines() if line]
    return rows


class TestConstantsCommand:
    def test_table1_values(self):
        r = run_cli("constants", "--table", "1")
        assert r.returncode == 0
        rows = parse_csv_block(r.stdout)
        alphas = [float(v) for v in rows[0][1:]]
        vals = [float(v) for v in rows[1][1:]]
        assert alphas == [1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9]
        assert abs(vals[4] - 5.51) <= 0.01

    def test_table2_single_cell(self):
        r = run_cli("constants", "--table", "2", "--alpha-grid", "1.5",
                    "--gamma-grid", "0.5")
        rows = parse_csv_block(r.stdout)
        assert abs(float(rows[1][1]) - 18.12) <= 0.02

    def test_both_blocks(self):
        r = run_cli("constants")
        blocks = r.stdout.strip().split("\n\n")
        assert len(blocks) == 2
        t2 = parse_csv_block(blocks[1])
        assert len(t2) == 10 and len(t2[1]) == 10

    def test_empty_grid_usage_error(self):
        r = run_cli("constants", "--alpha-grid", "")
        assert r.returncode == 2


class TestTable3Command:
    def test_anchor_cells(self):
        r = run_cli("table3", "--n", "1000000")
        rows = parse_csv_block(r.stdout)
        grid = {(float(row[0]), j): float(v)
                for row in rows[1:] for j, v in enumerate(row[1:])}
        assert abs(grid[(0.1, 0)] - 9.906) <= 0.005
        assert abs(grid[(0.2, 1)] - 2.213) <= 0.005

    def test_layout(self):
        r = run_cli("table3")
        rows = parse_csv_block(r.stdout)
        assert rows[0][0] == "gamma"
        assert len(rows) == 10 and all(len(row) == 10 for row in rows)


class TestFigure1Command:
    def test_grid_shape(self):
        r = run_cli("figure1", "--n", "1000")
        rows = parse_csv_block(r.stdout)
        assert rows[0] == ["alpha", "gamma_star_case1", "gamma_star_case2",
                           "gamma_star_case3", "gamma_star_case4"]
        assert len(rows) == 100  # header + 99 alphas
        assert float(rows[1][0]) == 1.01 and float(rows[-1][0]) == 1.99


class TestBoundCommand:
    def test_json_report(self):
        r = run_cli("bound", "--spec", "pareto", "--alpha", "1.5",
                    "--gamma", "0.9", "--n", "1000000")
        assert r.returncode == 0
        obj = json.loads(r.stdout)
        assert obj["N"] == "inf"
        assert set(obj["terms"]) == {"discrepancy", "truncation", "N_term", "gamma_term"}
        # total for the plain power law at gamma = 0.9, n = 1e6
        from stable_stein.bounds import pareto_bound_closed

        assert obj["total"] == pytest.approx(pareto_bound_closed(1.5, 0.9, 10 ** 6))

    def test_numeric_failure_exit_code(self):
        # beta < 2 with N = inf is a domain failure -> exit 1 + JSON error
        r = run_cli("bound", "--spec", "modified-pareto", "--alpha", "1.5",
                    "--beta", "1.8", "--N", "inf")
        assert r.returncode == 1
        obj = json.loads(r.stdout)
        assert obj["error"] == "DomainError"

    def test_invalid_flag_usage_error(self):
        r = run_cli("bound", "--nonsense", "1")
        assert r.returncode == 2


class TestSimulateCommand:
    def test_deterministic_bytes(self):
        args = ("simulate", "--spec", "pareto", "--alpha", "1.5", "--n", "500",
                "--m", "1000", "--seed", "42")
        r1, r2 = run_cli(*args), run_cli(*args)
        assert r1.returncode == 0
        assert r1.stdout == r2.stdout

    def test_header_and_seed_column(self):
        r = run_cli("simulate", "--spec", "pareto", "--n", "200", "--m", "300",
                    "--seed", "9")
        rows = parse_csv_block(r.stdout)
        assert rows[0] == ["n", "m", "estimator", "w1", "std_error",
                           "bias_floor", "bound_total", "seed"]
        assert rows[1][-1] == "9"

    def test_stdout_machine_clean(self):
        r = run_cli("simulate", "--spec", "pareto", "--n", "200", "--m", "300")
        for line in r.stdout.splitlines():
            assert not line.startswith("CONFIG")
        assert "CONFIG" in r.stderr


class TestConfigEcho:
    def test_round_trip_bytes(self, tmp_path):
        args = ("simulate", "--spec", "pareto", "--alpha", "1.5", "--n", "400",
                "--m", "500", "--seed", "11")
        r1 = run_cli(*args)
        cfg_line = [l for l in r1.stderr.splitlines() if l.startswith("CONFIG ")][0]
        cfg = tmp_path / "cfg.json"
        cfg.write_text(cfg_line[len("CONFIG "):])
        r2 = run_cli("--config", str(cfg))
        assert r2.returncode == 0
        assert r2.stdout == r1.stdout

    def test_flags_override_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"command": "density", "alpha": 1.0,
                                   "xmax": 2.0, "step": 1.0}))
        r = run_cli("density", "--config", str(cfg), "--xmax", "1.0")
        rows = parse_csv_block(r.stdout)
        assert [row[0] for row in rows[1:]] == ["-1", "0", "1"]


class TestDensityCommand:
    def test_cauchy_values(self):
        r = run_cli("density", "--alpha", "1", "--xmax", "5", "--step", "1")
        rows = parse_csv_block(r.stdout)
        assert rows[0] == ["x", "p", "cdf"]
        for row in rows[1:]:
            x, p = float(row[0]), float(row[1])
            assert p == pytest.approx(1.0 / (math.pi * (1.0 + x * x)), rel=1e-9)

    def test_csv_round_trip_idempotent(self):
        r = run_cli("density", "--alpha", "1.5", "--xmax", "2", "--step", "0.5")
        rows = parse_csv_block(r.stdout)
        rewritten = "\n".join(
            ",".join(f"{float(v):.10g}" if i_r > 0 else v for v in row)
            for i_r, row in enumerate(rows)
        ) + "\n"
        assert rewritten == r.stdout


class TestOtherCommands:
    def test_rate_order_json(self):
        r = run_cli("rate-order", "--spec", "hall", "--alpha", "1.5",
                    "--A", "0.6", "--c", "0.2")
        obj = json.loads(r.stdout)
        assert obj["exponent"] == pytest.approx(-0.1 / 0.7)
        assert obj["classified"] is True

    def test_an_solver(self):
        r = run_cli("an-solver", "--K0", "2", "--x0", "3", "--alpha", "1.5",
                    "--beta", "0", "--n", "1000000")
        obj = json.loads(r.stdout)
        assert obj["A_n"] == pytest.approx((2.0 * 10 ** 6) ** (1 / 1.5))
        assert obj["residual"] <= 1e-10

    def test_out_file(self, tmp_path):
        out = tmp_path / "t1.csv"
        r = run_cli("constants", "--table", "1", "--out", str(out))
        assert r.returncode == 0 and r.stdout == ""
        assert out.read_text().startswith("alpha,")

    def test_rate_fit_json_smoke(self):
        r = run_cli("rate-fit", "--spec", "pareto", "--alpha", "1.5",
                    "--n-grid", "100,200,400,800", "--m", "300", "--seed", "1")
        obj = json.loads(r.stdout)
        assert "slope" in obj and len(obj["points"]) == 4
        assert obj["target_exponent"] == pytest.approx(-1.0 / 3.0)


class TestInProcessMain:
    def test_main_returns_zero(self, capsys):
        rc = main(["constants", "--table", "1"])
        assert rc == 0
        out = capsys.readouterr().out
        assert out.startswith("alpha,")
