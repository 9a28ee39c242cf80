import json

import pytest

from l1conc.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, main
from l1conc.experiment import CSV_COLUMNS


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFalsifyCommand:
    def test_violated_exit_code(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        code, _, _ = run_cli(
            capsys, "falsify", "--seed", "1", "--bound", "agrawal",
            "--S", "50", "--n", "10000", "--delta", "0.05",
            "--trials", "1000", "--out", str(out),
        )
        assert code == EXIT_VIOLATED
        obj = json.loads(out.read_text())
        assert obj["rows"][0]["outcome"] == "Violated"

    def test_consistent_exit_code(self, capsys):
        code, stdout, _ = run_cli(
            capsys, "falsify", "--seed", "1", "--bound", "weissman-union",
            "--S", "2", "--n", "100", "--delta", "0.05", "--trials", "2000",
        )
        assert code == EXIT_OK
        assert json.loads(stdout)["rows"][0]["outcome"] == "Consistent"

    def test_missing_seed_is_usage_error(self, capsys):
        code, _, err = run_cli(
            capsys, "falsify", "--bound", "agrawal", "--S", "10",
            "--n", "100", "--delta", "0.05",
        )
        assert code == EXIT_USAGE
        assert "seed" in err


class TestOtherCommands:
    def test_asymptotic_mean_csv(self, capsys):
        code, stdout, _ = run_cli(
            capsys, "asymptotic-mean", "--seed", "4", "--S", "2,10",
            "--trials", "2000", "--format", "csv",
        )
        assert code == EXIT_OK
        lines = stdout.splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 3

    def test_tail_command(self, capsys):
        code, stdout, _ = run_cli(
            capsys, "tail", "--seed", "4", "--S", "3", "--n", "50",
            "--threshold", "0.2,0.4", "--trials", "2000",
        )
        assert code == EXIT_OK
        assert len(json.loads(stdout)["rows"]) == 2

    def test_quantiles_with_plot_out(self, capsys, tmp_path):
        plot = tmp_path / "curve.dat"
        code, _, _ = run_cli(
            capsys, "quantiles", "--seed", "4", "--family", "limit", "--S", "10",
            "--grid", "0:3:6", "--trials", "2000", "--out", str(tmp_path / "r.json"),
            "--plot-out", str(plot),
        )
        assert code == EXIT_OK
        assert plot.read_text().startswith("# threshold cdf cdf_low cdf_high")

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(
            "master_seed = 9\n[task]\nkind = falsify\nbound = agrawal\n"
            "S = 50\nn = 10000\ndelta = 0.05\ntrials = 1000\n"
        )
        code, stdout, _ = run_cli(capsys, "falsify", "--config", str(cfg))
        assert code == EXIT_VIOLATED

    def test_bad_config_field(self, capsys, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("master_seed = 9\n[task]\nkind = falsify\ndelta = 1.5\n")
        code, _, err = run_cli(capsys, "falsify", "--config", str(cfg))
        assert code == EXIT_USAGE
        assert "delta" in err


class TestReportCommand:
    def test_reemit_byte_identical(self, capsys, tmp_path):
        out = tmp_path / "r.json"
        run_cli(
            capsys, "asymptotic-mean", "--seed", "4", "--S", "5",
            "--trials", "1000", "--out", str(out),
        )
        code, stdout, _ = run_cli(capsys, "report", "--in", str(out), "--format", "json")
        assert code == EXIT_OK
        assert stdout.encode() == out.read_bytes()

    def test_reemit_csv(self, capsys, tmp_path):
        out = tmp_path / "r.json"
        run_cli(
            capsys, "asymptotic-mean", "--seed", "4", "--S", "5",
            "--trials", "1000", "--out", str(out),
        )
        code, stdout, _ = run_cli(capsys, "report", "--in", str(out), "--format", "csv")
        assert code == EXIT_OK
        assert stdout.splitlines()[0] == ",".join(CSV_COLUMNS)

    def test_missing_file_is_usage_error(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, "report", "--in", str(tmp_path / "nope.json"))
        assert code == EXIT_USAGE
