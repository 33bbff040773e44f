import json
import subprocess
import sys

import pytest

from dptlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


class TestExamples:
    def test_lemma5(self, capsys):
        code, out, _ = run(capsys, "bounds", "lemma5", "--N", "1000", "--k", "20", "--D", "25", "--C", "148")
        assert code == 0 and float(out) == pytest.approx(4.0e-14, rel=0.01)

    def test_suc(self, capsys):
        assert run(capsys, "classical", "suc", "--n", "4", "--t", "2")[:2] == (0, "3/4")

    def test_sigma_star_zero(self, capsys):
        assert run(capsys, "lp", "sigma-star", "--N", "10", "--k", "1", "--D", "0")[:2] == (0, "0")

    def test_sigma_star_rational(self, capsys):
        assert run(capsys, "lp", "sigma-star", "--N", "16", "--k", "2", "--D", "5", "--mode", "rational")[1] == "1154/3575"

    def test_json_flag(self, capsys):
        code, out, _ = run(capsys, "classical", "dp", "--n", "2", "--k", "2", "--T", "2", "--json")
        assert code == 0 and json.loads(out)["value"] == "9/16"

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "spectrum.json"
        code, out, _ = run(capsys, "razborov", "spectrum", "--N", "8", "--w", "2", "--out", str(path))
        assert code == 0 and json.loads(path.read_text())["multiplicities"] == [1, 7, 20]

    @pytest.mark.parametrize("argv", [
        ["quantum", "grover", "--n", "16", "--j", "3"],
        ["quantum", "exact-search", "--n", "16", "--i", "5"],
        ["quantum", "kfold", "--n", "8", "--k", "2", "--iters", "2"],
        ["quantum", "symmetrize", "--n", "4", "--T", "2"],
        ["quantum", "reduce-search", "--n", "4", "--k", "4", "--weight", "1", "--trials", "20"],
        ["quantum", "reduce-or", "--n", "8", "--s", "1", "--k", "2", "--instances", "10"],
        ["razborov", "commute", "--N", "8", "--w", "2"],
        ["razborov", "decay", "--N", "8", "--w", "2"],
        ["razborov", "truncate", "--N", "8", "--w", "2", "--d", "1", "--Q", "2", "--profile", "0,0.3,0.5"],
        ["pipeline", "threshold", "--n", "64", "--k", "2", "--T", "2"],
        ["pipeline", "disjointness", "--N", "8", "--w", "2", "--Q", "2", "--d", "1", "--k", "1", "--profile", "0,3/10,1/2"],
        ["bounds", "best-c", "--N", "100", "--k", "5", "--D", "10"],
        ["bounds", "tradeoff", "--problem", "sorting", "--N", "100", "--S", "4"],
        ["bounds", "razborov-error", "--d", "8", "--Q", "1"],
        ["bounds", "theorem6", "--alpha", "0.05", "--gamma", "1"],
        ["lp", "adeg", "--n", "8"],
        ["lp", "cr-probe", "--n", "8", "--d", "1"],
        ["classical", "parity", "--n", "2", "--k", "2", "--T", "2"],
        ["classical", "oracle", "--n", "2", "--k", "2", "--T", "2"],
        ["accept", "--only", "8"],
    ])
    def test_subcommands_succeed(self, capsys, argv):
        assert run(capsys, *argv)[0] == 0


class TestExitCodes:
    def test_invalid_input_is_2(self, capsys):
        code, _, err = run(capsys, "bounds", "lemma5", "--N", "10", "--k", "5", "--D", "5", "--C", "8")
        assert code == 2 and "error" in err

    def test_resource_guard_is_2(self, capsys):
        assert run(capsys, "classical", "dp", "--n", "9", "--k", "9", "--T", "1")[0] == 2

    def test_argparse_error_is_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["bounds", "lemma5", "--N", "10"])
        assert exc.value.code == 2

    def test_violation_is_1(self, capsys):
        code, _, err = run(capsys, "lp", "sigma-star", "--N", "32", "--k", "1", "--D", "1", "--check", "--a", "1e-6")
        assert code == 1 and "invariant" in err

    def test_accept_reports_failing_criterion(self, capsys):
        code, out, _ = run(capsys, "accept", "--only", "4")
        assert code == 1 and "[FAIL] criterion  4" in out


class TestSweepCommand:
    CONFIG = "experiment = dominance\nN = 32\nk = 1..2\nD = auto\n"

    def test_byte_identical_reruns(self, capsys, tmp_path):
        cfg = tmp_path / "dom.cfg"
        cfg.write_text(self.CONFIG)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(capsys, "sweep", "--config", str(cfg), "--out", str(a), "--seed", "4")[0] == 0
        assert run(capsys, "sweep", "--config", str(cfg), "--out", str(b), "--seed", "4", "--workers", "2")[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_empty_grid_is_2(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("experiment = dominance\nN =\nk = 1\nD = 1\n")
        assert run(capsys, "sweep", "--config", str(cfg), "--out", str(tmp_path / "x.csv"))[0] == 2

    def test_failing_rows_exit_1(self, capsys, tmp_path):
        cfg = tmp_path / "fail.cfg"
        cfg.write_text("experiment = dominance\nN = 32\nk = 1\nD = 1\na = 1e-6\n")
        assert run(capsys, "sweep", "--config", str(cfg), "--out", str(tmp_path / "f.csv"))[0] == 1

    def test_missing_output_is_2(self, capsys, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(self.CONFIG)
        assert run(capsys, "sweep", "--config", str(cfg))[0] == 2


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "dptlab", "classical", "suc", "--n", "4", "--t", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "3/4"
