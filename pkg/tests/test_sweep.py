import csv
import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dptlab.sweep import ConfigError, parse_config, run_sweep, verdict_from_row

DOMINANCE = """\
# acceptance-style grid, small
experiment = dominance
N = 32, 64
k = 1..2
D = auto
"""


class TestConfig:
    def test_parse(self):
        cfg = parse_config(DOMINANCE)
        assert cfg.grids == {"N": [32, 64], "k": [1, 2], "D": "auto"}
        assert [tuple(p.values()) for p in cfg.points()][:3] == [(32, 1, 0), (32, 1, 1), (32, 2, 0)]

    def test_cartesian_product(self):
        cfg = parse_config("experiment = grover\nn = 4, 16\nt = 1\nj = 0..2\n")
        assert len(cfg.points()) == 6

    @pytest.mark.parametrize("text", [
        "experiment = grover\nn =\nt = 1\nj = 1",
        "experiment = grover\nn = 4\nt = 1\nj = 1\ncolour = red",
        "experiment = nothing",
        "experiment = grover\nn = 4\nt = 1",
        "experiment = grover\nn = 4\nn = 8\nt = 1\nj = 1",
        "experiment = grover\nn = 4\nt = 1\nj = 1\nmode = quad",
        "experiment = grover\nn = 4\nt = 1\nj = 1\nworkers = 0",
        "experiment = grover\nn = 4\nt = 1\nj = 1\nclamp = maybe",
        "experiment grover",
    ])
    def test_rejected(self, text):
        with pytest.raises(ConfigError):
            parse_config(text)

    @given(st.lists(st.integers(-50, 50), min_size=1, max_size=6))
    def test_grid_values_round_trip(self, values):
        text = "experiment = lemma2\nn = " + ", ".join(map(str, values)) + "\nk = 1\nT = 0\n"
        assert parse_config(text).grids["n"] == values


class TestRun:
    def test_columns_and_verdicts(self):
        text, counts = run_sweep(parse_config(DOMINANCE))
        rows = list(csv.DictReader(io.StringIO(text)))
        assert list(rows[0]) == ["experiment", "N", "k", "D", "primary", "comparator", "ratio", "verdict", "runtime_ms"]
        assert counts["fail"] == 0 and counts["pass"] == len(rows)
        for row in rows:
            assert verdict_from_row(row) == row["verdict"]
            assert row["runtime_ms"] == "0"

    def test_parallel_output_identical(self):
        cfg = parse_config(DOMINANCE)
        serial, _ = run_sweep(cfg)
        cfg.workers = 3
        assert run_sweep(cfg)[0] == serial

    def test_error_rows(self):
        text, counts = run_sweep(parse_config("experiment = lemma2\nn = 2\nk = 2\nT = 9\n"))
        assert counts["error"] == 1
        assert text.strip().endswith("error,0")

    def test_failing_rows_counted(self):
        text, counts = run_sweep(parse_config("experiment = dominance\nN = 32\nk = 1\nD = 1\na = 1e-6\n"))
        assert counts["fail"] == 1

    def test_timing_recorded_on_request(self):
        text, _ = run_sweep(parse_config("experiment = grover\nn = 4\nt = 1\nj = 1\nrecord_timing = true\n"))
        assert next(csv.DictReader(io.StringIO(text)))["runtime_ms"] != "0"
