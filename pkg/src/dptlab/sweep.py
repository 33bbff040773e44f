"""Parameter sweeps driven by a plain ``key = value`` config file.

Config keys
-----------
experiment     one of EXPERIMENTS (required)
output         CSV path (required unless passed on the command line)
seed           integer, default 0
mode           float64 | rational, default float64
clamp          true | false, clamp closed-form bounds at 1
record_timing  true | false; when false runtime_ms is written as 0 so reruns are byte-identical
workers        worker processes, default 1
a, b           Coppersmith-Rivlin constants for the closed form, default 1
alpha          for ``dominance`` with ``D = auto``: D runs over 0..floor(alpha sqrt(kN))

Every other key must be a grid parameter of the chosen experiment.  Grid
values are comma-separated integers or floats; ``lo..hi`` is an inclusive
integer range.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

GLOBAL_KEYS = {"experiment", "output", "seed", "mode", "clamp", "record_timing", "workers", "a", "b", "alpha"}

EXPERIMENTS = {
    "dominance": ("N", "k", "D"),
    "lemma5": ("N", "k", "D", "C", "delta"),
    "classical-dp": ("n", "k", "T"),
    "lemma2": ("n", "k", "T"),
    "grover": ("n", "t", "j"),
    "symmetrize": ("n", "T", "program"),
}

# relative slack when a verdict compares a computed value with its comparator
VERDICT_SLACK = 1e-9


class ConfigError(ValueError):
    """Invalid sweep configuration (maps to exit code 2)."""


@dataclass
class SweepConfig:
    experiment: str
    grids: dict
    output: str | None = None
    seed: int = 0
    mode: str = "float64"
    clamp: bool = False
    record_timing: bool = False
    workers: int = 1
    a: float = 1.0
    b: float = 1.0
    alpha: float = 0.2

    def points(self) -> list[dict]:
        names = EXPERIMENTS[self.experiment]
        if self.experiment == "dominance" and self.grids.get("D") == "auto":
            out = []
            for N, k in itertools.product(self.grids["N"], self.grids["k"]):
                for D in range(int(self.alpha * math.sqrt(k * N)) + 1):
                    out.append({"N": N, "k": k, "D": D})
            return out
        return [dict(zip(names, combo)) for combo in itertools.product(*(self.grids[n] for n in names))]


def _parse_bool(key: str, text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {text!r}")


def _parse_scalar(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _parse_grid(key: str, text: str) -> list:
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            try:
                values.extend(range(int(lo), int(hi) + 1))
            except ValueError as exc:
                raise ConfigError(f"{key}: bad range {part!r}") from exc
        else:
            values.append(_parse_scalar(part))
    return values


def parse_config(text: str) -> SweepConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    exp = raw.pop("experiment", None)
    if exp not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {', '.join(EXPERIMENTS)}; got {exp!r}")
    names = EXPERIMENTS[exp]
    unknown = set(raw) - GLOBAL_KEYS - set(names)
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    cfg = SweepConfig(exp, {})
    try:
        if "output" in raw:
            cfg.output = raw["output"]
        if "seed" in raw:
            cfg.seed = int(raw["seed"])
        if "mode" in raw:
            if raw["mode"] not in ("float64", "rational"):
                raise ConfigError("mode must be float64 or rational")
            cfg.mode = raw["mode"]
        if "clamp" in raw:
            cfg.clamp = _parse_bool("clamp", raw["clamp"])
        if "record_timing" in raw:
            cfg.record_timing = _parse_bool("record_timing", raw["record_timing"])
        if "workers" in raw:
            cfg.workers = int(raw["workers"])
        for key in ("a", "b", "alpha"):
            if key in raw:
                setattr(cfg, key, float(raw[key]))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    for name in names:
        if name not in raw:
            raise ConfigError(f"missing grid {name!r}")
        if exp == "dominance" and name == "D" and raw[name].strip() == "auto":
            cfg.grids[name] = "auto"
            continue
        grid = _parse_grid(name, raw[name])
        if not grid:
            raise ConfigError(f"grid {name!r} is empty")
        cfg.grids[name] = grid
    if not cfg.points():
        raise ConfigError("the parameter grid is empty")
    return cfg


def load_config(path: str) -> SweepConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# experiments: each returns (primary, comparator, verdict rule) -------------------


def _leq(primary: float, comparator: float) -> str:
    return "pass" if primary <= comparator + VERDICT_SLACK * max(1.0, abs(comparator)) else "fail"


def _close(primary: float, comparator: float) -> str:
    return "pass" if abs(primary - comparator) <= VERDICT_SLACK * max(1.0, abs(comparator)) else "fail"


def _run_point(cfg: SweepConfig, p: dict) -> tuple[float, float, str]:
    exp = cfg.experiment
    if exp == "dominance":
        from .bounds import dominance_check

        rep = dominance_check(p["N"], p["k"], p["D"], cfg.a, cfg.b)
        bound = min(rep.bound, 1.0) if cfg.clamp else rep.bound
        return rep.sigma_star, bound, _leq(rep.sigma_star, bound)
    if exp == "lemma5":
        from .bounds import BoundParams, lemma5_bound
        from .extremal import ExtremalSpec, sigma_star

        bound = lemma5_bound(BoundParams(p["N"], p["k"], p["D"], p["C"], p["delta"], cfg.a, cfg.b), cfg.clamp)
        s = float(sigma_star(ExtremalSpec(p["N"], p["k"], p["D"], p["delta"]), cfg.mode))
        return s, bound, _leq(s, bound)
    if exp == "classical-dp":
        from .classical import dp_adaptive_kfold, suc_or

        v = dp_adaptive_kfold(p["n"], p["k"], p["T"])
        # trivial upper bound: every block solved with all T queries
        comp = suc_or(p["n"], min(p["n"], p["T"])) ** p["k"]
        return float(v), float(comp), _leq(float(v), float(comp))
    if exp == "lemma2":
        from .classical import lemma2_check

        lhs, rhs, _ = lemma2_check(p["n"], p["k"], p["T"])
        return float(lhs), float(rhs), _leq(float(lhs), float(rhs))
    if exp == "grover":
        import numpy as np

        from .quantum import grover, grover_closed_form

        rng = np.random.default_rng([cfg.seed, p["n"], p["t"], p["j"]])
        x = np.zeros(p["n"], dtype=np.uint8)
        x[rng.choice(p["n"], size=p["t"], replace=False)] = 1
        sim = grover(p["n"], x, p["j"])
        exact = grover_closed_form(p["n"], p["t"], p["j"])
        return sim, exact, _close(sim, exact)
    if exp == "symmetrize":
        from .quantum import random_program, symmetrize

        prof = symmetrize(random_program(p["n"], p["T"], cfg.seed * 1000 + p["program"]), p["n"])
        return prof.residual, 1e-8, _leq(prof.residual, 1e-8)
    raise ConfigError(f"unknown experiment {exp!r}")


def _timed(args) -> tuple:
    cfg, p = args
    start = time.perf_counter()
    try:
        primary, comparator, verdict = _run_point(cfg, p)
    except (ValueError, ArithmeticError):
        primary, comparator, verdict = math.nan, math.nan, "error"
    ms = (time.perf_counter() - start) * 1000 if cfg.record_timing else 0
    return primary, comparator, verdict, ms


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        v = float(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def run_sweep(cfg: SweepConfig) -> tuple[str, dict]:
    """Evaluate every grid point; return the CSV text and verdict counts."""
    points = cfg.points()
    jobs = [(cfg, p) for p in points]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_timed, jobs))  # map preserves grid order
    else:
        results = [_timed(j) for j in jobs]
    names = EXPERIMENTS[cfg.experiment]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["experiment", *names, "primary", "comparator", "ratio", "verdict", "runtime_ms"])
    counts = {"pass": 0, "fail": 0, "error": 0}
    for p, (primary, comparator, verdict, ms) in zip(points, results):
        if verdict == "error" or comparator == 0:
            ratio = math.nan if verdict == "error" else (0.0 if primary <= 0 else math.inf)
        else:
            ratio = primary / comparator
        counts[verdict] += 1
        writer.writerow([cfg.experiment, *(p[n] for n in names), _fmt(primary), _fmt(comparator), _fmt(ratio),
                         verdict, f"{ms:.3f}" if cfg.record_timing else "0"])
    return buf.getvalue(), counts


def verdict_from_row(row: dict) -> str:
    """Recompute a row's verdict from its own primary and comparator columns."""
    if row["verdict"] == "error":
        return "error"
    primary, comparator = float(row["primary"]), float(row["comparator"])
    if row["experiment"] == "grover":
        return _close(primary, comparator)
    return _leq(primary, comparator)
