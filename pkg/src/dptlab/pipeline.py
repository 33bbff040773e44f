"""End-to-end chains from an algorithm or protocol matrix to the polynomial bound."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import LP_SLACK, lemma5_best_C, razborov_error_bound
from .extremal import ExtremalSpec, sigma_star
from .lp import FLOAT64, RATIONAL
from .razborov import CMTable, cm_spectrum, intersection_matrix, truncate_protocol_polynomial

SCHEMA_VERSION = 1


def _num(v):
    if isinstance(v, Fraction):
        return {"fraction": str(v), "float": float(v)}
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


@dataclass
class PipelineReport:
    """Stage values plus the verdict of the final inequality.

    ``inputs`` holds everything needed to recompute the report from scratch;
    :func:`recheck` does exactly that.
    """

    kind: str
    inputs: dict
    stages: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    constants_source: str = "default a = b = 1"
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v for v in self.verdicts.values() if v is not None)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "kind": self.kind,
            "inputs": {k: _num(v) for k, v in self.inputs.items() if k != "P"},
            "stages": {k: _num(v) for k, v in self.stages.items()},
            "verdicts": dict(self.verdicts),
            "constants_source": self.constants_source,
            "notes": list(self.notes),
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def threshold_pipeline(n: int, k: int, T: int, a: float = 1.0, b: float = 1.0,
                       mode: str = FLOAT64, constants_source: str = "default a = b = 1") -> PipelineReport:
    """sigma*(n, k, 2T) from the LP next to the best-C closed-form bound (delta = 0)."""
    D = 2 * T
    if D > n:
        raise ValueError(f"degree 2T = {D} exceeds N = {n}")
    rep = PipelineReport("threshold", {"N": n, "k": k, "T": T, "a": a, "b": b, "mode": mode},
                         constants_source=constants_source)
    s = sigma_star(ExtremalSpec(n, k, D, 0), mode)
    rep.stages["D"] = D
    rep.stages["sigma_star"] = s
    if D < k:
        rep.stages["bound"] = 0.0
        rep.stages["C"] = None
        rep.notes.append("D < k: the polynomial vanishes identically")
        rep.verdicts["sigma_star<=bound"] = bool(s <= LP_SLACK)
    elif n <= 2 * k:
        rep.stages["bound"] = None
        rep.stages["C"] = None
        rep.notes.append("N <= 2k: no admissible C")
        rep.verdicts["sigma_star<=bound"] = None
    else:
        C, bound = lemma5_best_C(n, k, D, 0.0, a, b)
        rep.stages["C"] = C
        rep.stages["mu"] = 2 * C / (n - k - C)
        rep.stages["bound"] = bound
        rep.verdicts["sigma_star<=bound"] = bool(float(s) <= bound + LP_SLACK)
    return rep


def class_function_matrix(N: int, w: int, values) -> np.ndarray:
    """Matrix with entry values[|x & y|]; its profile P(i) equals values[i]."""
    inter = intersection_matrix(N, w)
    return np.asarray(values, dtype=float)[inter]


def low_rank_matrix(N: int, w: int, rank: int, seed: int) -> np.ndarray:
    """Random rank-``rank`` product clipped into [0, 1]."""
    rng = np.random.default_rng(seed)
    size = math.comb(N, w)
    A = rng.uniform(-1, 1, size=(size, rank))
    B = rng.uniform(-1, 1, size=(rank, size))
    return np.clip(0.5 + (A @ B) / (2 * rank), 0.0, 1.0)


def disjointness_pipeline(N: int, w: int, P, Q: int, d: int, k: int, a: float = 1.0, b: float = 1.0,
                          table: CMTable | None = None, constants_source: str = "default a = b = 1") -> PipelineReport:
    """Protocol matrix -> degree-d truncation -> polynomial bound with delta = measured error.

    The polynomial bound is applied on the intersection range {0..w}.  The
    final inequality is P(k) <= bound + delta, since the bound controls the
    truncation q and |P(k) - q(k)| <= delta.
    """
    P = np.asarray(P, dtype=float)
    rep = PipelineReport("disjointness", {"N": N, "w": w, "Q": Q, "d": d, "k": k, "a": a, "b": b, "P": P},
                         constants_source=constants_source)
    if table is None:
        table = cm_spectrum(N, w)
    dec = truncate_protocol_polynomial(P, table, d, Q)
    delta = float(np.abs(dec.P_values - dec.q_values).max())
    rep.stages["P_values"] = [float(v) for v in dec.P_values]
    rep.stages["q_values"] = [float(v) for v in dec.q_values]
    rep.stages["a_t"] = [float(v) for v in dec.a]
    rep.stages["delta_measured"] = delta
    rep.stages["delta_closed_form"] = razborov_error_bound(d, Q)
    rep.stages["tail_bound"] = dec.tail_bound
    rep.stages["trace_certificate"] = dec.certificate
    rep.verdicts["truncation<=tail_bound"] = dec.within_tail_bound
    if not dec.certificate:
        rep.notes.append("trace certificate fails for this Q; closed-form comparison skipped")
    if k > w:
        raise ValueError("need k <= w")
    zeros_ok = bool(np.all(np.abs(dec.P_values[:k]) <= 1e-12))
    rep.stages["forced_zeros_hold"] = zeros_ok
    if not zeros_ok:
        rep.notes.append("P(i) != 0 for some i < k: the synthetic matrix does not realize the threshold pattern")
    Pk = float(dec.P_values[k])
    rep.stages["P_k"] = Pk
    if d >= k and w > 2 * k:
        C, bound = lemma5_best_C(w, k, d, delta, a, b)
        rep.stages["C"] = C
        rep.stages["bound"] = bound
    elif d < k:
        # q has degree < k and |q| <= delta at k points: |q(k)| <= delta * k 2^(k-1)
        rep.stages["C"] = None
        rep.stages["bound"] = delta * k * 2 ** (k - 1)
        rep.notes.append("d < k: bound from Lagrange interpolation of the forced-zero values")
    else:
        rep.stages["C"] = None
        rep.stages["bound"] = 1 + delta
        rep.notes.append("w <= 2k: no admissible C; trivial bound 1 + delta used")
    rep.verdicts["P_k<=bound+delta"] = bool(Pk <= rep.stages["bound"] + delta + LP_SLACK)
    return rep


def recheck(report: PipelineReport) -> bool:
    """Recompute ``report`` from its raw inputs and compare every stage value exactly."""
    inp = report.inputs
    if report.kind == "threshold":
        fresh = threshold_pipeline(inp["N"], inp["k"], inp["T"], inp["a"], inp["b"], inp["mode"],
                                   report.constants_source)
    elif report.kind == "disjointness":
        fresh = disjointness_pipeline(inp["N"], inp["w"], inp["P"], inp["Q"], inp["d"], inp["k"],
                                      inp["a"], inp["b"], constants_source=report.constants_source)
    else:
        raise ValueError(f"unknown report kind {report.kind!r}")
    return fresh.stages == report.stages and fresh.verdicts == report.verdicts


def threshold_sweep(ks=range(1, 6), alpha: float = 0.2, a: float = 1.0, b: float = 1.0) -> list[dict]:
    """sigma* at N = 64k, D = floor(alpha sqrt(kN)), i.e. the regime of the polynomial bound."""
    out = []
    for k in ks:
        N = 64 * k
        D = int(alpha * math.sqrt(k * N))
        s = float(sigma_star(ExtremalSpec(N, k, D, 0)))
        out.append({"k": k, "N": N, "D": D, "sigma_star": s})
    return out


def log_slope(rows: list[dict]) -> float:
    """Least-squares slope of ln(sigma*) against k."""
    ks = np.array([r["k"] for r in rows], dtype=float)
    ys = np.log([r["sigma_star"] for r in rows])
    return float(np.polyfit(ks, ys, 1)[0])
