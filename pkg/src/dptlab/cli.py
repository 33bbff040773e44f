"""Command-line front end.

Exit codes: 0 success, 1 invariant violation, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import acceptance, bounds, classical, extremal, pipeline, quantum, razborov, sweep

OK, VIOLATION, INVALID = 0, 1, 2


class Outcome:
    def __init__(self, summary: str, data: dict, code: int = OK, text: str | None = None):
        self.summary, self.data, self.code = summary, data, code
        self.text = text  # payload for --out when it is not the JSON data


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _floats(text: str) -> list[float]:
    return [float(Fraction(t)) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


# bounds --------------------------------------------------------------------


def cmd_bounds_lemma5(a):
    p = bounds.BoundParams(a.N, a.k, a.D, a.C, a.delta, a.a, a.b)
    v = bounds.lemma5_bound(p, a.clamp)
    return Outcome(_fmt(v), {"bound": v, "mu": p.mu})


def cmd_bounds_best_c(a):
    C, v = bounds.lemma5_best_C(a.N, a.k, a.D, a.delta, a.a, a.b)
    return Outcome(f"C={C} bound={_fmt(v)}", {"C": C, "bound": v})


def cmd_bounds_theorem6(a):
    e = bounds.theorem6_exponent(a.alpha, a.gamma, a.b)
    return Outcome(f"{_fmt(e)} ({'decay holds' if e < 0 else 'no conclusion'})", {"exponent": e, "negative": e < 0})


def cmd_bounds_razborov_error(a):
    v = bounds.razborov_error_bound(a.d, a.Q)
    return Outcome(_fmt(v), {"error_bound": v})


def cmd_bounds_tradeoff(a):
    v = bounds.tradeoff_bound(bounds.TradeoffQuery(a.problem, a.N, a.S, a.constant))
    data = {"problem": a.problem, "bound": v}
    if a.problem == "mv-comm":
        data["upper"] = bounds.comm_upper_bound(a.N, a.S, a.constant)
    return Outcome(_fmt(v), data)


# lp ------------------------------------------------------------------------


def cmd_lp_sigma_star(a):
    spec = extremal.ExtremalSpec(a.N, a.k, a.D, Fraction(a.delta) if a.mode == "rational" else a.delta)
    v = extremal.sigma_star(spec, a.mode, a.basis)
    data = {"sigma_star": v, "N": a.N, "k": a.k, "D": a.D, "delta": a.delta}
    code = OK
    if a.check:
        if a.delta:
            raise ValueError("--check compares against the delta = 0 closed form")
        rep = bounds.dominance_check(a.N, a.k, a.D, a.a, a.b)
        data.update(bound=rep.bound, best_C=rep.best_C, passed=rep.passed)
        code = OK if rep.passed else VIOLATION
    return Outcome(_fmt(v), data, code)


def cmd_lp_adeg(a):
    eps = Fraction(a.eps)
    d = extremal.approx_degree(a.n, eps, a.mode)
    return Outcome(str(d), {"n": a.n, "eps": str(eps), "approx_degree": d})


def cmd_lp_cheb_extremal(a):
    lp_val, cheb = extremal.chebyshev_extremality_check(a.d, a.mu, a.grid)
    return Outcome(f"lp={_fmt(lp_val)} T_d(1+mu)={_fmt(cheb)}", {"lp": lp_val, "chebyshev": cheb})


def cmd_lp_cr_probe(a):
    r = extremal.cr_probe(a.n, a.d, a.samples)
    return Outcome(f"ratio={_fmt(r.worst_ratio)} at x={_fmt(r.argmax)}",
                   {"worst_ratio": r.worst_ratio, "argmax": r.argmax, "peak": r.peak,
                    "witness_chebyshev_coeffs": list(r.witness.coeffs)})


# classical -----------------------------------------------------------------


def cmd_classical_suc(a):
    v = classical.suc_or(a.n, a.t)
    return Outcome(str(v), {"success": v})


def cmd_classical_dp(a):
    if a.budgets:
        b = _ints(a.budgets)
        v = classical.dp_nonadaptive_kfold(a.n, a.k, b)
    else:
        v = classical.dp_adaptive_kfold(a.n, a.k, a.T)
    return Outcome(str(v), {"value": v, "float": float(v)})


def cmd_classical_oracle(a):
    v = classical.enumerate_trees_oracle(a.n, a.k, a.T)
    dp = classical.dp_adaptive_kfold(a.n, a.k, a.T)
    return Outcome(str(v), {"oracle": v, "dp": dp, "agree": v == dp}, OK if v == dp else VIOLATION)


def cmd_classical_parity(a):
    v = classical.dp_parity_advantage(a.n, a.k, a.T)
    return Outcome(str(v), {"advantage": v, "float": float(v)})


def cmd_classical_hard_matrix(a):
    A = classical.generate_hard_matrix(a.N, a.k, a.seed)
    data = {"N": a.N, "k": a.k, "seed": a.seed}
    code = OK
    summary = f"generated {a.N}x{a.N} matrix, {a.N // (2 * a.k)} ones per row"
    if a.verify:
        rep = classical.verify_unique_ones(A, a.k, samples=a.samples, seed=a.seed)
        data.update(checked=rep.subsets_checked, exhaustive=rep.exhaustive, failing=rep.failing_subsets,
                    failure_rate=rep.failure_rate, worst_subset=list(rep.worst_subset))
        summary += f"; {rep.failing_subsets}/{rep.subsets_checked} failing subsets ({'exhaustive' if rep.exhaustive else 'sampled'})"
        code = OK if rep.passed else VIOLATION
    return Outcome(summary, data, code, text=A.dumps())


# quantum -------------------------------------------------------------------


def _planted(n: int, positions: str | None, t: int, seed: int) -> np.ndarray:
    x = np.zeros(n, dtype=np.uint8)
    if positions:
        x[_ints(positions)] = 1
    else:
        x[np.random.default_rng(seed).choice(n, size=t, replace=False)] = 1
    return x


def cmd_quantum_grover(a):
    x = _planted(a.n, a.positions, a.t, a.seed)
    sim = quantum.grover(a.n, x, a.j)
    closed = quantum.grover_closed_form(a.n, int(x.sum()), a.j)
    return Outcome(f"simulated={_fmt(sim)} closed_form={_fmt(closed)}", {"simulated": sim, "closed_form": closed})


def cmd_quantum_exact_search(a):
    x = np.zeros(a.n, dtype=np.uint8)
    if a.i is not None:
        x[a.i] = 1
    r = quantum.exact_search(a.n, x, a.seed)
    return Outcome(f"found={r.found} queries={r.queries} success={_fmt(r.success_probability)}",
                   {"found": r.found, "queries": r.queries, "success_probability": r.success_probability})


def cmd_quantum_kfold(a):
    rng = np.random.default_rng(a.seed)
    xs = []
    for _ in range(a.k):
        x = np.zeros(a.n, dtype=np.uint8)
        x[rng.integers(a.n)] = 1
        xs.append(x)
    v = quantum.kfold_grover(a.n, a.k, xs, a.iters)
    single = quantum.grover_closed_form(a.n, 1, a.iters)
    return Outcome(_fmt(v), {"joint_success": v, "single_block": single, "product": single ** a.k})


def cmd_quantum_symmetrize(a):
    if a.program:
        prog = quantum.QueryAlgorithm.load(a.program)
        n = prog.N
    else:
        n = a.n
        prog = quantum.random_program(n, a.T, a.seed)
    prof = quantum.symmetrize(prog, n)
    return Outcome(f"degree={prof.degree} residual={prof.residual:.3e}",
                   {"values": prof.values, "degree": prof.degree, "residual": prof.residual},
                   OK if prof.residual <= 1e-8 else VIOLATION)


def cmd_quantum_reduce_search(a):
    A = quantum.KFoldExactSearch(a.n, a.k)
    N = a.n * a.k
    accepts = 0
    for trial in range(a.trials):
        rng = np.random.default_rng([a.seed, trial])
        x = np.zeros(N, dtype=np.uint8)
        x[rng.choice(N, size=a.weight, replace=False)] = 1
        accepts += quantum.search_to_threshold(A, N, a.k, x, rng_seed=[a.seed, trial]).accept
    code = VIOLATION if 2 * a.weight < a.k and accepts else OK
    return Outcome(f"accepted {accepts}/{a.trials}", {"accepts": accepts, "trials": a.trials, "weight": a.weight}, code)


def cmd_quantum_reduce_or(a):
    A = quantum.PerfectOr(a.cost) if a.sigma >= 1 else quantum.NoisyOr(a.cost, a.sigma)
    misses = 0
    queries = []
    for inst in range(a.instances):
        rng = np.random.default_rng([a.seed, inst])
        xs, planted = [], []
        for _ in range(a.k):
            x = np.zeros(a.n, dtype=np.uint8)
            pos = int(rng.integers(a.n))
            x[pos] = 1
            xs.append(x)
            planted.append(pos)
        r = quantum.or_to_search(A, a.s, xs, rng_seed=[a.seed, inst])
        misses += r.positions != planted
        queries.append(r.queries)
    code = VIOLATION if a.sigma >= 1 and misses else OK
    return Outcome(f"recovered {a.instances - misses}/{a.instances}",
                   {"misses": misses, "queries": sorted(set(queries))}, code)


# razborov ------------------------------------------------------------------


def cmd_razborov_mu(a):
    m = razborov.build_mu(a.N, a.w, a.i)
    nnz = int(np.count_nonzero(m.entries))
    text = "\n".join(" ".join(f"{v:.17g}" for v in row) for row in m.entries) + "\n"
    return Outcome(f"{m.entries.shape[0]}x{m.entries.shape[1]} nonzeros={nnz} entry={m.weight}",
                   {"nonzeros": nnz, "entry": m.weight}, text=text)


def cmd_razborov_commute(a):
    r = razborov.check_commutation(a.N, a.w)
    return Outcome(f"max residual {r:.3e}", {"residual": r}, OK if r <= 1e-10 else VIOLATION)


def cmd_razborov_spectrum(a):
    t = razborov.cm_spectrum(a.N, a.w)
    return Outcome(f"multiplicities {t.multiplicities}", {"multiplicities": t.multiplicities, "lambda": t.lam,
                                                         "fits": razborov.fit_report(t)}, text=t.to_json())


def cmd_razborov_decay(a):
    rep = razborov.decay_check(razborov.cm_spectrum(a.N, a.w))
    lines = ["i,t,abs_lambda,bound,ok"] + [f"{r['i']},{r['t']},{abs(r['lambda']):.6e},{r['bound']:.6e},{r['ok']}"
                                          for r in rep.rows]
    return Outcome(f"{len(rep.rows)} rows, {len(rep.violations)} above bound", {"rows": rep.rows},
                   text="\n".join(lines) + "\n")


def _protocol_matrix(a) -> np.ndarray:
    if a.profile:
        return pipeline.class_function_matrix(a.N, a.w, _floats(a.profile))
    if a.matrix:
        return np.loadtxt(a.matrix, ndmin=2)
    return pipeline.low_rank_matrix(a.N, a.w, a.rank, a.seed)


def cmd_razborov_truncate(a):
    table = razborov.cm_spectrum(a.N, a.w)
    dec = razborov.truncate_protocol_polynomial(_protocol_matrix(a), table, a.d, a.Q)
    return Outcome(f"max error {dec.max_error:.3e} tail bound {dec.tail_bound:.3e}",
                   {"a": dec.a, "P": dec.P_values, "q": dec.q_values, "max_error": dec.max_error,
                    "tail_bound": dec.tail_bound, "certificate": dec.certificate, "closed_form": dec.closed_form},
                   OK if dec.within_tail_bound else VIOLATION)


# pipeline / sweep / accept --------------------------------------------------


def cmd_pipeline_threshold(a):
    rep = pipeline.threshold_pipeline(a.n, a.k, a.T, a.a, a.b, a.mode)
    return Outcome(f"sigma*={_fmt(rep.stages['sigma_star'])} bound={_fmt(rep.stages['bound'])} "
                   f"{'pass' if rep.passed else 'FAIL'}", json.loads(rep.to_json()),
                   OK if rep.passed else VIOLATION, text=rep.to_json())


def cmd_pipeline_disjointness(a):
    rep = pipeline.disjointness_pipeline(a.N, a.w, _protocol_matrix(a), a.Q, a.d, a.k, a.a, a.b)
    return Outcome(f"P(k)={_fmt(rep.stages['P_k'])} bound={_fmt(rep.stages['bound'])} "
                   f"delta={_fmt(rep.stages['delta_measured'])} {'pass' if rep.passed else 'FAIL'}",
                   json.loads(rep.to_json()), OK if rep.passed else VIOLATION, text=rep.to_json())


def cmd_sweep(a):
    cfg = sweep.load_config(a.config)
    if a.workers:
        cfg.workers = a.workers
    if a.seed is not None:
        cfg.seed = a.seed
    out = a.out or cfg.output
    if out is None:
        raise sweep.ConfigError("no output path (set 'output' in the config or pass --out)")
    text, counts = sweep.run_sweep(cfg)
    Path(out).write_text(text, encoding="utf-8")
    code = VIOLATION if counts["fail"] or counts["error"] else OK
    a.out = None  # already written
    return Outcome(f"{sum(counts.values())} rows: {counts['pass']} pass, {counts['fail']} fail, "
                   f"{counts['error']} error -> {out}", counts, code)


def cmd_accept(a):
    only = set(_ints(a.only)) if a.only else None
    results = acceptance.run_all(only)
    lines = [r.line() for r in results]
    for line in lines:
        print(line)
    failed = [r.number for r in results if not r.passed]
    data = {"results": [{"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail,
                         "seconds": round(r.seconds, 3)} for r in results]}
    return Outcome(f"{len(results) - len(failed)}/{len(results)} criteria pass; failing: {failed or 'none'}",
                   data, VIOLATION if failed else OK, text="\n".join(lines) + "\n")


# parser --------------------------------------------------------------------


def _global_flags(defaults: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    sup = {} if defaults else {"default": argparse.SUPPRESS}
    p.add_argument("--seed", type=int, **({"default": None} if defaults else sup), help="random seed")
    p.add_argument("--out", **({"default": None} if defaults else sup), help="write the result to this file")
    p.add_argument("--json", action="store_true", **({"default": False} if defaults else sup),
                   help="print the result as JSON")
    p.add_argument("--workers", type=int, **({"default": None} if defaults else sup), help="worker processes")
    return p


def _consts(p):
    p.add_argument("--a", type=float, default=1.0, help="Coppersmith-Rivlin constant a")
    p.add_argument("--b", type=float, default=1.0, help="Coppersmith-Rivlin constant b")


def _matrix_source(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--profile", help="comma-separated P(0..w); builds the matching class-function matrix")
    g.add_argument("--matrix", help="whitespace-separated matrix file")
    p.add_argument("--rank", type=int, default=2, help="rank of the random matrix when no source is given")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dptlab", parents=[_global_flags(True)],
                                     description="Direct product theorem lab: exact bounds, LPs, simulations.")
    sub = parser.add_subparsers(dest="group", required=True)
    leaf_flags = _global_flags(False)

    def group(name, help_):
        g = sub.add_parser(name, help=help_)
        return g.add_subparsers(dest="cmd", required=True)

    def leaf(subs, name, fn, help_):
        p = subs.add_parser(name, help=help_, parents=[leaf_flags])
        p.set_defaults(fn=fn)
        return p

    g = group("bounds", "closed-form bound calculators")
    p = leaf(g, "lemma5", cmd_bounds_lemma5, "polynomial bound at a given C")
    for f in ("N", "k", "D", "C"):
        p.add_argument(f"--{f}", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--clamp", action="store_true")
    _consts(p)
    p = leaf(g, "best-c", cmd_bounds_best_c, "minimize the bound over C")
    for f in ("N", "k", "D"):
        p.add_argument(f"--{f}", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.0)
    _consts(p)
    p = leaf(g, "theorem6", cmd_bounds_theorem6, "sign of the decay exponent")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--b", type=float, default=1.0)
    p = leaf(g, "razborov-error", cmd_bounds_razborov_error, "truncation error 2^(-d/4+2Q)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--Q", type=int, required=True)
    p = leaf(g, "tradeoff", cmd_bounds_tradeoff, "time-space or communication-space tradeoff")
    p.add_argument("--problem", choices=bounds.TRADEOFF_PROBLEMS, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--S", type=float, required=True)
    p.add_argument("--constant", type=float, default=1.0)

    g = group("lp", "extremal-polynomial linear programs")
    p = leaf(g, "sigma-star", cmd_lp_sigma_star, "optimal p(k) under the box constraints")
    for f in ("N", "k", "D"):
        p.add_argument(f"--{f}", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--mode", choices=("float64", "rational"), default="float64")
    p.add_argument("--basis", choices=("chebyshev", "monomial"), default="chebyshev")
    p.add_argument("--check", action="store_true", help="compare with the closed form (exit 1 if above it)")
    _consts(p)
    p = leaf(g, "adeg", cmd_lp_adeg, "approximate degree of OR_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", default="1/3")
    p.add_argument("--mode", choices=("float64", "rational"), default="float64")
    p = leaf(g, "cheb-extremal", cmd_lp_cheb_extremal, "LP growth vs T_d(1+mu)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--grid", type=int, default=512)
    p = leaf(g, "cr-probe", cmd_lp_cr_probe, "empirical Coppersmith-Rivlin constant")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--samples", type=int)

    g = group("classical", "exact classical query bounds")
    p = leaf(g, "suc", cmd_classical_suc, "success of t queries for OR_n under nu")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    for name, fn, help_ in (("dp", cmd_classical_dp, "optimal k-fold success (adaptive DP)"),
                            ("oracle", cmd_classical_oracle, "brute-force decision-tree optimum"),
                            ("parity", cmd_classical_parity, "optimal parity advantage")):
        p = leaf(g, name, fn, help_)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--T", type=int, default=0)
        if name == "dp":
            p.add_argument("--budgets", help="comma-separated per-block budgets (non-adaptive model)")
    p = leaf(g, "hard-matrix", cmd_classical_hard_matrix, "random matrix with N/(2k) ones per row")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--samples", type=int, default=100_000)

    g = group("quantum", "statevector simulations")
    p = leaf(g, "grover", cmd_quantum_grover, "Grover success vs closed form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--positions", help="comma-separated marked indices")
    p = leaf(g, "exact-search", cmd_quantum_exact_search, "exact search with one verification query")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, help="marked index (omit for the all-zero input)")
    p = leaf(g, "kfold", cmd_quantum_kfold, "independent Grover on k blocks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--iters", type=int, required=True)
    p = leaf(g, "symmetrize", cmd_quantum_symmetrize, "weight-class profile and degree-2T fit")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--T", type=int, default=1)
    p.add_argument("--program", help="program file (default: seeded random program)")
    p = leaf(g, "reduce-search", cmd_quantum_reduce_search, "k-threshold from k-fold search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p = leaf(g, "reduce-or", cmd_quantum_reduce_or, "k-fold search from k-fold OR")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--cost", type=int, default=1)
    p.add_argument("--sigma", type=float, default=1.0, help="success of the OR algorithm (1 = perfect)")

    g = group("razborov", "combinatorial matrices and truncation")
    for name, fn, help_ in (("mu", cmd_razborov_mu, "build mu_i"), ("commute", cmd_razborov_commute, "commutation residual"),
                            ("spectrum", cmd_razborov_spectrum, "labelled common eigenspaces"),
                            ("decay", cmd_razborov_decay, "|lambda_it| vs 2^(-t/4)/C(N,w)"),
                            ("truncate", cmd_razborov_truncate, "degree-d truncation of a protocol matrix")):
        p = leaf(g, name, fn, help_)
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--w", type=int, required=True)
        if name == "mu":
            p.add_argument("--i", type=int, required=True)
        if name == "truncate":
            p.add_argument("--d", type=int, required=True)
            p.add_argument("--Q", type=int, required=True)
            _matrix_source(p)

    g = group("pipeline", "end-to-end bound chains")
    p = leaf(g, "threshold", cmd_pipeline_threshold, "sigma* next to the closed form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--mode", choices=("float64", "rational"), default="float64")
    _consts(p)
    p = leaf(g, "disjointness", cmd_pipeline_disjointness, "protocol matrix to polynomial bound")
    for f in ("N", "w", "Q", "d", "k"):
        p.add_argument(f"--{f}", type=int, required=True)
    _matrix_source(p)
    _consts(p)

    p = sub.add_parser("sweep", help="parameter sweep from a config file", parents=[leaf_flags])
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_sweep)
    p = sub.add_parser("accept", help="run the acceptance suite", parents=[leaf_flags])
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(fn=cmd_accept)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None and getattr(args, "fn", None) is not cmd_sweep:
        args.seed = 0
    try:
        outcome = args.fn(args)
    except (razborov.LabelingError, quantum.SimulationError) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return VIOLATION
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    data = _jsonable(outcome.data)
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(outcome.summary)
    if args.out:
        payload = outcome.text if outcome.text is not None else json.dumps(data, indent=2, sort_keys=True) + "\n"
        Path(args.out).write_text(payload, encoding="utf-8")
    if outcome.code:
        print(f"invariant violated: {outcome.summary}", file=sys.stderr)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
