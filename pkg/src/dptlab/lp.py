"""Dense two-phase tableau simplex with Bland's rule.

The same code runs in float64 (numpy float arrays, small pivot tolerance) or
in exact rational arithmetic (numpy object arrays of ``Fraction``, zero
tolerance).  Variables are free; sign restrictions are ordinary constraint
rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

LE, EQ, GE = "<=", "=", ">="
OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"
RATIONAL, FLOAT64 = "rational", "float64"

FLOAT_TOL = 1e-10
MAX_PIVOTS = 200_000


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    bound: object

    def __post_init__(self):
        if self.relation not in (LE, EQ, GE):
            raise ValueError(f"bad relation {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))


@dataclass
class LPProblem:
    """maximize (or minimize) objective . x subject to the constraint rows."""

    objective: Sequence
    constraints: list = field(default_factory=list)
    n_vars: int | None = None
    sense: str = "max"

    def __post_init__(self):
        self.objective = tuple(self.objective)
        if self.n_vars is None:
            self.n_vars = len(self.objective)
        if len(self.objective) != self.n_vars:
            raise ValueError("objective length differs from variable count")
        for c in self.constraints:
            if len(c.coeffs) != self.n_vars:
                raise ValueError("constraint row length differs from variable count")
        if self.sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")

    def add(self, coeffs, relation, bound) -> None:
        row = Constraint(coeffs, relation, bound)
        if len(row.coeffs) != self.n_vars:
            raise ValueError("constraint row length differs from variable count")
        self.constraints.append(row)

    def violation(self, point) -> float:
        """Largest amount by which ``point`` breaks a constraint (0 if feasible)."""
        worst = 0.0
        for c in self.constraints:
            lhs = sum(a * x for a, x in zip(c.coeffs, point))
            gap = lhs - c.bound
            if c.relation == LE:
                v = max(gap, 0)
            elif c.relation == GE:
                v = max(-gap, 0)
            else:
                v = abs(gap)
            worst = max(worst, float(v))
        return worst


@dataclass
class LPSolution:
    status: str
    point: tuple = ()
    value: object = None
    max_violation: float = 0.0
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    def __init__(self, T, basis, tol):
        self.T = T  # rows 0..m-1 constraints, row m objective; last column rhs
        self.basis = basis
        self.tol = tol
        self.pivots = 0

    @property
    def m(self):
        return len(self.basis)

    def set_objective(self, cost):
        # objective row holds reduced costs negated: row = c_B B^-1 A - c
        T = self.T
        row = -np.asarray(cost, dtype=T.dtype).copy()
        row = np.append(row, row[0] * 0)
        for i, bvar in enumerate(self.basis):
            cb = cost[bvar]
            if cb != 0:
                row = row + cb * T[i]
        T[-1] = row

    def pivot(self, r, c):
        T = self.T
        T[r] = T[r] / T[r, c]
        col = T[:, c].copy()
        col[r] = 0
        if self.tol:
            T -= np.outer(col, T[r])
            T[:, c] = 0
            T[r, c] = 1
        else:
            nz = np.nonzero(col != 0)[0]
            if len(nz):
                T[nz] -= np.outer(col[nz], T[r])
        self.basis[r] = c
        self.pivots += 1

    def run(self, allowed):
        """Bland's rule until optimal; returns OPTIMAL or UNBOUNDED."""
        T, tol = self.T, self.tol
        while True:
            if self.pivots > MAX_PIVOTS:
                raise RuntimeError("simplex pivot limit exceeded")
            obj = T[-1, :-1]
            cand = np.nonzero((obj < -tol) & allowed)[0]
            if len(cand) == 0:
                return OPTIMAL
            c = int(cand[0])
            col = T[:-1, c]
            rows = np.nonzero(col > tol)[0]
            if len(rows) == 0:
                return UNBOUNDED
            ratios = T[rows, -1] / col[rows]
            best = min(ratios)
            if tol:
                ties = rows[ratios <= best + 1e-9 * abs(best)]
            else:
                ties = rows[ratios == best]
            r = min(ties, key=lambda i: self.basis[i])
            self.pivot(int(r), c)


def solve(problem: LPProblem, mode: str = FLOAT64) -> LPSolution:
    """Solve ``problem`` by two-phase simplex with Bland's pivoting rule.

    Deterministic for a given input.  Infeasibility and unboundedness are
    reported through ``status``.
    """
    if mode not in (RATIONAL, FLOAT64):
        raise ValueError(f"unknown mode {mode!r}")
    exact = mode == RATIONAL
    conv = Fraction if exact else float
    dtype = object if exact else float
    tol = 0 if exact else FLOAT_TOL

    n = problem.n_vars
    m = len(problem.constraints)
    sign = 1 if problem.sense == "max" else -1
    c = np.array([conv(v) * sign for v in problem.objective], dtype=dtype)

    A = np.array([[conv(v) for v in row.coeffs] for row in problem.constraints], dtype=dtype).reshape(m, n)
    b = np.array([conv(row.bound) for row in problem.constraints], dtype=dtype)
    rel = [row.relation for row in problem.constraints]

    # rows scaled to unit max-norm for float conditioning
    if not exact:
        scale = np.maximum(np.abs(A).max(axis=1, initial=0.0), np.abs(b))
        scale[scale == 0] = 1.0
        A = A / scale[:, None]
        b = b / scale

    # b < 0 rows, and zero-rhs >= rows (slack basis instead of an artificial)
    flip = (b < 0) | np.array([r == GE and v == 0 for r, v in zip(rel, b)], dtype=bool)
    A[flip] = -A[flip]
    b[flip] = -b[flip]
    rel = [{LE: GE, GE: LE}.get(r, r) if f else r for r, f in zip(rel, flip)]

    n_slack = sum(r != EQ for r in rel)
    need_art = [i for i, r in enumerate(rel) if r != LE]
    n_art = len(need_art)
    ncols = 2 * n + n_slack + n_art
    zero = conv(0)
    T = np.empty((m + 1, ncols + 1), dtype=dtype)
    T[...] = zero
    T[:m, :n] = A
    T[:m, n:2 * n] = -A
    T[:m, -1] = b
    basis = [0] * m
    s = 2 * n
    a = 2 * n + n_slack
    for i, r in enumerate(rel):
        if r == LE:
            T[i, s] = conv(1)
            basis[i] = s
            s += 1
        elif r == GE:
            T[i, s] = conv(-1)
            s += 1
    for i in need_art:
        T[i, a] = conv(1)
        basis[i] = a
        a += 1
    original = T[:m].copy()

    tab = _Tableau(T, basis, tol)
    art_start = 2 * n + n_slack
    all_cols = np.ones(ncols, dtype=bool)
    if n_art:
        cost1 = np.array([zero] * ncols, dtype=dtype)
        cost1[art_start:] = conv(-1)
        tab.set_objective(cost1)
        tab.run(all_cols)
        if T[-1, -1] < -tol * max(1, m) * 10:
            return LPSolution(INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis
        keep = []
        for i in range(m):
            if tab.basis[i] >= art_start:
                row = T[i, :art_start]
                nz = np.nonzero(np.abs(row) > tol)[0] if tol else np.nonzero(row != 0)[0]
                if len(nz):
                    tab.pivot(i, int(nz[0]))
                    keep.append(i)
            else:
                keep.append(i)
        if len(keep) < m:
            keep_idx = keep + [m]
            T = T[keep_idx]
            original = original[keep]
            tab.T = T
            tab.basis = [tab.basis[i] for i in keep]
    allowed = all_cols.copy()
    allowed[art_start:] = False
    cost2 = np.array([zero] * ncols, dtype=dtype)
    cost2[:n] = c
    cost2[n:2 * n] = -c
    tab.set_objective(cost2)
    status = tab.run(allowed)
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED, pivots=tab.pivots)

    z = np.array([zero] * ncols, dtype=dtype)
    for i, bvar in enumerate(tab.basis):
        z[bvar] = tab.T[i, -1]
    if not exact:
        z = _refine(original, z, tab.basis)
    x = z[:n] - z[n:2 * n]
    point = tuple(x.tolist())
    value = sum(conv(v) * xi for v, xi in zip(problem.objective, point))
    return LPSolution(OPTIMAL, point, value, problem.violation(point), tab.pivots)


def _refine(original, z, basis):
    """Recompute basic values from the unpivoted system to shed rounding drift."""
    B = original[:, basis]
    rhs = original[:, -1]
    try:
        zb = np.linalg.solve(B, rhs)
    except np.linalg.LinAlgError:
        return z
    out = np.zeros_like(z)
    out[basis] = zb
    before = np.abs(original[:, :-1] @ z - rhs).max(initial=0.0)
    after = np.abs(original[:, :-1] @ out - rhs).max(initial=0.0)
    if after <= before and (out[basis] >= -1e-9).all():
        out[out < 0] = 0.0
        return out
    return z
