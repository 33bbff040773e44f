"""Extremal polynomial problems posed as linear programs over coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lp import EQ, FLOAT64, GE, LE, RATIONAL, LPProblem, LPSolution, solve
from .poly import CHEBYSHEV, Poly, chebyshev, evaluate


@dataclass(frozen=True)
class ExtremalSpec:
    """Degree-``D`` polynomials on {0..N}, vanishing (up to delta) on {0..k-1}."""

    N: int
    k: int
    D: int
    delta: float = 0.0

    def __post_init__(self):
        if not 0 <= self.k <= self.N:
            raise ValueError("need 0 <= k <= N")
        if self.D < 0:
            raise ValueError("need D >= 0")
        if self.delta < 0:
            raise ValueError("need delta >= 0")


def chebyshev_rows(points, degree: int, lo, hi, exact: bool = False):
    """Matrix of T_j(u(x)) for x in points, u mapping [lo, hi] onto [-1, 1]."""
    if exact:
        lo, hi = Fraction(lo), Fraction(hi)
        rows = []
        for x in points:
            u = (2 * Fraction(x) - lo - hi) / (hi - lo)
            vals = [Fraction(1), u][: degree + 1]
            while len(vals) < degree + 1:
                vals.append(2 * u * vals[-1] - vals[-2])
            rows.append(vals)
        return rows
    x = np.asarray(points, dtype=float)
    u = (2 * x - lo - hi) / (hi - lo)
    out = np.empty((len(x), degree + 1))
    out[:, 0] = 1.0
    if degree >= 1:
        out[:, 1] = u
    for j in range(2, degree + 1):
        out[:, j] = 2 * u * out[:, j - 1] - out[:, j - 2]
    return out


def monomial_rows(points, degree: int, exact: bool = False):
    if exact:
        return [[Fraction(x) ** j for j in range(degree + 1)] for x in points]
    x = np.asarray(points, dtype=float)
    return np.vander(x, degree + 1, increasing=True)


def _as_list(rows):
    return [list(r) for r in rows]


def extremal_problem(spec: ExtremalSpec, basis: str = CHEBYSHEV, exact: bool = False) -> LPProblem:
    N, k, D = spec.N, spec.k, spec.D
    delta = Fraction(spec.delta) if exact else float(spec.delta)
    pts = range(N + 1)
    if basis == CHEBYSHEV:
        rows = _as_list(chebyshev_rows(pts, D, 0, N, exact))
    else:
        rows = _as_list(monomial_rows(pts, D, exact))
    lp = LPProblem(rows[k], n_vars=D + 1)
    for i, row in enumerate(rows):
        upper = delta if i < k else 1 + delta
        lp.add(row, LE, upper)
        lp.add(row, GE, -delta)
    return lp


def _zero_factor(i, k, N, exact):
    """prod_{j<k} (i - j) / (N - j): the forced-zero factor, normalized to 1 at N."""
    out = Fraction(1) if exact else 1.0
    for j in range(k):
        out = out * (i - j) / (N - j)
    return out


def factored_problem(spec: ExtremalSpec, exact: bool = False) -> LPProblem:
    """delta = 0 form: p = prod_{j<k}(x - j)/(N - j) * q with q in the [0, N] Chebyshev basis.

    The forced zeros hold identically, so the near-parallel rows at
    i = 0..k-1 never enter the tableau.  Objective is q(k); p(k) is recovered
    by multiplying with the factor at k.
    """
    N, k, D = spec.N, spec.k, spec.D
    d = D - k
    rows = _as_list(chebyshev_rows(range(k, N + 1), d, 0, N, exact))
    lp = LPProblem(rows[0], n_vars=d + 1)
    one = Fraction(1) if exact else 1.0
    for i, row in zip(range(k, N + 1), rows):
        f = _zero_factor(i, k, N, exact)
        lp.add([f * v for v in row], LE, one)
        lp.add(row, GE, 0 * one)
    return lp


def solve_extremal(spec: ExtremalSpec, mode: str = FLOAT64, basis: str = CHEBYSHEV) -> tuple[object, Poly, LPSolution]:
    """Optimum of p(k) for ``spec`` together with the maximizing polynomial."""
    if spec.D > spec.N:
        raise ValueError(f"degree cap D={spec.D} exceeds N={spec.N}")
    exact = mode == RATIONAL
    if basis == CHEBYSHEV and spec.delta == 0 and spec.k >= 1:
        if spec.D < spec.k:
            # a degree < k polynomial with k roots is identically zero
            zero = Fraction(0) if exact else 0.0
            return zero, Poly.zero(), LPSolution("optimal", (zero,) * (spec.D + 1), zero)
        lp = factored_problem(spec, exact)
        sol = solve(lp, mode)
        if not sol.optimal:
            raise RuntimeError(f"extremal LP ended with status {sol.status}")
        q = Poly.chebyshev_basis(sol.point, 0, spec.N, exact=exact)
        norm = 1
        for j in range(spec.k):
            norm = norm * (spec.N - j)
        poly = Poly.from_roots(range(spec.k)) * q
        poly = poly * (Fraction(1, norm) if exact else 1.0 / norm)
        return sol.value * _zero_factor(spec.k, spec.k, spec.N, exact), poly, sol
    lp = extremal_problem(spec, basis, exact)
    sol = solve(lp, mode)
    if not sol.optimal:
        raise RuntimeError(f"extremal LP ended with status {sol.status}")
    if basis == CHEBYSHEV:
        poly = Poly.chebyshev_basis(sol.point, 0, spec.N, exact=exact)
    else:
        poly = Poly.monomial(sol.point, exact=exact)
    return sol.value, poly, sol


def sigma_star(spec: ExtremalSpec, mode: str = FLOAT64, basis: str = CHEBYSHEV):
    """Largest p(k) over degree-<=D polynomials obeying the box constraints of the polynomial bound.

    The primary parameterization is the Chebyshev basis rescaled to [0, N];
    ``basis="monomial"`` gives an independent formulation used as a cross-check.
    """
    value, _, _ = solve_extremal(spec, mode, basis)
    return value


def _adeg_feasible(n: int, eps, D: int, mode: str) -> bool:
    exact = mode == RATIONAL
    rows = _as_list(chebyshev_rows(range(n + 1), D, 0, n, exact))
    lp = LPProblem([0] * (D + 1))
    one = Fraction(1) if exact else 1.0
    for i, row in enumerate(rows):
        if i == 0:
            lp.add(row, LE, eps)
            lp.add(row, GE, 0 * one)
        else:
            lp.add(row, GE, one - eps)
            lp.add(row, LE, one)
    return solve(lp, mode).optimal


def approx_degree(n: int, eps=Fraction(1, 3), mode: str = FLOAT64) -> int:
    """Smallest D admitting p(0) <= eps, p(i) >= 1 - eps (i >= 1), p in [0, 1] on {0..n}.

    Binary search over D; feasibility is monotone in D.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("need 0 < eps < 1/2")
    eps = Fraction(eps) if mode == RATIONAL else float(eps)
    lo, hi = 1, n  # D = n always feasible (interpolation); D = 0 never is
    while lo < hi:
        mid = (lo + hi) // 2
        if _adeg_feasible(n, eps, mid, mode):
            hi = mid
        else:
            lo = mid + 1
    return lo


def approx_degree_sweep(n: int, eps=Fraction(1, 3), mode: str = FLOAT64) -> list[bool]:
    """Feasibility for every D in 1..n (oracle for :func:`approx_degree`)."""
    eps = Fraction(eps) if mode == RATIONAL else float(eps)
    return [_adeg_feasible(n, eps, D, mode) for D in range(1, n + 1)]


def chebyshev_extremality_check(d: int, mu: float, grid_size: int) -> tuple[float, float]:
    """Max q(1 + mu) over degree-d q with |q| <= 1 on a Chebyshev-extrema grid of [-1, 1].

    Returns ``(lp_value, T_d(1 + mu))``.  T_d itself is feasible, so the LP
    value can only overshoot, and the gap closes as the grid is refined.
    """
    if d < 1 or mu <= 0 or grid_size < 4 * d + 1:
        raise ValueError("need d >= 1, mu > 0, grid_size >= 4d + 1")
    grid = np.cos(np.pi * np.arange(grid_size) / (grid_size - 1))
    rows = chebyshev_rows(grid, d, -1.0, 1.0)
    target = chebyshev_rows([1.0 + mu], d, -1.0, 1.0)[0]
    lp = LPProblem(target.tolist())
    for row in rows.tolist():
        lp.add(row, LE, 1.0)
        lp.add(row, GE, -1.0)
    sol = solve(lp)
    return float(sol.value), float(evaluate(chebyshev(d), 1.0 + mu))


@dataclass
class CRProbe:
    worst_ratio: float
    witness: Poly
    argmax: float
    peak: float


def cr_probe(n: int, d: int, samples: int | None = None) -> CRProbe:
    """Empirical Coppersmith-Rivlin constant ``a`` at ``b = 1``.

    For each off-integer sample point x0 in (0, n) solve
    max p(x0) s.t. |p(i)| <= 1 for i = 0..n, deg p <= d.  The largest optimum
    divided by exp(d^2 / n) is returned with its witness polynomial.
    """
    if not 0 <= d <= n:
        raise ValueError("need 0 <= d <= n")
    if samples is None:
        samples = 10 * n
    if samples < 10 * n:
        raise ValueError("need samples >= 10 n")
    if d == 0:
        return CRProbe(1.0, Poly.chebyshev_basis([1.0], 0, n), 0.5, 1.0)
    rows = chebyshev_rows(range(n + 1), d, 0, n).tolist()
    xs = [n * (j + 0.5) / samples for j in range(samples)]
    xs = [x for x in xs if x != round(x)]
    # |p| peaks are mirror-symmetric under x -> n - x; half the range suffices
    xs = [x for x in xs if x <= n / 2]
    targets = chebyshev_rows(xs, d, 0, n)
    best, best_x, best_point = -math.inf, None, None
    for x0, target in zip(xs, targets.tolist()):
        lp = LPProblem(target)
        for row in rows:
            lp.add(row, LE, 1.0)
            lp.add(row, GE, -1.0)
        sol = solve(lp)
        if sol.value > best:
            best, best_x, best_point = float(sol.value), x0, sol.point
    witness = Poly.chebyshev_basis(best_point, 0, n)
    return CRProbe(best / math.exp(d * d / n), witness, best_x, best)


def probe_cr_constant(pairs, samples_per_n: int = 10) -> float:
    """Largest cr_probe ratio over the ``(n, d)`` pairs."""
    return max(cr_probe(n, d, samples_per_n * n).worst_ratio for n, d in pairs)
