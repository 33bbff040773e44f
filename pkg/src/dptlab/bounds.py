"""Closed-form bound calculators and their comparison against the LP optimum.

The Coppersmith-Rivlin constants ``a`` and ``b`` are not known explicitly.
Every calculator defaults them to 1; pass probed values (see
:func:`dptlab.extremal.cr_probe`) when the comparison has to be meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .extremal import ExtremalSpec, sigma_star


@dataclass(frozen=True)
class BoundParams:
    N: int
    k: int
    D: int
    C: int
    delta: float = 0.0
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need k >= 1")
        if not 1 <= self.C < self.N - self.k:
            raise ValueError(f"need 1 <= C < N - k (got C={self.C}, N-k={self.N - self.k})")
        if self.D < self.k:
            raise ValueError(f"need D >= k (got D={self.D}, k={self.k})")
        if self.delta < 0 or self.a <= 0 or self.b <= 0:
            raise ValueError("need delta >= 0 and a, b > 0")

    @property
    def mu(self) -> float:
        return 2 * self.C / (self.N - self.k - self.C)


def lemma5_log_main(params: BoundParams) -> float:
    """Natural log of the multiplicative term (everything except delta k 2^(k-1))."""
    N, k, D, C = params.N, params.k, params.D, params.C
    d = D - k
    mu = params.mu
    exponent = (
        params.b * d * d / (N - k - C)
        + 2 * d * math.sqrt(2 * mu + mu * mu)
        - k * math.log(C / k)
    )
    if params.delta > 0:
        # log(1 + delta + delta (2N)^k / (k-1)!)
        log_tail = math.log(params.delta) + k * math.log(2 * N) - math.lgamma(k)
        log_pre = math.log1p(params.delta) if log_tail < -700 else _logaddexp(math.log1p(params.delta), log_tail)
    else:
        log_pre = 0.0
    return math.log(params.a) + log_pre + exponent


def _logaddexp(x: float, y: float) -> float:
    hi, lo = max(x, y), min(x, y)
    return hi + math.log1p(math.exp(lo - hi))


def lemma5_bound(params: BoundParams, clamp: bool = False) -> float:
    """Upper bound on p(k) for a degree-D polynomial obeying the box constraints.

    Evaluated in log space; returns ``inf`` rather than overflowing.  Values
    above 1 are vacuous but returned as-is unless ``clamp`` is set.
    """
    log_main = lemma5_log_main(params)
    main = math.exp(log_main) if log_main < 709 else math.inf
    value = main + params.delta * params.k * 2 ** (params.k - 1)
    return min(value, 1.0) if clamp else value


def lemma5_best_C(N: int, k: int, D: int, delta: float = 0.0, a: float = 1.0, b: float = 1.0) -> tuple[int, float]:
    """Scan every admissible C and return the minimizing ``(C, bound)``."""
    if N <= 2 * k:
        raise ValueError("need N > 2k")
    best_C, best = None, math.inf
    for C in range(1, N - k):
        v = lemma5_bound(BoundParams(N, k, D, C, delta, a, b))
        if v < best:
            best_C, best = C, v
    return best_C, best


def theorem6_exponent(alpha: float, gamma: float, b: float = 1.0) -> float:
    """b alpha^2 + 4 alpha e^((gamma+1)/2) - 1 - gamma; negative means sigma <= e^(-gamma k)."""
    return b * alpha * alpha + 4 * alpha * math.exp((gamma + 1) / 2) - 1 - gamma


def razborov_error_bound(d: int, Q: int) -> float:
    """Truncation error 2^(-d/4 + 2Q) for a degree-d approximation of a Q-qubit protocol."""
    if d < 0 or Q < 0:
        raise ValueError("need d, Q >= 0")
    return 2.0 ** (-d / 4 + 2 * Q)


def xor_advantage_product(advs) -> float:
    out = 1.0
    for a in advs:
        if not 0 <= a <= 1:
            raise ValueError("advantages lie in [0, 1]")
        out *= a
    return out


# f(N, S) with the Omega/O bound solved for time (or communication)
_TRADEOFFS = {
    "sorting": lambda N, S: N ** 1.5 / math.sqrt(S),
    "mv-classical": lambda N, S: N ** 2 / S,
    "mv-quantum": lambda N, S: N ** 1.5 / math.sqrt(S),
    "mm-classical": lambda N, S: N ** 3 / S,
    "mm-quantum": lambda N, S: N ** 2.5 / math.sqrt(S),
    "mv-comm": lambda N, S: N ** 1.5 / math.sqrt(S),
    "mm-comm": lambda N, S: N ** 2.5 / math.sqrt(S),
}
TRADEOFF_PROBLEMS = tuple(_TRADEOFFS)


@dataclass(frozen=True)
class TradeoffQuery:
    problem: str
    N: int
    S: float
    constant: float = 1.0

    def __post_init__(self):
        if self.problem not in _TRADEOFFS:
            raise ValueError(f"unknown problem {self.problem!r}; choose from {', '.join(_TRADEOFFS)}")
        if self.N < 1 or self.S < 1 or self.constant <= 0:
            raise ValueError("need N >= 1, S >= 1, constant > 0")


def tradeoff_bound(q: TradeoffQuery) -> float:
    return q.constant * _TRADEOFFS[q.problem](q.N, q.S)


def comm_upper_bound(N: int, S: float, constant: float = 1.0) -> float:
    """Communication of the slicing protocol for the matrix-vector problem: N^(3/2) log^2 N / sqrt(S)."""
    return constant * N ** 1.5 * math.log2(N) ** 2 / math.sqrt(S)


@dataclass
class DominanceReport:
    N: int
    k: int
    D: int
    a: float
    b: float
    sigma_star: float
    bound: float
    best_C: int | None
    passed: bool
    note: str = ""
    ratio: float = field(init=False)

    def __post_init__(self):
        self.ratio = self.sigma_star / self.bound if self.bound > 0 else (0.0 if self.sigma_star <= 0 else math.inf)


class DominanceViolation(AssertionError):
    def __init__(self, report: DominanceReport):
        super().__init__(
            f"sigma*={report.sigma_star:.6g} exceeds bound {report.bound:.6g} at N={report.N} k={report.k} D={report.D}"
        )
        self.report = report


# slack for LP round-off when sigma* and the bound are compared
LP_SLACK = 1e-9


def dominance_check(N: int, k: int, D: int, a: float = 1.0, b: float = 1.0, raise_on_fail: bool = False) -> DominanceReport:
    """Compare the LP optimum sigma*(N, k, D, 0) with the best-C closed-form bound.

    For D < k the only admissible polynomial is 0, so the comparator is the
    exact value 0 instead of the closed form (which needs D >= k).
    """
    s = float(sigma_star(ExtremalSpec(N, k, min(D, N), 0.0)))
    if D < k:
        report = DominanceReport(N, k, D, a, b, s, 0.0, None, s <= LP_SLACK, "D < k: polynomial forced to zero")
    else:
        C, bound = lemma5_best_C(N, k, D, 0.0, a, b)
        report = DominanceReport(N, k, D, a, b, s, bound, C, s <= bound + LP_SLACK)
    if raise_on_fail and not report.passed:
        raise DominanceViolation(report)
    return report
