"""Exact classical query bounds for k independent OR_n instances under nu^k.

nu puts mass 1/2 on the all-zero block and 1/(2n) on each weight-one block.
All probabilities are ``Fraction``s.

Inside a block only the number q of zero answers matters: the posterior that
the block is empty is n / (2n - q), and the next fresh query in it finds the
1 with probability 1 / (2n - q).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

MAX_DP_BITS = 24
MAX_TREE_BITS = 8
MAX_TREE_DEPTH = 4


class ResourceGuard(ValueError):
    """Raised when an exact computation would exceed its configured size limit."""


@dataclass(frozen=True)
class NuDistribution:
    n: int

    def support(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """All (block, probability) pairs with nonzero mass."""
        zero = (0,) * self.n
        out = [(zero, Fraction(1, 2))]
        for i in range(self.n):
            out.append((zero[:i] + (1,) + zero[i + 1:], Fraction(1, 2 * self.n)))
        return out


def suc_or(n: int, t: int) -> Fraction:
    """Best success of a t-query algorithm for OR_n under nu: (t/n + 1)/2."""
    if not 0 <= t <= n:
        raise ValueError("need 0 <= t <= n")
    return (Fraction(t, n) + 1) / 2


def _empty_posterior(n: int, q: int) -> Fraction:
    return Fraction(n, 2 * n - q)


def _hit_probability(n: int, q: int) -> Fraction:
    return Fraction(1, 2 * n - q)


def _guard(n: int, k: int) -> None:
    if n * k > MAX_DP_BITS:
        raise ResourceGuard(f"k*n = {k * n} exceeds {MAX_DP_BITS}")


def _block_value(n: int, q: int, parity: bool) -> Fraction:
    """Final-guess value of an unresolved block with q zero answers."""
    post = _empty_posterior(n, q)
    if parity:
        return abs(2 * post - 1)
    # guess "zero" iff post >= 1/2, which holds for every q
    return max(post, 1 - post)


def _adaptive_value(n: int, k: int, T: int, parity: bool) -> Fraction:
    @lru_cache(maxsize=None)
    def V(state: tuple[int, ...], budget: int) -> Fraction:
        # state: sorted zero-answer counts of unresolved, non-exhausted blocks
        stop = Fraction(1)
        for q in state:
            stop *= _block_value(n, q, parity)
        if budget == 0 or not state:
            return stop
        best = stop
        for idx, q in enumerate(state):
            if idx and state[idx - 1] == q:
                continue  # symmetric to the previous block
            hit = _hit_probability(n, q)
            rest = state[:idx] + state[idx + 1:]
            found = V(rest, budget - 1)
            if q + 1 == n:
                missed = V(rest, budget - 1)  # block now known empty: value 1
            else:
                missed = V(tuple(sorted(rest + (q + 1,))), budget - 1)
            best = max(best, hit * found + (1 - hit) * missed)
        return best

    return V((0,) * k, T)


def dp_adaptive_kfold(n: int, k: int, T: int) -> Fraction:
    """Optimal success of any adaptive deterministic T-query algorithm for OR_n^(k) under nu^k."""
    _guard(n, k)
    if not 0 <= T <= k * n:
        raise ValueError("need 0 <= T <= kn")
    return _adaptive_value(n, k, T, parity=False)


def dp_parity_advantage(n: int, k: int, T: int) -> Fraction:
    """Optimal advantage |2p - 1| for the parity of the k OR values with T queries."""
    _guard(n, k)
    if not 0 <= T <= k * n:
        raise ValueError("need 0 <= T <= kn")
    return _adaptive_value(n, k, T, parity=True)


def dp_nonadaptive_kfold(n: int, k: int, budgets: Sequence[int]) -> Fraction:
    """Optimal success when block i may receive at most budgets[i] queries.

    Solved as a joint value iteration over all blocks (queries may still be
    interleaved adaptively across blocks), not as a product of per-block
    optima; the product identity is then a checkable consequence.
    """
    budgets = tuple(budgets)
    if len(budgets) != k:
        raise ValueError("need one budget per block")
    if any(not 0 <= t <= n for t in budgets):
        raise ValueError("each budget must lie in 0..n")

    @lru_cache(maxsize=None)
    def V(state: tuple[tuple[int, int], ...]) -> Fraction:
        # state: sorted (zero answers, remaining budget) of unresolved blocks
        stop = Fraction(1)
        for q, _ in state:
            stop *= _block_value(n, q, False)
        best = stop
        for idx, (q, left) in enumerate(state):
            if left == 0 or (idx and state[idx - 1] == (q, left)):
                continue
            hit = _hit_probability(n, q)
            rest = state[:idx] + state[idx + 1:]
            found = V(rest)
            missed = V(rest) if q + 1 == n else V(tuple(sorted(rest + ((q + 1, left - 1),))))
            best = max(best, hit * found + (1 - hit) * missed)
        return best

    return V(tuple(sorted((0, t) for t in budgets)))


def _tree_guard(n: int, k: int, T: int) -> None:
    if k * n > MAX_TREE_BITS or T > MAX_TREE_DEPTH:
        raise ResourceGuard(f"tree enumeration limited to kn <= {MAX_TREE_BITS}, T <= {MAX_TREE_DEPTH}")


def _joint_support(n: int, k: int):
    blocks = NuDistribution(n).support()
    out = []
    for combo in itertools.product(blocks, repeat=k):
        bits = tuple(b for block, _ in combo for b in block)
        prob = math.prod((p for _, p in combo), start=Fraction(1))
        ors = tuple(int(any(block)) for block, _ in combo)
        out.append((bits, prob, ors))
    return out


def _enumerate(n: int, k: int, T: int, leaf) -> Fraction:
    """Best expected leaf value over all adaptive decision trees of depth <= T.

    Works directly on the explicit input support of nu^k; a node is the set of
    (position, answer) pairs seen so far, and every unqueried position is a
    candidate next query.
    """
    support = _joint_support(n, k)
    positions = range(k * n)

    @lru_cache(maxsize=None)
    def best(known: frozenset, depth: int) -> Fraction:
        alive = [(bits, p, ors) for bits, p, ors in support if all(bits[i] == v for i, v in known)]
        value = leaf(alive)
        if depth == 0:
            return value
        asked = {i for i, _ in known}
        for pos in positions:
            if pos in asked:
                continue
            total = Fraction(0)
            for answer in (0, 1):
                if any(bits[pos] == answer for bits, _, _ in alive):
                    total += best(known | {(pos, answer)}, depth - 1)
            value = max(value, total)
        return value

    return best(frozenset(), T)


def _vector_leaf(alive) -> Fraction:
    mass: dict = {}
    for _, p, ors in alive:
        mass[ors] = mass.get(ors, 0) + p
    return max(mass.values(), default=Fraction(0))


def _parity_leaf(alive) -> Fraction:
    even = sum((p for _, p, ors in alive if sum(ors) % 2 == 0), Fraction(0))
    odd = sum((p for _, p, ors in alive if sum(ors) % 2 == 1), Fraction(0))
    return abs(even - odd)


def enumerate_trees_oracle(n: int, k: int, T: int) -> Fraction:
    """Brute-force optimum over all deterministic trees; ground truth for :func:`dp_adaptive_kfold`."""
    _tree_guard(n, k, T)
    return _enumerate(n, k, T, _vector_leaf)


def enumerate_trees_parity(n: int, k: int, T: int) -> Fraction:
    """Brute-force optimal advantage for the parity of ORs."""
    _tree_guard(n, k, T)
    return _enumerate(n, k, T, _parity_leaf)


def empty_block_tail(k: int) -> Fraction:
    """Pr[Z < k/3] for Z ~ Binomial(k, 1/2), the number of empty blocks."""
    return sum((Fraction(math.comb(k, z), 2 ** k) for z in range(k + 1) if 3 * z < k), Fraction(0))


def lemma2_check(n: int, k: int, T: int) -> tuple[Fraction, Fraction, bool]:
    """Adaptive optimum vs non-adaptive optimum at per-block budget floor(3T/k) plus the exact tail."""
    adaptive = dp_adaptive_kfold(n, k, T)
    per_block = min(n, (3 * T) // k)
    rhs = dp_nonadaptive_kfold(n, k, (per_block,) * k) + empty_block_tail(k)
    return adaptive, rhs, adaptive <= rhs


# hard matrices for the matrix-vector tradeoff ---------------------------------


@dataclass(frozen=True)
class HardMatrix:
    N: int
    k: int
    seed: int
    rows: np.ndarray  # N x N array of 0/1

    def __post_init__(self):
        w = self.N // (2 * self.k)
        if self.rows.shape != (self.N, self.N) or not (self.rows.sum(axis=1) == w).all():
            raise ValueError(f"every row must have exactly {w} ones")

    def dumps(self) -> str:
        lines = [f"{self.N} {self.k} {self.seed}"]
        lines += ["".join(str(int(v)) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "HardMatrix":
        lines = text.split()
        N, k, seed = (int(v) for v in lines[:3])
        body = lines[3:]
        if len(body) != N or any(len(r) != N or set(r) - {"0", "1"} for r in body):
            raise ValueError("malformed hard-matrix body")
        rows = np.array([[int(c) for c in r] for r in body], dtype=np.uint8)
        return cls(N, k, seed, rows)


def generate_hard_matrix(N: int, k: int, seed: int) -> HardMatrix:
    """Each row gets N/(2k) distinct uniformly random one-positions."""
    if k < 1 or N % (2 * k):
        raise ValueError("2k must divide N")
    rng = np.random.default_rng(seed)
    w = N // (2 * k)
    rows = np.zeros((N, N), dtype=np.uint8)
    for r in range(N):
        rows[r, rng.choice(N, size=w, replace=False)] = 1
    return HardMatrix(N, k, seed, rows)


@dataclass
class UniqueOnesReport:
    N: int
    k: int
    subsets_checked: int
    exhaustive: bool
    failing_subsets: int
    worst_subset: tuple
    worst_bad_rows: int

    @property
    def passed(self) -> bool:
        return self.failing_subsets == 0

    @property
    def failure_rate(self) -> float:
        return self.failing_subsets / self.subsets_checked if self.subsets_checked else 0.0


def _bad_rows(rows: np.ndarray, subset: Sequence[int], threshold: float) -> int:
    sub = rows[list(subset)].astype(bool)
    bad = 0
    for j in range(len(subset)):
        others = np.delete(sub, j, axis=0).any(axis=0)
        if (sub[j] & ~others).sum() <= threshold:
            bad += 1
    return bad


def verify_unique_ones(A: HardMatrix, k: int, work_limit: int = 200_000, samples: int = 100_000, seed: int = 0) -> UniqueOnesReport:
    """Check that every k-subset of rows has fewer than k/2 bad rows.

    A row is bad inside a subset if at most N/(6k) of its ones are missed by
    the union of the other rows.  Exhaustive when C(N, k) <= ``work_limit``,
    otherwise ``samples`` seeded random subsets (the verdict is then partial).
    """
    N = A.N
    threshold = N / (6 * k)
    if k <= 1:
        return UniqueOnesReport(N, k, 0, True, 0, (), 0)
    total = math.comb(N, k)
    exhaustive = total <= work_limit
    if exhaustive:
        subsets = itertools.combinations(range(N), k)
    else:
        rng = np.random.default_rng(seed)
        subsets = (tuple(sorted(rng.choice(N, size=k, replace=False).tolist())) for _ in range(samples))
    checked = failing = worst_bad = 0
    worst: tuple = ()
    for subset in subsets:
        bad = _bad_rows(A.rows, subset, threshold)
        checked += 1
        if 2 * bad >= k:
            failing += 1
        if bad > worst_bad or not worst:
            worst_bad, worst = bad, tuple(subset)
    return UniqueOnesReport(N, k, checked, exhaustive, failing, worst, worst_bad)
