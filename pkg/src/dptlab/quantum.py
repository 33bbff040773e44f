"""Statevector simulation of quantum query algorithms.

Qubit order, most significant first: index register, answer bit, workspace.
The oracle maps |i, b, z> to |i, b xor x_i, z>; index values >= N (padding up
to a power of two) are never flipped.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .poly import Poly

NORM_TOL = 1e-10
MAX_SYMMETRIZE_BITS = 12


class SimulationError(RuntimeError):
    pass


def index_qubits(N: int) -> int:
    return max(0, math.ceil(math.log2(N))) if N > 1 else 0


@dataclass(frozen=True)
class Layout:
    N: int
    workspace: int = 0

    @property
    def n_index(self) -> int:
        return index_qubits(self.N)

    @property
    def m(self) -> int:
        return self.n_index + 1 + self.workspace

    @property
    def shape(self) -> tuple[int, int, int]:
        return (2 ** self.n_index, 2, 2 ** self.workspace)

    @property
    def answer_qubit(self) -> int:
        return self.n_index


def _check_norm(state: np.ndarray, where: str) -> None:
    norms = np.sum(np.abs(state.reshape(state.shape[0], -1)) ** 2, axis=1)
    if np.any(np.abs(norms - 1) > NORM_TOL):
        raise SimulationError(f"norm drift {np.max(np.abs(norms - 1)):.3e} after {where}")


def apply_oracle(state: np.ndarray, x: Sequence[int], layout: Layout) -> np.ndarray:
    """Apply the bit-flip oracle for input ``x`` to a single state vector."""
    x = np.asarray(x)
    if x.shape != (layout.N,):
        raise ValueError(f"input has {x.size} bits, layout expects {layout.N}")
    out = apply_oracle_batch(state[None, :], x[None, :], layout)
    return out[0]


def apply_oracle_batch(states: np.ndarray, X: np.ndarray, layout: Layout) -> np.ndarray:
    """Oracle on a batch: row b of ``states`` sees input row b of ``X``."""
    B = states.shape[0]
    if states.shape[1] != 2 ** layout.m:
        raise ValueError("state dimension does not match the layout")
    psi = states.reshape(B, *layout.shape)
    mask = np.zeros((B, layout.shape[0]), dtype=bool)
    mask[:, : layout.N] = np.asarray(X, dtype=bool)
    flipped = psi[:, :, ::-1, :]
    out = np.where(mask[:, :, None, None], flipped, psi)
    return out.reshape(B, -1)


ORACLE = "O"


@dataclass
class QueryAlgorithm:
    """Alternating input-independent unitaries and oracle calls on ``m`` qubits.

    ``steps`` holds ``ORACLE`` markers and dense unitaries.  Acceptance is the
    probability of reading 1 on ``output_qubit`` (0 = leftmost).
    """

    layout: Layout
    steps: list = field(default_factory=list)
    output_qubit: int = 0

    @property
    def m(self) -> int:
        return self.layout.m

    @property
    def N(self) -> int:
        return self.layout.N

    @property
    def T(self) -> int:
        return sum(1 for s in self.steps if isinstance(s, str))

    def validate(self) -> None:
        dim = 2 ** self.m
        for s in self.steps:
            if isinstance(s, str):
                if s != ORACLE:
                    raise ValueError(f"unknown step {s!r}")
            elif s.shape != (dim, dim):
                raise ValueError(f"unitary of shape {s.shape}, expected {(dim, dim)}")
        if not 0 <= self.output_qubit < self.m:
            raise ValueError("output qubit outside the register")

    def run_batch(self, X: np.ndarray, check_norm: bool = True) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X))
        states = np.zeros((X.shape[0], 2 ** self.m), dtype=complex)
        states[:, 0] = 1.0
        for step_no, s in enumerate(self.steps):
            if isinstance(s, str):
                states = apply_oracle_batch(states, X, self.layout)
            else:
                states = states @ s.T
            if check_norm:
                _check_norm(states, f"step {step_no}")
        return states

    def acceptance_batch(self, X: np.ndarray) -> np.ndarray:
        states = self.run_batch(X)
        probs = np.abs(states) ** 2
        shift = self.m - 1 - self.output_qubit
        ones = (np.arange(states.shape[1]) >> shift) & 1
        return probs[:, ones == 1].sum(axis=1)

    def acceptance(self, x: Sequence[int]) -> float:
        return float(self.acceptance_batch(np.asarray(x)[None, :])[0])

    # text format ----------------------------------------------------------

    def save(self, path: str | Path) -> None:
        """Write the program file plus one matrix file per unitary next to it."""
        path = Path(path)
        lines = [f"{self.m} {self.N} {self.T}"]
        u = 0
        for s in self.steps:
            if isinstance(s, str):
                lines.append(ORACLE)
            else:
                name = f"{path.stem}.u{u}.txt"
                save_matrix(path.parent / name, s)
                lines.append(f"U {name}")
                u += 1
        path.write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path: str | Path, output_qubit: int = 0) -> "QueryAlgorithm":
        path = Path(path)
        lines = [ln.strip() for ln in path.read_text().splitlines() if ln.strip()]
        m, N, T = (int(v) for v in lines[0].split())
        workspace = m - index_qubits(N) - 1
        if workspace < 0:
            raise ValueError(f"{m} qubits cannot hold an index over {N} positions plus an answer bit")
        steps: list = []
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] == ORACLE and len(parts) == 1:
                steps.append(ORACLE)
            elif parts[0] == "U" and len(parts) == 2:
                steps.append(load_matrix(path.parent / parts[1], 2 ** m))
            else:
                raise ValueError(f"bad program line {ln!r}")
        alg = cls(Layout(N, workspace), steps, output_qubit)
        alg.validate()
        if alg.T != T:
            raise ValueError(f"header declares T={T} but program has {alg.T} oracle calls")
        return alg


def save_matrix(path: Path, U: np.ndarray) -> None:
    rows = []
    for row in U:
        rows.append(" ".join(f"{float(z.real)!r} {float(z.imag)!r}" for z in row))
    Path(path).write_text("\n".join(rows) + "\n")


def load_matrix(path: Path, dim: int) -> np.ndarray:
    vals = np.array(Path(path).read_text().split(), dtype=float)
    if vals.size != 2 * dim * dim:
        raise ValueError(f"{path}: expected {dim}x{dim} complex entries")
    pairs = vals.reshape(dim, dim, 2)
    U = pairs[..., 0] + 1j * pairs[..., 1]
    if not np.allclose(U.conj().T @ U, np.eye(dim), atol=1e-9):
        raise ValueError(f"{path}: matrix is not unitary")
    return U


# gates ------------------------------------------------------------------------

H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
X_GATE = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def on_qubits(m: int, gates: dict[int, np.ndarray]) -> np.ndarray:
    """Kronecker product placing single-qubit ``gates`` on an m-qubit register."""
    out = np.eye(1, dtype=complex)
    for q in range(m):
        out = np.kron(out, gates.get(q, I2))
    return out


def diffusion(n_index: int, m: int) -> np.ndarray:
    """2|s><s| - I on the index register (uniform |s>), identity elsewhere."""
    d = 2 ** n_index
    s = np.full(d, 1 / math.sqrt(d))
    R = 2 * np.outer(s, s) - np.eye(d)
    return np.kron(R, np.eye(2 ** (m - n_index)))


def random_unitary(dim: int, rng: np.random.Generator, rotations: int | None = None) -> np.ndarray:
    """Product of random two-level rotations with random phases."""
    U = np.eye(dim, dtype=complex)
    if rotations is None:
        rotations = 3 * dim * dim
    for _ in range(rotations):
        i, j = rng.choice(dim, size=2, replace=False)
        theta, phi, chi = rng.uniform(0, 2 * np.pi, size=3)
        c, s = math.cos(theta), math.sin(theta)
        ri, rj = U[i].copy(), U[j].copy()
        U[i] = np.exp(1j * phi) * (c * ri - s * rj)
        U[j] = np.exp(1j * chi) * (s * ri + c * rj)
    return U


def random_program(N: int, T: int, seed: int, workspace: int = 1) -> QueryAlgorithm:
    rng = np.random.default_rng(seed)
    layout = Layout(N, workspace)
    dim = 2 ** layout.m
    steps: list = [random_unitary(dim, rng)]
    for _ in range(T):
        steps += [ORACLE, random_unitary(dim, rng)]
    return QueryAlgorithm(layout, steps, output_qubit=0)


def constant_program(N: int, accept: bool = True) -> QueryAlgorithm:
    layout = Layout(N)
    steps = [on_qubits(layout.m, {0: X_GATE})] if accept else []
    return QueryAlgorithm(layout, steps, output_qubit=0)


def random_bit_program(N: int) -> QueryAlgorithm:
    """Query a uniformly random index once and output the bit read (N a power of 2)."""
    layout = Layout(N)
    m = layout.m
    prep = on_qubits(m, {q: H for q in range(layout.n_index)})
    return QueryAlgorithm(layout, [prep, ORACLE], output_qubit=layout.answer_qubit)


def grover_threshold_program(N: int, iterations: int) -> QueryAlgorithm:
    """``iterations`` Grover steps, then one query of the candidate into the answer bit.

    Accepts with probability 0 on the all-zero input, so it is a 1-threshold
    algorithm with T = iterations + 1.
    """
    layout = Layout(N)
    m, ni = layout.m, layout.n_index
    a = layout.answer_qubit
    prep = on_qubits(m, {**{q: H for q in range(ni)}, a: H @ X_GATE})
    steps: list = [prep]
    D = diffusion(ni, m)
    for _ in range(iterations):
        steps += [ORACLE, D]
    steps += [on_qubits(m, {a: X_GATE @ H}), ORACLE]
    return QueryAlgorithm(layout, steps, output_qubit=a)


# Grover search ---------------------------------------------------------------


def _check_power_of_two(n: int) -> None:
    if n < 1 or n & (n - 1):
        raise ValueError(f"n={n} is not a power of 2")


def grover_state(n: int, x: Sequence[int], iterations: int) -> np.ndarray:
    """Index-register amplitudes (answer qubit in |->, factored out) after j iterates."""
    _check_power_of_two(n)
    layout = Layout(n)
    m = layout.m
    psi = on_qubits(m, {**{q: H for q in range(layout.n_index)}, layout.answer_qubit: H @ X_GATE})[:, 0]
    D = diffusion(layout.n_index, m)
    X = np.asarray(x)[None, :]
    for _ in range(iterations):
        psi = apply_oracle_batch(psi[None, :], X, layout)[0]
        psi = D @ psi
        _check_norm(psi[None, :], "grover iterate")
    return psi.reshape(n, 2)


def grover(n: int, x: Sequence[int], iterations: int) -> float:
    """Probability that measuring the index after ``iterations`` Grover iterates hits a 1."""
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    amps = grover_state(n, x, iterations)
    probs = (np.abs(amps) ** 2).sum(axis=1)
    return float(probs[np.asarray(x, dtype=bool)].sum())


def grover_closed_form(n: int, t: int, iterations: int) -> float:
    theta = math.asin(math.sqrt(t / n))
    return math.sin((2 * iterations + 1) * theta) ** 2


def kfold_grover(n: int, k: int, xs: Sequence[Sequence[int]], iters_per_block: int) -> float:
    """Joint success of independent Grover runs on the k blocks."""
    if len(xs) != k:
        raise ValueError("need one input string per block")
    out = 1.0
    for x in xs:
        out *= grover(n, x, iters_per_block)
    return out


def exact_search_iterations(n: int) -> int:
    return max(0, math.ceil(math.pi / (4 * math.asin(1 / math.sqrt(n))) - 0.5))


@dataclass
class ExactSearchResult:
    found: int | None
    queries: int
    success_probability: float
    promise_violated: bool = False


def exact_search_distribution(n: int, x: Sequence[int]) -> tuple[np.ndarray, int]:
    """Measurement distribution of the index register and the number of oracle calls.

    Amplitude amplification with a damping ancilla: the good subspace is
    "x_i = 1 and ancilla = 1", with the ancilla rotated so that the effective
    angle divides pi/2 exactly into 2m + 1 parts.  The phase flip on the good
    subspace uses one bit-flip oracle call: the answer qubit is |+> when the
    ancilla is 0 and |-> when it is 1.
    """
    _check_power_of_two(n)
    x = np.asarray(x)
    iters = exact_search_iterations(n)
    theta = math.asin(1 / math.sqrt(n))
    target = math.pi / (2 * (2 * iters + 1))
    sin_beta = min(1.0, math.sin(target) / math.sin(theta))
    beta = math.asin(sin_beta)

    layout = Layout(n, workspace=1)
    m = layout.m
    a, anc = layout.answer_qubit, layout.answer_qubit + 1
    ry = np.array([[math.cos(beta), -math.sin(beta)], [math.sin(beta), math.cos(beta)]], dtype=complex)
    prep = on_qubits(m, {**{q: H for q in range(layout.n_index)}, a: H, anc: ry})
    cz = np.diag([(-1.0) ** (((i >> (m - 1 - a)) & 1) & ((i >> (m - 1 - anc)) & 1)) for i in range(2 ** m)]).astype(complex)
    start = prep[:, 0]
    # reflection about A|0> restricted to index (x) ancilla; answer stays |+>
    psi0 = start.reshape(2 ** layout.n_index, 2, 2).sum(axis=1) / math.sqrt(2)
    psi0 = psi0.reshape(-1)
    state = start
    X = x[None, :]
    for _ in range(iters):
        state = cz @ state
        state = apply_oracle_batch(state[None, :], X, layout)[0]
        state = cz @ state
        state = _reflect(state, psi0, layout)
        _check_norm(state[None, :], "exact-search iterate")
    probs = (np.abs(state.reshape(layout.shape)) ** 2).sum(axis=(1, 2))
    return probs, iters


def _reflect(state: np.ndarray, psi0: np.ndarray, layout: Layout) -> np.ndarray:
    """Apply 2|psi0><psi0| - I on (index, ancilla), identity on the answer bit."""
    psi = state.reshape(layout.shape[0], 2, 2)  # index, answer, ancilla
    v = psi.transpose(1, 0, 2).reshape(2, -1)  # answer x (index, ancilla)
    overlap = v @ psi0.conj()
    v = 2 * np.outer(overlap, psi0) - v
    return v.reshape(2, layout.shape[0], 2).transpose(1, 0, 2).reshape(-1)


def exact_search(n: int, x: Sequence[int], rng: np.random.Generator | int | None = 0) -> ExactSearchResult:
    """Find the unique 1 of ``x`` (promise |x| <= 1) with certainty.

    Runs the amplification, samples the index register, and spends one more
    query to verify the candidate; an unverified candidate yields ``None``.
    """
    rng = np.random.default_rng(rng)
    x = np.asarray(x)
    probs, iters = exact_search_distribution(n, x)
    success = float(probs[x.astype(bool)].sum())
    cand = int(rng.choice(n, p=probs / probs.sum()))
    found = cand if x[cand] else None
    return ExactSearchResult(found, iters + 1, success, int(x.sum()) > 1)


# reductions ----------------------------------------------------------------------

# A k-fold search algorithm: (y, rng) -> (k positions, queries used)
SearchAlgorithm = Callable[[np.ndarray, np.random.Generator], tuple[list[int], int]]
# A k-fold OR algorithm: (list of k blocks, rng) -> (k bits, queries used)
OrAlgorithm = Callable[[list, np.random.Generator], tuple[list[int], int]]


class KFoldExactSearch:
    """Exact search run independently on each of the k blocks of an N = kn input."""

    def __init__(self, n: int, k: int):
        self.n, self.k = n, k

    def __call__(self, y: np.ndarray, rng: np.random.Generator) -> tuple[list[int], int]:
        positions, queries = [], 0
        for b in range(self.k):
            block = y[b * self.n:(b + 1) * self.n]
            res = exact_search(self.n, block, rng)
            queries += res.queries
            pos = res.found if res.found is not None else 0
            positions.append(b * self.n + pos)
        return positions, queries


@dataclass
class ThresholdRun:
    accept: bool
    queries: int
    distinct_blocks: bool


def search_to_threshold(A: SearchAlgorithm, N: int, k: int, x: Sequence[int], rng_seed) -> ThresholdRun:
    """Permute x, run the k-fold search A, verify its k outputs with k more queries.

    Accepts iff at least k/2 distinct verified positions hold a 1, so inputs of
    weight below k/2 are always rejected.
    """
    if N % k:
        raise ValueError("N must be k * n")
    n = N // k
    rng = np.random.default_rng(rng_seed)
    x = np.asarray(x)
    perm = rng.permutation(N)
    y = x[perm]
    positions, queries = A(y, rng)
    if len(positions) != k:
        raise ValueError("search algorithm must output k positions")
    ones = {p for p in positions if y[p]}
    queries += k
    marked_blocks = [p // n for p in np.nonzero(y)[0]]
    distinct = len(set(marked_blocks)) == len(marked_blocks)
    return ThresholdRun(2 * len(ones) >= k, queries, distinct)


class PerfectOr:
    """Returns the correct OR vector and charges a fixed query cost."""

    def __init__(self, cost: int):
        self.cost = cost

    def __call__(self, blocks, rng):
        return [int(np.any(b)) for b in blocks], self.cost


class NoisyOr:
    """Correct with probability sigma per call; otherwise flips one random output bit."""

    def __init__(self, cost: int, sigma: float):
        self.cost, self.sigma = cost, sigma

    def __call__(self, blocks, rng):
        out = [int(np.any(b)) for b in blocks]
        if rng.random() >= self.sigma:
            i = int(rng.integers(len(out)))
            out[i] ^= 1
        return out, self.cost


@dataclass
class OrSearchResult:
    positions: list
    queries: int
    or_calls: int


def or_to_search(A: OrAlgorithm, s: int, xs: Sequence[Sequence[int]], rng_seed) -> OrSearchResult:
    """Turn a k-fold OR algorithm into k-fold search.

    One call of A on the full blocks, s halving rounds (each a single call of
    A on the current left halves), then exact search on every remaining part
    of size n / 2^s.  Positions are block-relative; ``None`` for blocks judged
    empty or whose final search fails verification.
    """
    rng = np.random.default_rng(rng_seed)
    blocks = [np.asarray(x) for x in xs]
    n = len(blocks[0])
    if any(len(b) != n for b in blocks):
        raise ValueError("blocks must have equal length")
    if n % (2 ** s):
        raise ValueError("n must be divisible by 2^s")
    ors, queries = A(blocks, rng)
    calls = 1
    lo = [0] * len(blocks)
    size = n
    for _ in range(s):
        half = size // 2
        left = [b[l:l + half] for b, l in zip(blocks, lo)]
        bits, q = A(left, rng)
        queries += q
        calls += 1
        for i, bit in enumerate(bits):
            if ors[i] and not bit:
                lo[i] += half
        size = half
    positions = []
    for i, b in enumerate(blocks):
        res = exact_search(size, b[lo[i]:lo[i] + size], rng)
        queries += res.queries
        positions.append(lo[i] + res.found if ors[i] and res.found is not None else None)
    return OrSearchResult(positions, queries, calls)


# symmetrization -----------------------------------------------------------------


@dataclass
class SymmetrizedProfile:
    n: int
    T: int
    values: np.ndarray
    poly: Poly
    degree: int
    residual: float


def weight_class_means(A: QueryAlgorithm, n: int) -> np.ndarray:
    if n > MAX_SYMMETRIZE_BITS:
        raise ValueError(f"symmetrization enumerates 2^n inputs; n <= {MAX_SYMMETRIZE_BITS}")
    if A.N != n:
        raise ValueError("algorithm input length differs from n")
    X = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8)
    acc = A.acceptance_batch(X)
    weights = X.sum(axis=1)
    return np.array([acc[weights == w].mean() for w in range(n + 1)])


def fit_profile(values: np.ndarray, degree: int) -> tuple[Poly, float]:
    """Least-squares degree-``degree`` fit on {0..n} in the [0, n] Chebyshev basis; max residual."""
    n = len(values) - 1
    degree = min(degree, n)
    from .extremal import chebyshev_rows

    V = chebyshev_rows(range(n + 1), degree, 0, max(n, 1))
    coef, *_ = np.linalg.lstsq(V, values, rcond=None)
    residual = float(np.max(np.abs(V @ coef - values)))
    return Poly.chebyshev_basis(coef.tolist(), 0, max(n, 1)), residual


def symmetrize(A: QueryAlgorithm, n: int) -> SymmetrizedProfile:
    """Average acceptance over each Hamming-weight class and fit a degree-2T polynomial."""
    values = weight_class_means(A, n)
    degree = min(2 * A.T, n)
    poly, residual = fit_profile(values, degree)
    return SymmetrizedProfile(n, A.T, values, poly, degree, residual)
