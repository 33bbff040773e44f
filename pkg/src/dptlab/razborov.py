"""Combinatorial matrices on w-subsets of [N] and the low-degree truncation of protocol matrices.

``mu_i`` is the uniform distribution on pairs (x, y) of w-subsets with
|x & y| = i.  The matrices commute and share w + 1 eigenspaces; on the
eigenspace labelled t the eigenvalue of ``mu_i`` is a degree-t polynomial in i.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

MAX_SUBSETS = 4096
FIT_TOL = 1e-9


class LabelingError(RuntimeError):
    pass


def _guard(N: int, w: int) -> int:
    if not 0 <= w <= N // 2:
        raise ValueError("need 0 <= w <= N/2")
    size = math.comb(N, w)
    if size > MAX_SUBSETS:
        raise ValueError(f"C({N},{w}) = {size} exceeds the size guard {MAX_SUBSETS}")
    return size


def subsets_colex(N: int, w: int) -> list[tuple[int, ...]]:
    return sorted(itertools.combinations(range(N), w), key=lambda s: s[::-1])


def intersection_matrix(N: int, w: int) -> np.ndarray:
    """|x & y| for every pair of w-subsets in colex order."""
    _guard(N, w)
    subs = subsets_colex(N, w)
    S = np.zeros((len(subs), N), dtype=np.int64)
    for r, s in enumerate(subs):
        S[r, list(s)] = 1
    return S @ S.T


def class_size(N: int, w: int, i: int) -> int:
    """Number of ordered pairs (x, y) with |x & y| = i."""
    return math.comb(N, w) * math.comb(w, i) * math.comb(N - w, w - i)


@dataclass
class CMatrix:
    N: int
    w: int
    i: int
    entries: np.ndarray

    @property
    def weight(self) -> Fraction:
        return Fraction(1, class_size(self.N, self.w, self.i))


def build_mu(N: int, w: int, i: int, inter: np.ndarray | None = None) -> CMatrix:
    if not 0 <= i <= w:
        raise ValueError("need 0 <= i <= w")
    if inter is None:
        inter = intersection_matrix(N, w)
    count = class_size(N, w, i)
    if count == 0:
        raise ValueError(f"no pairs with intersection {i} at N={N}, w={w}")
    entries = (inter == i).astype(float) / count
    return CMatrix(N, w, i, entries)


def check_commutation(N: int, w: int) -> float:
    inter = intersection_matrix(N, w)
    mus = [build_mu(N, w, i, inter).entries for i in range(w + 1)]
    worst = 0.0
    for a, b in itertools.combinations(mus, 2):
        worst = max(worst, float(np.abs(a @ b - b @ a).max()))
    return worst


# exact eigenvalues (Johnson scheme) ---------------------------------------------


def eberlein(N: int, w: int, j: int, t: int) -> int:
    """Eigenvalue on eigenspace t of the relation "|x & y| = w - j" (adjacency, unnormalized)."""
    return sum(
        (-1) ** h * math.comb(t, h) * math.comb(w - t, j - h) * math.comb(N - w - t, j - h)
        for h in range(j + 1)
    )


def exact_lambda(N: int, w: int, i: int, t: int) -> Fraction:
    """Exact eigenvalue of mu_i on eigenspace t."""
    j = w - i
    return Fraction(eberlein(N, w, j, t), class_size(N, w, i))


def eigenspace_dimension(N: int, t: int) -> int:
    return math.comb(N, t) - (math.comb(N, t - 1) if t else 0)


def _newton_fit(xs, ys) -> list[Fraction]:
    """Exact interpolating polynomial (monomial coefficients) through the points."""
    n = len(xs)
    coef = list(ys)
    for level in range(1, n):
        for r in range(n - 1, level - 1, -1):
            coef[r] = (coef[r] - coef[r - 1]) / (xs[r] - xs[r - level])
    poly = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        # poly = poly * (x - xs[r]) + coef[r]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[r] * p for s, p in zip(shifted, poly)]
        poly[0] += coef[r]
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def _fit_residual(values: np.ndarray, degree: int) -> float:
    n = len(values) - 1
    if degree >= n:
        return 0.0
    if degree < 0:
        return float(np.abs(values).max())
    x = np.arange(n + 1, dtype=float)
    u = 2 * x / max(n, 1) - 1
    V = np.polynomial.chebyshev.chebvander(u, degree)
    coef, *_ = np.linalg.lstsq(V, values, rcond=None)
    return float(np.abs(V @ coef - values).max())


def min_fit_degree(values: np.ndarray, tol: float = FIT_TOL) -> int:
    for d in range(len(values)):
        if _fit_residual(values, d) <= tol:
            return d
    return len(values) - 1


@dataclass
class CMTable:
    N: int
    w: int
    multiplicities: list
    lam: np.ndarray  # lam[i][t]
    fit_certificates: list  # per t: exact monomial coefficients in i (as Fractions)
    bases: list = field(default_factory=list, repr=False)  # orthonormal basis per eigenspace
    inter: np.ndarray | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return math.comb(self.N, self.w)

    def to_json(self) -> str:
        return json.dumps(
            {
                "N": self.N,
                "w": self.w,
                "multiplicities": list(self.multiplicities),
                "lambda": [[float(v) for v in row] for row in self.lam],
                "fit_certificates": [[str(c) for c in cert] for cert in self.fit_certificates],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "CMTable":
        d = json.loads(text)
        return cls(
            d["N"],
            d["w"],
            d["multiplicities"],
            np.array(d["lambda"], dtype=float),
            [[Fraction(c) for c in cert] for cert in d["fit_certificates"]],
        )


def _generic_weights(w: int) -> np.ndarray:
    # fixed, pairwise "irrational" weights so distinct eigenspaces get distinct eigenvalues
    return np.array([math.sqrt(2 + i) + math.pi * i for i in range(w + 1)])


def cm_spectrum(N: int, w: int) -> CMTable:
    """Common eigenspaces of mu_0..mu_w, labelled by polynomial degree.

    A fixed generic combination of the mu_i is diagonalized, its eigenvalues
    are clustered, and each cluster's eigenvalues of every mu_i (Rayleigh
    traces) are fitted as a polynomial in i.  Cluster t is the one whose fit
    has exact degree t.  Exact certificates come from the closed-form
    Johnson-scheme eigenvalues and are checked against the numerics.
    """
    n_sub = _guard(N, w)
    inter = intersection_matrix(N, w)
    mus = [build_mu(N, w, i, inter).entries for i in range(w + 1)]
    weights = _generic_weights(w)
    M = sum(c * m for c, m in zip(weights, mus)) * n_sub
    evals, evecs = np.linalg.eigh(M)
    order = np.argsort(evals)
    evals, evecs = evals[order], evecs[:, order]
    scale = max(1.0, float(np.abs(evals).max()))
    cuts = [0] + [j for j in range(1, len(evals)) if evals[j] - evals[j - 1] > 1e-7 * scale] + [len(evals)]
    clusters = [evecs[:, a:b] for a, b in zip(cuts[:-1], cuts[1:])]
    if len(clusters) != w + 1:
        raise LabelingError(f"found {len(clusters)} eigenvalue clusters, expected {w + 1}")

    rows = []
    for V in clusters:
        dim = V.shape[1]
        rows.append(np.array([np.trace(V.T @ mu @ V) / dim for mu in mus]))
    degrees = [min_fit_degree(r * n_sub) for r in rows]
    if sorted(degrees) != list(range(w + 1)):
        raise LabelingError(f"degree labelling is not a bijection onto 0..{w}: cluster degrees {degrees}")
    label = {deg: c for c, deg in enumerate(degrees)}

    lam = np.array([[rows[label[t]][i] for t in range(w + 1)] for i in range(w + 1)])
    bases = [clusters[label[t]] for t in range(w + 1)]
    mults = [b.shape[1] for b in bases]

    certs = []
    for t in range(w + 1):
        xs = [Fraction(i) for i in range(w + 1)]
        ys = [exact_lambda(N, w, i, t) for i in range(w + 1)]
        coeffs = _newton_fit(xs, ys)
        if len(coeffs) - 1 != t:
            raise LabelingError(f"exact eigenvalues on eigenspace {t} have degree {len(coeffs) - 1}")
        approx = np.array([float(y) for y in ys])
        if np.abs(approx - lam[:, t]).max() * n_sub > FIT_TOL:
            raise LabelingError(f"numeric eigenvalues on eigenspace {t} disagree with the closed form")
        certs.append(coeffs)
    return CMTable(N, w, mults, lam, certs, bases, inter)


def fit_report(table: CMTable) -> list[dict]:
    """Per eigenspace: residual of the degree-t fit and of the degree-(t-1) fit (scaled by C(N, w))."""
    out = []
    for t in range(table.w + 1):
        col = table.lam[:, t] * table.size
        out.append({"t": t, "fit": _fit_residual(col, t), "fit_lower": _fit_residual(col, t - 1) if t else None})
    return out


@dataclass
class DecayReport:
    N: int
    w: int
    rows: list  # dicts: i, t, lambda, bound, ok
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations


def decay_check(table: CMTable) -> DecayReport:
    """Compare |lambda_it| with 2^(-t/4) / C(N, w) for every t and every i <= N/8."""
    rows, bad = [], []
    for i in range(min(table.w, table.N // 8) + 1):
        for t in range(table.w + 1):
            val = float(table.lam[i, t])
            bound = 2.0 ** (-t / 4) / table.size
            ok = abs(val) <= bound * (1 + 1e-12)
            row = {"i": i, "t": t, "lambda": val, "bound": bound, "ok": ok}
            rows.append(row)
            if not ok:
                bad.append(row)
    return DecayReport(table.N, table.w, rows, bad)


@dataclass
class ProtocolPolyDecomp:
    a: np.ndarray  # per-eigenspace traces a_t
    P_values: np.ndarray  # <P, mu_i>
    p_values: np.ndarray  # sum_t a_t lambda_it
    q_values: np.ndarray  # degree-d truncation
    d: int
    Q: int
    checked: int  # i ranges over 0..checked
    tail_bound: float
    max_error: float
    certificate: bool
    closed_form: float | None

    @property
    def within_tail_bound(self) -> bool:
        return self.max_error <= self.tail_bound * (1 + 1e-9) + 1e-12

    @property
    def within_closed_form(self) -> bool | None:
        if self.closed_form is None:
            return None
        return self.max_error <= self.closed_form


def truncate_protocol_polynomial(P: np.ndarray, table: CMTable, d: int, Q: int) -> ProtocolPolyDecomp:
    """Eigenspace decomposition of P and its degree-d truncation q(i) = sum_{t<=d} a_t lambda_it."""
    P = np.asarray(P, dtype=float)
    n_sub = table.size
    if P.shape != (n_sub, n_sub):
        raise ValueError(f"P must be {n_sub}x{n_sub}")
    if P.min() < 0 or P.max() > 1:
        raise ValueError("P entries must lie in [0, 1]")
    if not 0 <= d <= table.w:
        raise ValueError("need 0 <= d <= w")
    if not table.bases or table.inter is None:
        raise ValueError("table carries no eigenbases; rebuild it with cm_spectrum")
    w = table.w
    mus = [build_mu(table.N, w, i, table.inter).entries for i in range(w + 1)]
    P_values = np.array([float(np.sum(P * mu)) for mu in mus])
    a = np.array([float(np.trace(V.T @ P @ V)) for V in table.bases])
    lam = table.lam
    p_values = lam @ a
    q_values = lam[:, : d + 1] @ a[: d + 1]
    top = min(w, table.N // 8)
    tail = np.abs(a[d + 1:]).sum()
    lam_tail = np.abs(lam[: top + 1, d + 1:]).max() if d < w else 0.0
    tail_bound = float(tail * lam_tail)
    max_error = float(np.abs(P_values[: top + 1] - q_values[: top + 1]).max())
    certificate = bool(np.abs(a).sum() <= n_sub * 2.0 ** (2 * Q - 2))
    closed = 2.0 ** (-d / 4 + 2 * Q) if certificate else None
    return ProtocolPolyDecomp(a, P_values, p_values, q_values, d, Q, top, tail_bound, max_error, certificate, closed)
