"""Univariate polynomials over exact rationals or float64.

Coefficients are stored low-order first.  A polynomial lives either in the
monomial basis or in the Chebyshev basis of an interval ``[lo, hi]``, where
``T_j`` is composed with the affine map sending ``[lo, hi]`` onto ``[-1, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

MONOMIAL = "monomial"
CHEBYSHEV = "chebyshev"


def _as_field(values: Iterable, exact: bool) -> tuple:
    if exact:
        return tuple(Fraction(v) for v in values)
    return tuple(float(v) for v in values)


def _trim(coeffs: Sequence) -> tuple:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


def _is_exact(values: Iterable) -> bool:
    return all(isinstance(v, Rational) for v in values)


@dataclass(frozen=True)
class Poly:
    """Immutable polynomial.

    ``interval`` is only meaningful for the Chebyshev basis; the monomial basis
    ignores it.  Trailing zero coefficients are stripped on construction so the
    zero polynomial has ``coeffs == ()`` and degree -1.
    """

    coeffs: tuple
    basis: str = MONOMIAL
    interval: tuple = (-1, 1)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(tuple(self.coeffs)))
        if self.basis not in (MONOMIAL, CHEBYSHEV):
            raise ValueError(f"unknown basis {self.basis!r}")
        lo, hi = self.interval
        if not lo < hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")

    # construction -------------------------------------------------------

    @classmethod
    def monomial(cls, coeffs: Iterable, exact: bool | None = None) -> "Poly":
        coeffs = list(coeffs)
        if exact is None:
            exact = _is_exact(coeffs)
        return cls(_as_field(coeffs, exact))

    @classmethod
    def chebyshev_basis(cls, coeffs: Iterable, lo=-1, hi=1, exact: bool | None = None) -> "Poly":
        coeffs = list(coeffs)
        if exact is None:
            exact = _is_exact(coeffs) and _is_exact((lo, hi))
        if exact:
            lo, hi = Fraction(lo), Fraction(hi)
        return cls(_as_field(coeffs, exact), CHEBYSHEV, (lo, hi))

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls.monomial([c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        """Monic polynomial prod (x - r)."""
        p = cls.constant(Fraction(1))
        for r in roots:
            p = p * cls.monomial([-Fraction(r), Fraction(1)])
        return p

    # basic properties ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return _is_exact(self.coeffs) and (self.basis == MONOMIAL or _is_exact(self.interval))

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __repr__(self):
        if self.basis == MONOMIAL:
            return f"Poly({list(self.coeffs)!r})"
        return f"Poly({list(self.coeffs)!r}, chebyshev on {list(self.interval)!r})"

    # evaluation ---------------------------------------------------------

    def __call__(self, x):
        return evaluate(self, x)

    # arithmetic (monomial basis) ---------------------------------------

    def _mono(self) -> "Poly":
        return self if self.basis == MONOMIAL else to_monomial(self)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        a, b = self._mono().coeffs, other._mono().coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        p = self._mono()
        return Poly(tuple(-c for c in p.coeffs))

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(tuple(c * other for c in self._mono().coeffs))
        a, b = self._mono().coeffs, other._mono().coeffs
        if not a or not b:
            return Poly.zero()
        out = [a[0] * 0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other: "Poly"):
        return poly_divmod(self, other)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if self.basis == other.basis == MONOMIAL:
            return self.coeffs == other.coeffs
        if self.basis == other.basis and self.interval == other.interval:
            return self.coeffs == other.coeffs
        return self._mono().coeffs == other._mono().coeffs

    def __hash__(self):
        return hash((self.coeffs, self.basis, tuple(self.interval)))


def evaluate(p: Poly, x):
    """Value of ``p`` at ``x``; Horner for monomials, Clenshaw for Chebyshev.

    Exact inputs give exact outputs.  Chebyshev polynomials may be evaluated
    outside their interval.
    """
    if isinstance(x, float) or not p.exact:
        x = float(x) if not isinstance(x, Rational) or not p.exact else x
    if not p.coeffs:
        return Fraction(0) if p.exact and isinstance(x, Rational) else 0.0
    if p.basis == MONOMIAL:
        acc = p.coeffs[-1] * 1
        for c in reversed(p.coeffs[:-1]):
            acc = acc * x + c
        return acc
    lo, hi = p.interval
    u = (2 * x - lo - hi) / (hi - lo)
    # Clenshaw recurrence
    b1 = b2 = 0 * u
    for c in reversed(p.coeffs[1:]):
        b1, b2 = 2 * u * b1 - b2 + c, b1
    return u * b1 - b2 + p.coeffs[0]


def horner_reference(coeffs: Sequence, x):
    """Plain power-sum evaluation, kept separate from :func:`evaluate`."""
    total = 0
    power = 1
    for c in coeffs:
        total += c * power
        power *= x
    return total


def chebyshev(d: int) -> Poly:
    """Monomial-basis T_d with integer coefficients, by the three-term recurrence."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    prev = [Fraction(1)]
    if d == 0:
        return Poly(tuple(prev))
    cur = [Fraction(0), Fraction(1)]
    for _ in range(d - 1):
        nxt = [Fraction(0)] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return Poly(tuple(cur))


def chebyshev_closed_form(d: int, x: float) -> float:
    """Closed form ((x + s)^d + (x - s)^d) / 2 with s = sqrt(x^2 - 1), for |x| >= 1."""
    s = math.sqrt(x * x - 1)
    return ((x + s) ** d + (x - s) ** d) / 2


def paturi_bound(d: int, mu: float) -> float:
    """Upper bound exp(2 d sqrt(2 mu + mu^2)) on T_d(1 + mu)."""
    if d < 0 or mu < 0:
        raise ValueError("need d >= 0 and mu >= 0")
    return math.exp(2 * d * math.sqrt(2 * mu + mu * mu))


def poly_divmod(p: Poly, divisor: Poly) -> tuple[Poly, Poly]:
    """Long division in the monomial basis: p = q * divisor + r, deg r < deg divisor."""
    num = list(p._mono().coeffs)
    den = divisor._mono().coeffs
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return Poly.zero(), Poly(tuple(num))
    quot = [0 * den[-1]] * (len(num) - dd)
    for shift in range(len(num) - 1 - dd, -1, -1):
        coef = num[shift + dd] / den[-1]
        quot[shift] = coef
        for j, c in enumerate(den):
            num[shift + j] -= coef * c
    return Poly(tuple(quot)), Poly(tuple(num[:dd]))


def divide_out_roots(p: Poly, roots: Sequence[int]) -> tuple[Poly, Poly]:
    """Split p = q * prod_{j in roots} (x - j) + r with deg r < len(roots)."""
    if len(set(roots)) != len(roots):
        raise ValueError("roots must be distinct")
    return poly_divmod(p, Poly.from_roots(roots))


def _affine_compose(coeffs: Sequence, scale, shift) -> list:
    """Coefficients of sum c_j (scale*y + shift)^j as a polynomial in y."""
    out = [0 * scale] * len(coeffs)
    power = [1 + 0 * scale]  # (scale*y + shift)^0
    for j, c in enumerate(coeffs):
        for i, v in enumerate(power):
            out[i] += c * v
        nxt = [0 * scale] * (len(power) + 1)
        for i, v in enumerate(power):
            nxt[i] += v * shift
            nxt[i + 1] += v * scale
        power = nxt
    return out


def to_monomial(p: Poly) -> Poly:
    if p.basis == MONOMIAL:
        return p
    if not p.coeffs:
        return Poly.zero()
    one = p.coeffs[0] * 0 + 1
    # Chebyshev in u -> power series in u
    prev, cur = [one], [0 * one, one]
    in_u = [0 * one] * len(p.coeffs)
    for j, c in enumerate(p.coeffs):
        t = prev if j == 0 else cur
        if j >= 2:
            nxt = [0 * one] + [2 * v for v in cur]
            for i, v in enumerate(prev):
                nxt[i] -= v
            prev, cur = cur, nxt
            t = cur
        for i, v in enumerate(t):
            in_u[i] += c * v
    lo, hi = p.interval
    # u = (2x - lo - hi) / (hi - lo)
    scale = 2 / (hi - lo) if not isinstance(hi - lo, Rational) else Fraction(2) / (hi - lo)
    shift = -(lo + hi) * scale / 2
    return Poly(tuple(_affine_compose(in_u, scale, shift)))


def to_chebyshev(p: Poly, lo=-1, hi=1) -> Poly:
    """Re-express ``p`` in the Chebyshev basis of ``[lo, hi]``."""
    mono = to_monomial(p)
    exact = mono.exact and _is_exact((lo, hi))
    if exact:
        lo, hi = Fraction(lo), Fraction(hi)
    else:
        lo, hi = float(lo), float(hi)
        mono = Poly(tuple(float(c) for c in mono.coeffs))
    if not mono.coeffs:
        return Poly((), CHEBYSHEV, (lo, hi))
    # x = (hi - lo)/2 * u + (hi + lo)/2
    in_u = _affine_compose(mono.coeffs, (hi - lo) / 2, (hi + lo) / 2)
    # power basis -> Chebyshev via u * T_j = (T_{j+1} + T_{j-1}) / 2
    n = len(in_u)
    zero = in_u[0] * 0
    cheb = [zero] * n
    power = [zero] * n  # Chebyshev coefficients of u^j
    power[0] = zero + 1
    for j, c in enumerate(in_u):
        if j > 0:
            nxt = [zero] * n
            for i, v in enumerate(power):
                if v == 0:
                    continue
                # deg(u^(j-1)) = j - 1, so i + 1 <= j < n
                if i == 0:
                    nxt[1] += v
                else:
                    nxt[i + 1] += v / 2
                    nxt[i - 1] += v / 2
            power = nxt
        for i, v in enumerate(power):
            cheb[i] += c * v
    return Poly(tuple(cheb), CHEBYSHEV, (lo, hi))
