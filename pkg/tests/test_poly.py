from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dptlab.poly import (
    Poly,
    chebyshev,
    chebyshev_closed_form,
    divide_out_roots,
    evaluate,
    horner_reference,
    paturi_bound,
    poly_divmod,
    to_chebyshev,
    to_monomial,
)

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


class TestConstruction:
    def test_trailing_zeros_trimmed(self):
        p = Poly.monomial([1, 2, 0, 0])
        assert p.coeffs == (1, 2)
        assert p.degree == 1

    def test_zero_polynomial_degree(self):
        assert Poly.zero().degree == -1
        assert Poly.monomial([0, 0]).degree == -1

    def test_bad_basis_and_interval(self):
        with pytest.raises(ValueError):
            Poly((1,), basis="legendre")
        with pytest.raises(ValueError):
            Poly.chebyshev_basis([1], 2, 2)

    def test_from_roots(self):
        p = Poly.from_roots([0, 1])
        assert p.coeffs == (0, -1, 1)


class TestChebyshev:
    def test_t3_at_two(self):
        assert evaluate(chebyshev(3), 2) == 26

    def test_integer_coefficients(self):
        assert chebyshev(4).coeffs == (1, 0, -8, 0, 8)

    @pytest.mark.parametrize("d", [0, 1, 2, 5, 9])
    def test_closed_form_outside_interval(self, d):
        for x in (1.0, 1.3, 2.5, -1.7):
            assert float(evaluate(chebyshev(d), x)) == pytest.approx(chebyshev_closed_form(d, x), rel=1e-12)

    @given(st.integers(0, 30), st.floats(0, 3))
    def test_paturi_bound_dominates_growth(self, d, mu):
        assert chebyshev_closed_form(d, 1 + mu) <= paturi_bound(d, mu) * (1 + 1e-12)

    def test_paturi_bound_value(self):
        assert paturi_bound(0, 0.7) == 1.0
        with pytest.raises(ValueError):
            paturi_bound(-1, 0.1)

    def test_bounded_on_interval(self):
        xs = np.linspace(-1, 1, 201)
        for d in range(8):
            assert np.all(np.abs([float(evaluate(chebyshev(d), x)) for x in xs]) <= 1 + 1e-12)


class TestArithmetic:
    def test_divmod_example(self):
        # x^2 = 1 * x(x-1) + x
        q, r = poly_divmod(Poly.monomial([0, 0, 1]), Poly.from_roots([0, 1]))
        assert q.coeffs == (1,)
        assert r.coeffs == (0, 1)

    def test_divide_out_roots_exact(self):
        p = Poly.from_roots([0, 1, 2]) * Poly.monomial([Fraction(3), Fraction(1)])
        q, r = divide_out_roots(p, [0, 1, 2])
        assert r.degree == -1
        assert q.coeffs == (3, 1)

    @given(st.lists(small_fracs, min_size=1, max_size=6), st.lists(small_fracs, min_size=1, max_size=4))
    def test_divmod_identity(self, a, b):
        p, d = Poly.monomial(a), Poly.monomial(b)
        if d.degree < 0:
            return
        q, r = divmod(p, d)
        assert q * d + r == p
        assert r.degree < d.degree

    @given(st.lists(small_fracs, max_size=6), small_fracs)
    def test_evaluate_matches_reference(self, coeffs, x):
        assert evaluate(Poly.monomial(coeffs, exact=True), x) == horner_reference(coeffs, x)

    @given(st.lists(small_fracs, max_size=7), st.integers(0, 5), st.integers(1, 6))
    def test_basis_round_trip_exact(self, coeffs, lo, width):
        p = Poly.monomial(coeffs, exact=True)
        c = to_chebyshev(p, lo, lo + width)
        assert c.basis == "chebyshev"
        assert to_monomial(c) == p
        for x in (Fraction(lo), Fraction(2 * lo + width, 2), Fraction(lo + width + 1)):
            assert evaluate(c, x) == evaluate(p, x)

    @given(st.lists(st.floats(-3, 3), min_size=1, max_size=8), st.floats(-2, 2))
    def test_clenshaw_matches_horner_float(self, coeffs, x):
        c = Poly.chebyshev_basis(coeffs, -1, 1)
        m = to_monomial(c)
        assert float(evaluate(c, x)) == pytest.approx(float(evaluate(m, x)), abs=1e-9 * (1 + sum(map(abs, coeffs))) * 2 ** len(coeffs))
