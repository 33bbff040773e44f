from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dptlab.extremal import (
    ExtremalSpec,
    approx_degree,
    approx_degree_sweep,
    chebyshev_extremality_check,
    cr_probe,
    probe_cr_constant,
    solve_extremal,
    sigma_star,
)
from dptlab.poly import chebyshev_closed_form, evaluate


class TestSigmaStar:
    def test_frozen_value_all_formulations_agree(self):
        spec = ExtremalSpec(16, 2, 5, 0)
        exact = sigma_star(spec, "rational")
        assert exact == Fraction(1154, 3575)
        assert sigma_star(spec, "rational", "monomial") == exact
        assert float(sigma_star(spec)) == pytest.approx(float(exact), abs=1e-10)
        assert float(sigma_star(spec, basis="monomial")) == pytest.approx(float(exact), abs=1e-9)

    @pytest.mark.parametrize(
        "N,k,D,value",
        [(8, 1, 2, Fraction(7, 16)), (10, 2, 4, Fraction(16, 45)), (12, 3, 5, Fraction(254, 1925)),
         (16, 1, 3, Fraction(121, 256))],
    )
    def test_frozen_rationals(self, N, k, D, value):
        assert sigma_star(ExtremalSpec(N, k, D, 0), "rational") == value

    def test_with_delta_uses_general_formulation(self):
        assert sigma_star(ExtremalSpec(10, 1, 3, Fraction(1, 10)), "rational") == Fraction(143, 175)

    def test_degree_below_k_is_zero(self):
        assert sigma_star(ExtremalSpec(10, 1, 0, 0)) == 0
        assert sigma_star(ExtremalSpec(20, 5, 3, 0), "rational") == 0

    def test_k_zero_constant_polynomial(self):
        assert sigma_star(ExtremalSpec(6, 0, 0, 0), "rational") == 1

    def test_full_degree_interpolates(self):
        # D = N: the indicator of {k} is a feasible degree-N polynomial
        assert sigma_star(ExtremalSpec(6, 2, 6, 0), "rational") == 1

    def test_degree_cap_above_N_rejected(self):
        with pytest.raises(ValueError):
            sigma_star(ExtremalSpec(4, 1, 9, 0))

    def test_witness_is_feasible(self):
        value, poly, sol = solve_extremal(ExtremalSpec(12, 2, 6, 0), "rational")
        assert poly.exact
        for i in range(13):
            v = evaluate(poly, i)
            assert (v == 0) if i < 2 else (0 <= v <= 1)
        assert evaluate(poly, 2) == value

    @given(st.integers(4, 14), st.integers(1, 3), st.integers(0, 6))
    def test_monotone_in_degree(self, N, k, D):
        D = min(D, N - 1)
        lo = float(sigma_star(ExtremalSpec(N, k, D, 0)))
        hi = float(sigma_star(ExtremalSpec(N, k, D + 1, 0)))
        assert -1e-9 <= lo <= hi + 1e-9
        assert hi <= 1 + 1e-9


class TestApproxDegree:
    def test_frozen_table(self):
        assert [approx_degree(n, mode="rational") for n in range(1, 13)] == [1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3]

    def test_binary_search_matches_sweep(self):
        for n in (5, 9, 16):
            sweep = approx_degree_sweep(n, mode="rational")
            assert sweep.index(True) + 1 == approx_degree(n, mode="rational")
            assert all(sweep[sweep.index(True):])  # feasibility is monotone

    def test_n16_and_n32(self):
        assert approx_degree(16) == 4
        assert approx_degree(32) == 5

    def test_bad_eps(self):
        with pytest.raises(ValueError):
            approx_degree(4, Fraction(1, 2))


class TestChebyshevExtremality:
    def test_degree_one_exact(self):
        lp, cheb = chebyshev_extremality_check(1, 0.5, 16)
        assert lp == pytest.approx(1.5)
        assert cheb == pytest.approx(1.5)

    @pytest.mark.parametrize("d,mu,grid", [(2, 0.5, 64), (4, 0.2, 256), (6, 0.1, 512)])
    def test_lp_at_least_chebyshev_and_close(self, d, mu, grid):
        lp, cheb = chebyshev_extremality_check(d, mu, grid)
        assert cheb == pytest.approx(chebyshev_closed_form(d, 1 + mu))
        assert lp >= cheb - 1e-9
        assert lp <= cheb * 1.01

    def test_gap_shrinks_with_grid(self):
        coarse, cheb = chebyshev_extremality_check(4, 0.3, 32)
        fine, _ = chebyshev_extremality_check(4, 0.3, 512)
        assert fine - cheb <= coarse - cheb + 1e-12


class TestCRProbe:
    def test_degree_zero(self):
        assert cr_probe(8, 0).worst_ratio == 1.0

    def test_ratio_and_witness(self):
        r = cr_probe(10, 1)
        assert r.worst_ratio == pytest.approx(0.905, abs=5e-3)
        assert 0 < r.argmax <= 5
        assert float(evaluate(r.witness, r.argmax)) == pytest.approx(r.peak, rel=1e-9)
        for i in range(11):
            assert abs(float(evaluate(r.witness, i))) <= 1 + 1e-9

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            cr_probe(8, 2, samples=5)

    def test_probe_constant_is_max(self):
        pairs = [(8, 1), (8, 2)]
        assert probe_cr_constant(pairs) == max(cr_probe(n, d).worst_ratio for n, d in pairs)
