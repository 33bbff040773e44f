import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dptlab import razborov
from dptlab.razborov import (
    CMTable,
    LabelingError,
    build_mu,
    check_commutation,
    class_size,
    cm_spectrum,
    decay_check,
    eigenspace_dimension,
    exact_lambda,
    fit_report,
    intersection_matrix,
    min_fit_degree,
    subsets_colex,
    truncate_protocol_polynomial,
)


@pytest.fixture(scope="module")
def table_8_2():
    return cm_spectrum(8, 2)


@pytest.fixture(scope="module")
def table_12_3():
    return cm_spectrum(12, 3)


class TestConstruction:
    def test_colex_order(self):
        assert subsets_colex(4, 2) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]

    def test_class_sizes_partition(self):
        for N, w in ((8, 2), (12, 3), (10, 5)):
            assert sum(class_size(N, w, i) for i in range(w + 1)) == math.comb(N, w) ** 2

    def test_mu_examples(self):
        diag = build_mu(8, 2, 2)
        assert np.allclose(diag.entries, np.eye(28) / 28)
        m1 = build_mu(8, 2, 1)
        assert np.count_nonzero(m1.entries) == 336
        assert m1.weight == Fraction(1, 336)

    @pytest.mark.parametrize("N,w", [(6, 2), (8, 3), (9, 4)])
    def test_mu_is_symmetric_distribution(self, N, w):
        inter = intersection_matrix(N, w)
        for i in range(w + 1):
            m = build_mu(N, w, i, inter).entries
            assert m.sum() == pytest.approx(1.0)
            assert np.array_equal(m, m.T)
            assert np.all((m > 0) == (inter == i))

    def test_commutation(self):
        assert check_commutation(8, 2) <= 1e-10
        assert check_commutation(12, 3) <= 1e-10

    def test_guard(self):
        with pytest.raises(ValueError):
            build_mu(30, 15, 1)
        with pytest.raises(ValueError):
            build_mu(8, 5, 1)


class TestExactEigenvalues:
    @pytest.mark.parametrize("N,w", [(7, 2), (8, 3), (10, 3)])
    def test_against_dense_eigensolver(self, N, w):
        # oracle: eigvalsh of each mu_i vs the closed-form values with their multiplicities
        for i in range(w + 1):
            dense = np.sort(np.linalg.eigvalsh(build_mu(N, w, i).entries))
            closed = []
            for t in range(w + 1):
                closed += [float(exact_lambda(N, w, i, t))] * eigenspace_dimension(N, t)
            assert np.allclose(dense, np.sort(closed), atol=1e-12)

    def test_frozen_values(self):
        vals = [[exact_lambda(8, 2, i, t) for t in range(3)] for i in range(3)]
        F = Fraction
        assert vals == [[F(1, 28), F(-1, 84), F(1, 420)], [F(1, 28), F(1, 84), F(-1, 168)], [F(1, 28)] * 3]

    @given(st.integers(2, 14), st.data())
    def test_dimensions_sum(self, N, data):
        w = data.draw(st.integers(0, N // 2))
        assert sum(eigenspace_dimension(N, t) for t in range(w + 1)) == math.comb(N, w)

    def test_trivial_eigenvalue(self):
        for N, w in ((9, 3), (12, 4)):
            for i in range(w + 1):
                assert exact_lambda(N, w, i, 0) == Fraction(1, math.comb(N, w))


class TestSpectrum:
    def test_multiplicities(self, table_8_2, table_12_3):
        assert table_8_2.multiplicities == [1, 7, 20]
        assert table_12_3.multiplicities == [1, 11, 54, 154]
        assert cm_spectrum(16, 4).multiplicities == [1, 15, 104, 440, 1260]

    def test_fit_degrees(self, table_12_3):
        for row in fit_report(table_12_3):
            assert row["fit"] <= 1e-9
            if row["t"]:
                assert row["fit_lower"] > 1e-9

    def test_min_fit_degree(self):
        assert min_fit_degree(np.array([1.0, 2.0, 5.0, 10.0])) == 2
        assert min_fit_degree(np.array([3.0, 3.0, 3.0])) == 0

    def test_bases_are_orthonormal_eigenspaces(self, table_8_2):
        V = np.hstack(table_8_2.bases)
        assert np.allclose(V.T @ V, np.eye(28), atol=1e-10)
        mu1 = build_mu(8, 2, 1).entries
        for t, B in enumerate(table_8_2.bases):
            assert np.allclose(mu1 @ B, table_8_2.lam[1, t] * B, atol=1e-12)

    def test_certificates_reproduce_exact_values(self, table_12_3):
        for t, coeffs in enumerate(table_12_3.fit_certificates):
            for i in range(4):
                val = sum(c * Fraction(i) ** j for j, c in enumerate(coeffs))
                assert val == exact_lambda(12, 3, i, t)

    def test_json_round_trip(self, table_8_2):
        back = CMTable.from_json(table_8_2.to_json())
        assert back.multiplicities == table_8_2.multiplicities
        assert np.array_equal(back.lam, table_8_2.lam)
        assert back.fit_certificates == table_8_2.fit_certificates

    def test_degenerate_combination_raises(self, monkeypatch):
        # these weights give eigenspaces 1 and 2 of (8, 2) the same combined eigenvalue
        monkeypatch.setattr(razborov, "_generic_weights", lambda w: np.array([70.0, 56.0, 1.0]))
        with pytest.raises(LabelingError):
            cm_spectrum(8, 2)


class TestDecayAndTruncation:
    def test_decay_table_16_4(self):
        rep = decay_check(cm_spectrum(16, 4))
        assert len(rep.rows) == 15
        assert Counter(r["i"] for r in rep.rows) == {0: 5, 1: 5, 2: 5}
        assert rep.passed

    def test_reconstruction_identity(self, table_12_3):
        rng = np.random.default_rng(0)
        for _ in range(5):
            P = rng.uniform(0, 1, size=(220, 220))
            dec = truncate_protocol_polynomial(P, table_12_3, 3, 1)
            assert np.allclose(dec.P_values, dec.p_values, atol=1e-9)
            assert np.allclose(dec.q_values, dec.p_values, atol=1e-12)

    def test_all_ones_profile(self, table_8_2):
        dec = truncate_protocol_polynomial(np.ones((28, 28)), table_8_2, 0, 1)
        assert np.allclose(dec.P_values, 1)
        assert np.allclose(dec.q_values, 1)
        assert dec.within_tail_bound

    def test_identity_profile(self, table_8_2):
        dec = truncate_protocol_polynomial(np.eye(28), table_8_2, 2, 1)
        assert np.allclose(dec.P_values, [0, 0, 1])
        assert np.allclose(dec.a, table_8_2.multiplicities)

    def test_trace_certificate(self, table_8_2):
        rng = np.random.default_rng(1)
        P = rng.uniform(0, 1, size=(28, 28))
        dec = truncate_protocol_polynomial(P, table_8_2, 1, 3)
        assert dec.certificate == (np.abs(dec.a).sum() <= 28 * 2.0 ** 4)
        assert dec.within_tail_bound

    def test_validation(self, table_8_2):
        with pytest.raises(ValueError):
            truncate_protocol_polynomial(np.ones((5, 5)), table_8_2, 1, 1)
        with pytest.raises(ValueError):
            truncate_protocol_polynomial(2 * np.ones((28, 28)), table_8_2, 1, 1)
        with pytest.raises(ValueError):
            truncate_protocol_polynomial(np.ones((28, 28)), table_8_2, 3, 1)
        bare = CMTable.from_json(table_8_2.to_json())
        with pytest.raises(ValueError):
            truncate_protocol_polynomial(np.ones((28, 28)), bare, 1, 1)
