import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dptlab.quantum import (
    ORACLE,
    KFoldExactSearch,
    Layout,
    NoisyOr,
    PerfectOr,
    QueryAlgorithm,
    SimulationError,
    apply_oracle,
    constant_program,
    exact_search,
    exact_search_distribution,
    exact_search_iterations,
    fit_profile,
    grover,
    grover_closed_form,
    grover_threshold_program,
    kfold_grover,
    or_to_search,
    random_bit_program,
    random_program,
    random_unitary,
    search_to_threshold,
    symmetrize,
    weight_class_means,
)


def naive_oracle(state, x, layout):
    """Loop over basis states: |i, b, z> -> |i, b xor x_i, z>."""
    out = np.zeros_like(state)
    for idx, amp in enumerate(state):
        i, rest = divmod(idx, 2 * 2 ** layout.workspace)
        b, z = divmod(rest, 2 ** layout.workspace)
        if i < layout.N and x[i]:
            b ^= 1
        out[(i * 2 + b) * 2 ** layout.workspace + z] += amp
    return out


class TestOracle:
    @given(st.integers(0, 2 ** 12), st.integers(2, 6), st.integers(0, 1))
    def test_matches_naive(self, seed, N, workspace):
        layout = Layout(N, workspace)
        rng = np.random.default_rng(seed)
        state = rng.normal(size=2 ** layout.m) + 1j * rng.normal(size=2 ** layout.m)
        state /= np.linalg.norm(state)
        x = rng.integers(0, 2, size=N)
        assert np.allclose(apply_oracle(state, x, layout), naive_oracle(state, x, layout))

    def test_is_an_involution(self):
        layout = Layout(5, 1)
        state = np.random.default_rng(0).normal(size=2 ** layout.m).astype(complex)
        x = [1, 0, 1, 1, 0]
        assert np.allclose(apply_oracle(apply_oracle(state, x, layout), x, layout), state)

    def test_wrong_input_length(self):
        with pytest.raises(ValueError):
            apply_oracle(np.ones(8, dtype=complex), [1, 0], Layout(4))


class TestQueryAlgorithm:
    def test_constant_programs(self):
        assert weight_class_means(constant_program(3), 3).tolist() == [1.0] * 4
        assert weight_class_means(constant_program(3, accept=False), 3).tolist() == [0.0] * 4

    def test_random_bit_program_reads_weight(self):
        vals = weight_class_means(random_bit_program(4), 4)
        assert np.allclose(vals, [0, 0.25, 0.5, 0.75, 1])

    def test_norm_drift_detected(self):
        alg = QueryAlgorithm(Layout(2), [np.eye(4, dtype=complex) * 1.1])
        with pytest.raises(SimulationError):
            alg.acceptance([0, 1])

    def test_validate(self):
        with pytest.raises(ValueError):
            QueryAlgorithm(Layout(2), [np.eye(2)]).validate()
        with pytest.raises(ValueError):
            QueryAlgorithm(Layout(2), ["X"]).validate()

    def test_random_unitary_is_unitary(self):
        U = random_unitary(8, np.random.default_rng(1))
        assert np.allclose(U.conj().T @ U, np.eye(8))

    def test_save_load_round_trip(self, tmp_path):
        alg = random_program(4, 2, seed=3)
        alg.save(tmp_path / "prog.txt")
        back = QueryAlgorithm.load(tmp_path / "prog.txt")
        assert back.T == 2 and back.N == 4 and back.m == alg.m
        X = np.array(list(itertools.product((0, 1), repeat=4)))
        assert np.allclose(back.acceptance_batch(X), alg.acceptance_batch(X))

    def test_load_rejects_bad_header(self, tmp_path):
        alg = random_program(2, 1, seed=0)
        alg.save(tmp_path / "p.txt")
        text = (tmp_path / "p.txt").read_text().splitlines()
        text[0] = text[0].rsplit(" ", 1)[0] + " 5"
        (tmp_path / "p.txt").write_text("\n".join(text) + "\n")
        with pytest.raises(ValueError):
            QueryAlgorithm.load(tmp_path / "p.txt")


class TestGrover:
    @pytest.mark.parametrize("n", [4, 16, 64])
    @pytest.mark.parametrize("t", [1, 2])
    def test_closed_form(self, n, t):
        x = np.zeros(n, dtype=np.uint8)
        x[[0, n - 1][:t]] = 1
        for j in range(11):
            assert grover(n, x, j) == pytest.approx(grover_closed_form(n, t, j), abs=1e-9)

    def test_n4_one_iteration_certain(self):
        assert grover(4, [0, 0, 1, 0], 1) == pytest.approx(1.0, abs=1e-12)

    def test_not_power_of_two(self):
        with pytest.raises(ValueError):
            grover(6, [0] * 6, 1)

    def test_kfold_is_product(self):
        xs = [[0, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1, 0]]
        assert kfold_grover(8, 2, xs, 2) == pytest.approx(grover_closed_form(8, 1, 2) ** 2)


class TestExactSearch:
    def test_iteration_counts(self):
        assert [exact_search_iterations(n) for n in (1, 2, 4, 16, 64, 256)] == [0, 1, 1, 3, 6, 13]

    @pytest.mark.parametrize("n", [4, 16, 64])
    def test_every_singleton_found(self, n):
        for i in range(n):
            x = np.zeros(n, dtype=np.uint8)
            x[i] = 1
            res = exact_search(n, x, rng=i)
            assert res.found == i
            assert res.success_probability >= 1 - 1e-9
            assert res.queries == exact_search_iterations(n) + 1

    @pytest.mark.parametrize("n", [4, 16, 64])
    def test_query_count_within_grover_budget(self, n):
        assert exact_search_iterations(n) + 1 <= math.ceil(math.pi * math.sqrt(n) / 4)

    def test_all_zero_input(self):
        res = exact_search(16, np.zeros(16, dtype=np.uint8))
        assert res.found is None and res.success_probability == 0

    def test_distribution_normalized(self):
        probs, _ = exact_search_distribution(16, [0] * 5 + [1] + [0] * 10)
        assert probs.sum() == pytest.approx(1.0)

    def test_promise_flag(self):
        assert exact_search(4, [1, 1, 0, 0]).promise_violated


class TestReductions:
    def test_or_to_search_perfect(self):
        n, s, k, cost = 8, 1, 2, 16
        expected = (s + 1) * cost + k * (exact_search_iterations(n >> s) + 1)
        for seed in range(30):
            rng = np.random.default_rng(seed)
            planted = [int(rng.integers(n)) for _ in range(k)]
            xs = [np.eye(n, dtype=np.uint8)[p] for p in planted]
            res = or_to_search(PerfectOr(cost), s, xs, rng_seed=seed)
            assert res.positions == planted
            assert res.queries == expected
            assert res.or_calls == s + 1

    def test_or_to_search_empty_block(self):
        xs = [np.zeros(8, dtype=np.uint8), np.eye(8, dtype=np.uint8)[5]]
        assert or_to_search(PerfectOr(1), 2, xs, 0).positions == [None, 5]

    def test_noisy_or_can_miss(self):
        misses = 0
        for seed in range(50):
            xs = [np.eye(8, dtype=np.uint8)[seed % 8], np.eye(8, dtype=np.uint8)[(3 * seed) % 8]]
            res = or_to_search(NoisyOr(1, 0.5), 1, xs, seed)
            misses += res.positions != [seed % 8, (3 * seed) % 8]
        assert 0 < misses < 50

    def test_or_to_search_validation(self):
        with pytest.raises(ValueError):
            or_to_search(PerfectOr(1), 2, [np.zeros(6)], 0)

    def test_threshold_rejects_light_inputs(self):
        A = KFoldExactSearch(4, 4)
        for seed in range(200):
            rng = np.random.default_rng(seed)
            x = np.zeros(16, dtype=np.uint8)
            x[rng.choice(16, size=int(rng.integers(0, 2)), replace=False)] = 1
            assert not search_to_threshold(A, 16, 4, x, seed).accept

    def test_threshold_accepts_spread_heavy_input(self):
        A = KFoldExactSearch(4, 4)
        accepted = 0
        for seed in range(50):
            x = np.zeros(16, dtype=np.uint8)
            x[[0, 5, 10, 15]] = 1
            run = search_to_threshold(A, 16, 4, x, seed)
            accepted += run.accept
            assert run.queries == 4 * (exact_search_iterations(4) + 1) + 4
        assert accepted > 0


class TestSymmetrization:
    def test_threshold_program_profile_is_grover_curve(self):
        vals = weight_class_means(grover_threshold_program(8, 1), 8)
        assert vals[0] == pytest.approx(0.0, abs=1e-15)
        assert vals[1] == pytest.approx(0.78125)
        for w in range(1, 9):
            assert vals[w] == pytest.approx(grover_closed_form(8, w, 1), abs=1e-12)

    @pytest.mark.parametrize("seed", range(6))
    def test_random_programs_fit_degree_2T(self, seed):
        T = 1 + seed % 3
        prof = symmetrize(random_program(6, T, seed), 6)
        assert prof.degree == 2 * T
        assert prof.residual <= 1e-8

    def test_lower_degree_does_not_fit(self):
        vals = weight_class_means(random_program(6, 1, seed=0), 6)
        _, res = fit_profile(vals, 1)
        assert res > 1e-6

    def test_degree_capped_by_n(self):
        assert symmetrize(random_program(3, 3, seed=1), 3).degree == 3

    def test_size_guard(self):
        with pytest.raises(ValueError):
            weight_class_means(random_program(13, 1, 0), 13)
        with pytest.raises(ValueError):
            weight_class_means(random_program(4, 1, 0), 5)

    def test_program_steps(self):
        alg = random_program(4, 3, seed=0)
        assert alg.T == 3 and sum(isinstance(s, str) and s == ORACLE for s in alg.steps) == 3
