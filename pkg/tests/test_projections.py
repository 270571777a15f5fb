import math

import numpy as np
import pytest

from graphscan.errors import InputError
from graphscan.graphs import Graph, connected_components, path_graph
from graphscan.projections import (HEAD_FACTOR, TAIL_FACTOR, ModelParams,
                                   check_c_condition, head_approx,
                                   project_exact, tail_approx)


def random_graph(rng, n):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < rng.uniform(0.2, 0.6)]
    return Graph(n, edges)


class TestModelParams:
    def test_budgets_derived(self):
        p = ModelParams(4)
        assert p.head_budget == 8
        assert p.tail_budget == 20
        assert p.c_head == pytest.approx(math.sqrt(1 / 14))
        assert p.c_tail == pytest.approx(math.sqrt(7))

    def test_invalid_k(self):
        with pytest.raises(InputError):
            ModelParams(0)

    def test_factor_ranges(self):
        ModelParams(1, c_head=1.0, c_tail=1.0)  # exact-oracle values allowed
        with pytest.raises(InputError):
            ModelParams(1, c_head=0.0)
        with pytest.raises(InputError):
            ModelParams(1, c_tail=0.5)


class TestProjectExact:
    def test_already_feasible_support(self):
        g = path_graph(5)
        b = np.array([0.0, 2.0, 3.0, 0.0, 0.0])
        assert project_exact(g, b, 2).members == (1, 2)

    def test_best_pair_on_path(self):
        g = path_graph(5)
        b = np.array([3.0, 4.0, 0.0, 0.0, 2.0])
        assert project_exact(g, b, 2).members == (0, 1)

    def test_zero_vector_tie_rule(self):
        assert project_exact(path_graph(5), np.zeros(5), 2).members == (0,)

    def test_capacity_guard(self):
        from graphscan.errors import CapacityError
        with pytest.raises(CapacityError):
            project_exact(path_graph(17), np.zeros(17), 2)


class TestHeadApprox:
    def test_single_nonzero(self):
        g = path_graph(4)
        b = np.array([0.0, 0.0, 7.0, 0.0])
        s = head_approx(g, b, ModelParams(2))
        assert 2 in s

    def test_dominant_middle(self):
        g = path_graph(3)
        s = head_approx(g, np.array([1.0, 5.0, 1.0]), ModelParams(1))
        assert 1 in s
        assert np.linalg.norm(np.array([1.0, 5.0, 1.0])[list(s.members)]) >= 5.0

    def test_zero_vector(self):
        s = head_approx(path_graph(3), np.zeros(3), ModelParams(1))
        assert s.members == (0,)


class TestTailApprox:
    def test_exact_support_recovered(self):
        g = path_graph(6)
        b = np.zeros(6)
        b[2:4] = [1.5, 2.5]
        s = tail_approx(g, b, ModelParams(2))
        resid = np.linalg.norm(b - np.where(s.to_mask(6), b, 0.0))
        assert resid == 0.0

    def test_k1_residual_bound(self):
        g = path_graph(5)
        b = np.array([3.0, 4.0, 0.0, 0.0, 2.0])
        s = tail_approx(g, b, ModelParams(1))
        resid = np.linalg.norm(b - np.where(s.to_mask(5), b, 0.0))
        assert resid <= math.sqrt(7) * math.sqrt(13) + 1e-12

    def test_zero_vector_empty(self):
        assert tail_approx(path_graph(3), np.zeros(3), ModelParams(1)).size == 0


class TestGuarantees:
    def test_head_tail_vs_brute_force(self):
        rng = np.random.default_rng(77)
        for trial in range(80):
            n = int(rng.integers(4, 13))
            g = random_graph(rng, n)
            b = rng.normal(0, 1, n)
            if trial % 3 == 1:
                b[int(rng.integers(n))] += 4.0
            k = int(rng.integers(1, 4))
            params = ModelParams(k)
            sq = b * b
            best = project_exact(g, b, k)
            opt_norm = math.sqrt(sq[list(best.members)].sum())
            opt_resid = math.sqrt(max(sq.sum() - opt_norm ** 2, 0.0))

            hs = head_approx(g, b, params)
            assert hs.size <= 2 * k
            hnorm = math.sqrt(sq[list(hs.members)].sum()) if hs.size else 0.0
            assert hnorm >= params.c_head * opt_norm - 1e-12

            ts = tail_approx(g, b, params)
            assert ts.size <= 5 * k
            captured = sq[list(ts.members)].sum() if ts.size else 0.0
            assert math.sqrt(max(sq.sum() - captured, 0.0)) <= \
                params.c_tail * opt_resid + 1e-12
            for comp in connected_components(g, hs) + connected_components(g, ts):
                assert comp.size >= 1

    def test_exact_oracle_substitution_agrees(self):
        # with both factors at 1 and exact projection used as the oracle, the
        # head, tail, and plain projection achieve identical objective values
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(4, 10))
            g = random_graph(rng, n)
            b = rng.normal(0, 1, n)
            k = int(rng.integers(1, 4))
            sq = b * b
            s = project_exact(g, b, k)
            captured = sq[list(s.members)].sum()
            head_val = sq[list(project_exact(g, b, k).members)].sum()
            tail_resid = sq.sum() - captured
            assert head_val == pytest.approx(captured)
            assert sq.sum() - head_val == pytest.approx(tail_resid)


class TestConditionCheck:
    def test_stock_constants_fail(self):
        assert check_c_condition(ModelParams(1)) is False
        assert ModelParams(1).c_head == pytest.approx(HEAD_FACTOR)
        assert ModelParams(1).c_tail == pytest.approx(TAIL_FACTOR)

    def test_exact_oracles_pass(self):
        assert check_c_condition(ModelParams(1, c_head=1.0, c_tail=1.0)) is True

    def test_boosted_head_passes(self):
        # 0.99^2 = 0.9801 against 1 - 1/(1+sqrt(7))^2 = 0.92476...
        assert check_c_condition(ModelParams(1, c_head=0.99)) is True
        assert 1.0 - 1.0 / (1.0 + math.sqrt(7)) ** 2 == pytest.approx(0.9247640, abs=1e-6)
