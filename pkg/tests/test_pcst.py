import numpy as np
import pytest

from graphscan.errors import CapacityError, InputError
from graphscan.graphs import Graph, is_connected, path_graph
from graphscan.pcst import (PcstInstance, pcst_budgeted, pcst_exact, pcst_gw)


def random_instance(rng, n_lo=2, n_hi=13):
    n = int(rng.integers(n_lo, n_hi))
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < rng.uniform(0.2, 0.6)]
    g = Graph(n, edges)
    prizes = rng.uniform(0, 3, n) * (rng.random(n) < 0.8)
    costs = rng.uniform(0.1, 2.0, g.num_edges)
    return PcstInstance(g, prizes, costs)


class TestPcstGw:
    def test_zero_prizes_best_single_node(self):
        g = path_graph(3)
        sol = pcst_gw(PcstInstance.with_unit_costs(g, np.zeros(3)))
        assert sol.nodes.members == (0,)
        assert sol.objective == 0.0

    def test_two_nodes_worth_connecting(self):
        g = Graph(2, [(0, 1)])
        sol = pcst_gw(PcstInstance(g, [10.0, 10.0], [1.0]))
        assert sol.nodes.members == (0, 1)
        assert sol.objective == pytest.approx(1.0)

    def test_path_bridging_zero_prize_middle(self):
        g = path_graph(3)
        sol = pcst_gw(PcstInstance(g, [5.0, 0.0, 5.0], [1.0, 1.0]))
        assert sol.nodes.members == (0, 1, 2)
        assert sol.objective == pytest.approx(2.0)

    def test_empty_graph_rejected(self):
        with pytest.raises(InputError):
            pcst_gw(PcstInstance(Graph(0, []), np.zeros(0), np.zeros(0)))

    def test_deterministic(self):
        rng = np.random.default_rng(99)
        inst = random_instance(rng)
        a = pcst_gw(inst)
        b = pcst_gw(inst)
        assert a.nodes == b.nodes and a.tree_edges == b.tree_edges
        assert a.objective == b.objective

    def test_structure_and_two_approx(self):
        rng = np.random.default_rng(2)
        for _ in range(60):
            inst = random_instance(rng)
            sol = pcst_gw(inst)
            assert is_connected(inst.graph, sol.nodes)
            assert len(sol.tree_edges) == max(sol.nodes.size - 1, 0)
            exact = pcst_exact(inst)
            assert sol.objective <= 2.0 * exact.objective + 1e-9


class TestPcstExact:
    def test_single_node(self):
        sol = pcst_exact(PcstInstance(Graph(1, []), [3.0], []))
        assert sol.nodes.members == (0,)
        assert sol.objective == 0.0

    def test_star_keeps_best_leaf(self):
        g = Graph(4, [(0, 1), (0, 2), (0, 3)])
        sol = pcst_exact(PcstInstance(g, [0.0, 1.0, 1.0, 1.0], [2.0, 2.0, 2.0]))
        assert sol.nodes.members == (1,)
        assert sol.objective == pytest.approx(2.0)

    def test_empty_solution_on_zero_prizes(self):
        sol = pcst_exact(PcstInstance.with_unit_costs(path_graph(3), np.zeros(3)))
        assert sol.nodes.members == ()
        assert sol.objective == 0.0

    def test_capacity_guard(self):
        g = path_graph(17)
        with pytest.raises(CapacityError):
            pcst_exact(PcstInstance.with_unit_costs(g, np.ones(17)))

    def test_matches_gw_examples(self):
        g = path_graph(3)
        inst = PcstInstance(g, [5.0, 0.0, 5.0], [1.0, 1.0])
        assert pcst_exact(inst).objective == pytest.approx(pcst_gw(inst).objective)


class TestPcstBudgeted:
    def test_budget_one_max_prize_singleton(self):
        g = path_graph(3)
        sol = pcst_budgeted(PcstInstance(g, [5.0, 0.0, 4.0], [1.0, 1.0]), 1)
        assert sol.nodes.members == (0,)

    def test_full_budget_uniform_prizes(self):
        g = path_graph(3)
        sol = pcst_budgeted(PcstInstance(g, [1.0, 1.0, 1.0],
                                         [0.01, 0.01]), 3)
        assert sol.nodes.members == (0, 1, 2)

    def test_budget_respected(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            inst = random_instance(rng, 4, 13)
            budget = int(rng.integers(1, inst.graph.n + 1))
            sol = pcst_budgeted(inst, budget)
            assert 1 <= sol.nodes.size <= budget
            assert is_connected(inst.graph, sol.nodes)

    def test_invalid_budget(self):
        inst = PcstInstance.with_unit_costs(path_graph(3), np.ones(3))
        with pytest.raises(InputError):
            pcst_budgeted(inst, 0)
        with pytest.raises(InputError):
            pcst_budgeted(inst, 4)


class TestValidation:
    def test_negative_prize_rejected(self):
        with pytest.raises(InputError):
            PcstInstance(path_graph(2), [-1.0, 0.0], [1.0])

    def test_negative_cost_rejected(self):
        with pytest.raises(InputError):
            PcstInstance(path_graph(2), [1.0, 0.0], [-1.0])

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            PcstInstance(path_graph(3), [1.0, 2.0], [1.0, 1.0])
