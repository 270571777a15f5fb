"""Prize-collecting Steiner tree: GW solver, exact oracle, and budgeted search.

The objective throughout is cost(tree edges) + sum of prizes of nodes left out
of the solution; smaller is better.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from . import _gw
from .errors import CapacityError, InputError
from .graphs import Graph, SupportSet, enumerate_connected_subsets

EXACT_NODE_LIMIT = 16
BUDGET_SEARCH_EVALS = 14  # GW evaluations per budgeted search (spec cap: 32)


@dataclass(frozen=True)
class PcstInstance:
    graph: Graph
    prizes: np.ndarray
    edge_costs: np.ndarray

    def __post_init__(self):
        prizes = np.ascontiguousarray(np.asarray(self.prizes, dtype=np.float64))
        costs = np.ascontiguousarray(np.asarray(self.edge_costs, dtype=np.float64))
        if prizes.shape != (self.graph.n,):
            raise InputError(
                f"prizes length {prizes.shape} does not match node count {self.graph.n}")
        if costs.shape != (self.graph.num_edges,):
            raise InputError(
                f"edge costs length {costs.shape} does not match edge count {self.graph.num_edges}")
        if not np.all(np.isfinite(prizes)) or np.any(prizes < 0):
            raise InputError("prizes must be finite and nonnegative")
        if not np.all(np.isfinite(costs)) or np.any(costs < 0):
            raise InputError("edge costs must be finite and nonnegative")
        prizes.setflags(write=False)
        costs.setflags(write=False)
        object.__setattr__(self, "prizes", prizes)
        object.__setattr__(self, "edge_costs", costs)

    @classmethod
    def with_unit_costs(cls, graph: Graph, prizes) -> "PcstInstance":
        return cls(graph, prizes, np.ones(graph.num_edges))


@dataclass(frozen=True)
class PcstSolution:
    nodes: SupportSet
    tree_edges: tuple
    objective: float


def _gw_solve(inst: PcstInstance):
    """Raw GW run; returns (node ids, tree edge ids) as arrays."""
    g = inst.graph
    forest = _gw.gw_grow(g.n, g.edge_u, g.edge_v, inst.edge_costs, inst.prizes)
    return _gw.gw_strong_prune(
        g.n, g.edge_u, g.edge_v, inst.edge_costs, inst.prizes, forest)


def _solution_from_ids(inst: PcstInstance, nodes: np.ndarray,
                       edge_ids: np.ndarray) -> PcstSolution:
    g = inst.graph
    keep = np.zeros(g.n, dtype=bool)
    keep[nodes] = True
    tree_cost = float(inst.edge_costs[edge_ids].sum()) if len(edge_ids) else 0.0
    forfeited = float(inst.prizes[~keep].sum())
    edges = tuple(sorted((int(g.edge_u[e]), int(g.edge_v[e])) for e in edge_ids))
    return PcstSolution(SupportSet(tuple(int(v) for v in nodes)), edges,
                        tree_cost + forfeited)


def pcst_gw(inst: PcstInstance) -> PcstSolution:
    """Goemans-Williamson moat growth plus strong pruning (unrooted).

    Deterministic for fixed input; the returned node set is connected and its
    tree edges are cycle-free.
    """
    if inst.graph.n == 0:
        raise InputError("PCST needs at least one node")
    nodes, edge_ids = _gw_solve(inst)
    return _solution_from_ids(inst, nodes, edge_ids)


def _mst_cost_and_edges(g: Graph, costs: np.ndarray, members: tuple):
    """Prim over the induced subgraph; members must induce a connected graph."""
    inside = set(members)
    start = members[0]
    in_tree = {start}
    tree_edges = []
    total = 0.0
    while len(in_tree) < len(members):
        best = None
        for v in in_tree:
            lo = g.adj_offsets[v]
            hi = g.adj_offsets[v + 1]
            for j in range(lo, hi):
                u = int(g.adj_nodes[j])
                if u in inside and u not in in_tree:
                    e = int(g.adj_edges[j])
                    cand = (float(costs[e]), e, u)
                    if best is None or cand < best:
                        best = cand
        c, e, u = best
        total += c
        tree_edges.append(e)
        in_tree.add(u)
    return total, tree_edges


def pcst_exact(inst: PcstInstance) -> PcstSolution:
    """Exact optimum by enumerating connected subsets plus the empty solution.

    Ties break toward the lexicographically smallest node set.
    """
    g = inst.graph
    if g.n > EXACT_NODE_LIMIT:
        raise CapacityError(f"exact PCST limited to n <= {EXACT_NODE_LIMIT}, got {g.n}")
    if g.n == 0:
        raise InputError("PCST needs at least one node")
    total_prize = float(inst.prizes.sum())
    best_key = (total_prize, ())
    best_edges = []
    for s in enumerate_connected_subsets(g, g.n):
        mst_cost, tree_edges = _mst_cost_and_edges(g, inst.edge_costs, s.members)
        obj = mst_cost + total_prize - float(inst.prizes[list(s.members)].sum())
        key = (obj, s.members)
        if key < best_key:
            best_key = key
            best_edges = tree_edges
    members = best_key[1]
    return _solution_from_ids(
        inst, np.asarray(members, dtype=np.int64),
        np.asarray(best_edges, dtype=np.int64))


def _trim_to_budget(prizes: np.ndarray, nodes: np.ndarray, edge_ids: np.ndarray,
                    eu: np.ndarray, ev: np.ndarray, budget: int):
    """Shrink a tree to ``budget`` nodes by repeatedly dropping the
    cheapest leaf (ties: lowest node id); stays connected throughout."""
    keep = set(int(v) for v in nodes)
    adj = {v: set() for v in keep}
    edge_of = {}
    for e in edge_ids:
        a, b = int(eu[e]), int(ev[e])
        adj[a].add(b)
        adj[b].add(a)
        edge_of[(a, b) if a < b else (b, a)] = int(e)
    heap = [(float(prizes[v]), v) for v in keep if len(adj[v]) <= 1]
    heapq.heapify(heap)
    while len(keep) > budget and heap:
        _, v = heapq.heappop(heap)
        if v not in keep or len(adj[v]) > 1:
            continue
        keep.discard(v)
        for u in adj[v]:
            adj[u].discard(v)
            if u in keep and len(adj[u]) <= 1:
                heapq.heappush(heap, (float(prizes[u]), u))
        adj[v] = set()
    out_nodes = np.asarray(sorted(keep), dtype=np.int64)
    out_edges = [edge_of[(a, b) if a < b else (b, a)]
                 for a in keep for b in adj[a] if a < b]
    return out_nodes, np.asarray(sorted(out_edges), dtype=np.int64)


def pcst_budgeted(inst: PcstInstance, budget: int) -> PcstSolution:
    """Best max-prize-mass solution found with at most ``budget`` nodes.

    Geometric bisection over a scalar multiplier applied to all prizes, one GW
    run per multiplier; keeps the feasible solution with the largest prize
    mass (ties: fewer nodes, then lexicographically smallest). Falls back to
    the best singleton when no multiplier yields anything else feasible.
    """
    g = inst.graph
    if not (1 <= budget <= g.n):
        raise InputError(f"budget must be in [1, {g.n}], got {budget}")

    best_single = int(np.argmax(inst.prizes))  # lowest index on ties
    best = (-float(inst.prizes[best_single]), 1, (best_single,),
            np.asarray([best_single], dtype=np.int64),
            np.asarray([], dtype=np.int64))

    pmax = float(inst.prizes.max())
    if pmax > 0.0:
        total_cost = float(inst.edge_costs.sum())
        min_cost = float(inst.edge_costs.min()) if g.num_edges else 1.0
        lo = max(0.5 * min_cost / pmax, 1e-12)
        hi = max((total_cost + 1.0) / pmax, 2.0 * lo)
        for step in range(BUDGET_SEARCH_EVALS):
            if step == 0:
                lam = lo
            elif step == 1:
                lam = hi
            else:
                lam = math.sqrt(lo * hi)
            scaled = PcstInstance(g, inst.prizes * lam, inst.edge_costs)
            nodes, edge_ids = _gw_solve(scaled)
            if nodes.shape[0] > budget:
                hi = lam
                nodes, edge_ids = _trim_to_budget(
                    inst.prizes, nodes, edge_ids, g.edge_u, g.edge_v, budget)
            elif step >= 1:
                lo = lam
            mass = float(inst.prizes[nodes].sum())
            key = (-mass, nodes.shape[0], tuple(int(v) for v in np.sort(nodes)))
            if key < best[:3]:
                best = (*key, nodes, edge_ids)
            if step >= 1 and hi <= lo * (1.0 + 1e-9):
                break
    return _solution_from_ids(inst, best[3], best[4])
