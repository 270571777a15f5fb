"""Undirected graphs over dense node indices, support sets, and connectivity queries.

Graphs are immutable after construction and safe to share across concurrent
runs; every operation here is a pure function of its arguments.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import CapacityError, InputError

ENUMERATION_NODE_LIMIT = 24


class Graph:
    """Simple undirected graph on nodes 0..n-1 with optional edge costs.

    Edge input is deduplicated (unordered comparison, first occurrence wins);
    self-loops are rejected. Adjacency is stored in CSR form so kernels can
    consume it without conversion.
    """

    __slots__ = ("n", "edge_u", "edge_v", "edge_costs", "adj_offsets",
                 "adj_nodes", "adj_edges", "_edges")

    def __init__(self, n, edges, edge_costs=None):
        if n < 0:
            raise InputError(f"node count must be nonnegative, got {n}")
        self.n = int(n)
        seen = {}
        eu, ev, costs = [], [], []
        for idx, (a, b) in enumerate(edges):
            a, b = int(a), int(b)
            if a == b:
                raise InputError(f"self-loop on node {a} is not allowed")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise InputError(f"edge ({a}, {b}) has endpoint outside [0, {self.n})")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                continue
            seen[key] = len(eu)
            eu.append(key[0])
            ev.append(key[1])
            if edge_costs is not None:
                c = float(edge_costs[idx])
                if not np.isfinite(c) or c < 0:
                    raise InputError(f"edge cost must be finite and nonnegative, got {c}")
                costs.append(c)
            else:
                costs.append(1.0)
        m = len(eu)
        self.edge_u = np.asarray(eu, dtype=np.int64)
        self.edge_v = np.asarray(ev, dtype=np.int64)
        self.edge_costs = np.asarray(costs, dtype=np.float64)
        deg = np.zeros(self.n + 1, dtype=np.int64)
        for a, b in zip(eu, ev):
            deg[a + 1] += 1
            deg[b + 1] += 1
        self.adj_offsets = np.cumsum(deg)
        self.adj_nodes = np.empty(2 * m, dtype=np.int64)
        self.adj_edges = np.empty(2 * m, dtype=np.int64)
        cursor = self.adj_offsets[:-1].copy() if self.n else np.zeros(0, dtype=np.int64)
        for e in range(m):
            a, b = eu[e], ev[e]
            self.adj_nodes[cursor[a]] = b
            self.adj_edges[cursor[a]] = e
            cursor[a] += 1
            self.adj_nodes[cursor[b]] = a
            self.adj_edges[cursor[b]] = e
            cursor[b] += 1
        self._edges = tuple(zip(eu, ev))
        for arr in (self.edge_u, self.edge_v, self.edge_costs,
                    self.adj_offsets, self.adj_nodes, self.adj_edges):
            arr.setflags(write=False)

    @property
    def num_edges(self):
        return self.edge_u.shape[0]

    @property
    def edges(self):
        return self._edges

    def neighbors(self, u):
        return self.adj_nodes[self.adj_offsets[u]:self.adj_offsets[u + 1]]

    def degree(self, u):
        return int(self.adj_offsets[u + 1] - self.adj_offsets[u])

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True)
class SupportSet:
    """A subset of node indices, kept sorted and deduplicated."""

    members: tuple[int, ...] = ()

    def __post_init__(self):
        cleaned = tuple(sorted({int(v) for v in self.members}))
        if cleaned and cleaned[0] < 0:
            raise InputError(f"negative node index {cleaned[0]} in support set")
        object.__setattr__(self, "members", cleaned)

    @classmethod
    def from_iterable(cls, items: Iterable[int]) -> "SupportSet":
        return cls(tuple(items))

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "SupportSet":
        return cls(tuple(int(i) for i in np.flatnonzero(mask)))

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def indices(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    def to_mask(self, n: int) -> np.ndarray:
        mask = np.zeros(n, dtype=bool)
        mask[list(self.members)] = True
        return mask

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item):
        return int(item) in set(self.members)


def _validate_support(g: Graph, s: SupportSet):
    if s.size and (s.members[0] < 0 or s.members[-1] >= g.n):
        raise InputError(f"support set {s.members} out of range for graph with n={g.n}")


def is_connected(g: Graph, s: SupportSet) -> bool:
    """True iff the subgraph induced by ``s`` has at most one component.

    The empty set and singletons count as connected.
    """
    _validate_support(g, s)
    if s.size <= 1:
        return True
    inside = set(s.members)
    seen = {s.members[0]}
    stack = [s.members[0]]
    while stack:
        v = stack.pop()
        for u in g.neighbors(v):
            u = int(u)
            if u in inside and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == s.size


def connected_components(g: Graph, s: SupportSet) -> list[SupportSet]:
    """Partition ``s`` into maximal connected pieces, ordered by smallest member."""
    _validate_support(g, s)
    inside = set(s.members)
    seen = set()
    out = []
    for start in s.members:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                u = int(u)
                if u in inside and u not in seen:
                    seen.add(u)
                    comp.add(u)
                    stack.append(u)
        out.append(SupportSet(tuple(comp)))
    return out


def enumerate_connected_subsets(g: Graph, k: int) -> Iterator[SupportSet]:
    """Yield every nonempty connected node subset of size at most ``k`` exactly once.

    Brute-force materialization of the connected-subgraph sparsity model, for
    small graphs only. Enumeration anchors each subset at its minimum node and
    grows an extension frontier, so no subset is produced twice.
    """
    if g.n > ENUMERATION_NODE_LIMIT:
        raise CapacityError(
            f"connected-subset enumeration limited to n <= {ENUMERATION_NODE_LIMIT}, got n={g.n}")
    if k < 1:
        raise InputError(f"subset size bound must be >= 1, got {k}")
    k = min(int(k), g.n)
    adj = [sorted(int(u) for u in g.neighbors(v)) for v in range(g.n)]

    def extend(sub: list, ext: list, visited: set) -> Iterator[SupportSet]:
        yield SupportSet(tuple(sub))
        if len(sub) == k:
            return
        for i, w in enumerate(ext):
            fresh = [u for u in adj[w] if u > sub[0] and u not in visited]
            visited.update(fresh)
            sub.append(w)
            yield from extend(sub, ext[i + 1:] + fresh, visited)
            sub.pop()
            visited.difference_update(fresh)

    for v in range(g.n):
        ext0 = [u for u in adj[v] if u > v]
        yield from extend([v], ext0, {v, *ext0})


def path_graph(n: int) -> Graph:
    """Path on n nodes: edges (i, i+1)."""
    if n < 1:
        raise InputError(f"path graph needs at least one node, got {n}")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    """4-neighbor lattice with row-major node numbering."""
    if rows < 1 or cols < 1:
        raise InputError(f"grid needs positive dimensions, got {rows}x{cols}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)
