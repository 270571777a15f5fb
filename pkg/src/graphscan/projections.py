"""Projections onto the connected-subgraph sparsity model.

Three faces: exact projection by enumeration (small graphs), and the head /
tail approximations built on budgeted PCST with squared entries as prizes.
Head looks for a support capturing a constant fraction of the best restricted
norm within budget 2k; tail looks for a support whose residual is within a
constant factor of the best restricted residual within budget 5k. Outputs may
be unions of connected components, each within the overall budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, InputError
from .graphs import Graph, SupportSet, enumerate_connected_subsets
from .pcst import PcstInstance, pcst_budgeted

HEAD_FACTOR = math.sqrt(1.0 / 14.0)
TAIL_FACTOR = math.sqrt(7.0)
EXACT_PROJECTION_LIMIT = 16


@dataclass(frozen=True)
class ModelParams:
    """Sparsity budget k with the head/tail enlargements and their factors."""

    k: int
    c_head: float = HEAD_FACTOR
    c_tail: float = TAIL_FACTOR
    head_budget: int = field(init=False)
    tail_budget: int = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise InputError(f"model sparsity k must be >= 1, got {self.k}")
        if not (0.0 < self.c_head <= 1.0):
            raise InputError(f"head factor must be in (0, 1], got {self.c_head}")
        if self.c_tail < 1.0:
            raise InputError(f"tail factor must be >= 1, got {self.c_tail}")
        object.__setattr__(self, "head_budget", 2 * self.k)
        object.__setattr__(self, "tail_budget", 5 * self.k)


def project_exact(g: Graph, b: np.ndarray, k: int) -> SupportSet:
    """Exact model projection: the connected set of size <= k maximizing ||b_S||.

    Ties break toward smaller supports, then lexicographically. Enumeration
    based, so small graphs only.
    """
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (g.n,):
        raise InputError(f"vector length {b.shape} does not match n={g.n}")
    if g.n == 0:
        raise InputError("projection needs at least one node")
    if g.n > EXACT_PROJECTION_LIMIT:
        raise CapacityError(
            f"exact projection limited to n <= {EXACT_PROJECTION_LIMIT}, got {g.n}")
    sq = b * b
    best_key = None
    best = None
    for s in enumerate_connected_subsets(g, k):
        val = float(sq[list(s.members)].sum())
        key = (-val, s.size, s.members)
        if best_key is None or key < best_key:
            best_key = key
            best = s
    return best


def head_approx(g: Graph, b: np.ndarray, params: ModelParams) -> SupportSet:
    """Support of at most 2k nodes capturing a c_head fraction of the best norm."""
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (g.n,):
        raise InputError(f"vector length {b.shape} does not match n={g.n}")
    budget = min(params.head_budget, g.n)
    inst = PcstInstance.with_unit_costs(g, b * b)
    return pcst_budgeted(inst, budget).nodes


def tail_approx(g: Graph, b: np.ndarray, params: ModelParams) -> SupportSet:
    """Support of at most 5k nodes whose residual is within c_tail of optimal.

    Candidates: the budgeted PCST solution, the plain support of ``b`` when it
    fits the budget, and the empty set; the one leaving the smallest residual
    wins (ties: fewer nodes, then lexicographic).
    """
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (g.n,):
        raise InputError(f"vector length {b.shape} does not match n={g.n}")
    budget = min(params.tail_budget, g.n)
    sq = b * b
    total = float(sq.sum())

    candidates = [SupportSet(())]
    nz = np.flatnonzero(sq > 0.0)
    if 0 < nz.shape[0] <= budget:
        candidates.append(SupportSet(tuple(int(i) for i in nz)))
    inst = PcstInstance.with_unit_costs(g, sq)
    candidates.append(pcst_budgeted(inst, budget).nodes)

    def key(s: SupportSet):
        captured = float(sq[list(s.members)].sum()) if s.size else 0.0
        residual = max(total - captured, 0.0)
        return (residual, s.size, s.members)

    return min(candidates, key=key)


def check_c_condition(params: ModelParams) -> bool:
    """Whether the oracle constants admit geometric convergence.

    Evaluates c_head^2 > 1 - 1/(1 + c_tail)^2 exactly. False for the stock
    constants sqrt(1/14), sqrt(7); true for exact oracles (both factors 1).
    """
    return params.c_head ** 2 > 1.0 - 1.0 / (1.0 + params.c_tail) ** 2
