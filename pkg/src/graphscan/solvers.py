"""Projected-gradient solvers under the connected-subgraph support constraint.

Both solvers start from the all-zero vector with an empty support and iterate
the same four-step skeleton: head-project the gradient, take the descent step
on that support, tail-project the result, and restrict. The pursuit variant
additionally minimizes the objective over the candidate support before the
tail projection. Runs are single-threaded and deterministic; distinct runs may
execute concurrently over shared read-only graphs and objectives.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionError, DomainError, InputError, NumericError
from .graphs import Graph, SupportSet, connected_components, enumerate_connected_subsets
from .objectives import (SUPPORT_EPS, TOY_QUADRATIC, ScanObjective,
                         objective_gradient, objective_value, scan_score)
from .projections import ModelParams, head_approx, project_exact, tail_approx

SUPPORT_STABLE = "support_stable"
RESIDUAL = "residual"
MAX_ITERS_ONLY = "max_iters_only"

_CANCEL_EPS = 1e-12  # exact-cancellation threshold for the pursuit support
_ARMIJO = 1e-4


@dataclass(frozen=True)
class SolverConfig:
    k: int
    eta: float = 1.0
    max_iters: int = 50
    tol: float = 1e-6
    halting: str = SUPPORT_STABLE
    inner_max_iters: int = 500
    inner_tol: float = 1e-8
    rng_seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise InputError(f"k must be >= 1, got {self.k}")
        if self.eta <= 0:
            raise InputError(f"step size must be positive, got {self.eta}")
        if self.max_iters < 1:
            raise InputError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol <= 0 or self.inner_tol <= 0:
            raise InputError("tolerances must be positive")
        if self.halting not in (SUPPORT_STABLE, RESIDUAL, MAX_ITERS_ONLY):
            raise InputError(f"unknown halting mode {self.halting!r}")


@dataclass(frozen=True)
class IterationRecord:
    omega: SupportSet
    support: SupportSet
    objective: float
    step_norm: float
    inner_converged: bool = True


@dataclass(frozen=True)
class SolverRun:
    estimate: np.ndarray
    support: SupportSet
    trace: tuple
    iterations: int
    wall_time: float
    estimates: tuple | None = None


@dataclass(frozen=True)
class ConvergenceConstants:
    alpha0: float
    beta0: float
    alpha: float
    beta: float
    geometric: bool
    beta0_xi_scaled: float = 0.0


def positive_support(x: np.ndarray) -> SupportSet:
    """Indices of positive entries above the extraction threshold."""
    return SupportSet(tuple(int(i) for i in np.flatnonzero(x > SUPPORT_EPS)))


def exact_projection_oracle(g: Graph, vec: np.ndarray, k: int) -> SupportSet:
    """Exact small-graph projection usable as both head and tail substitute."""
    return project_exact(g, vec, k)


def _default_head(g, vec, k):
    return head_approx(g, vec, ModelParams(k))


def _default_tail(g, vec, k):
    return tail_approx(g, vec, ModelParams(k))


def _restricted_minimize(obj: ScanObjective, psi: SupportSet, cfg: SolverConfig,
                         x0: np.ndarray | None = None):
    n = obj.n
    idx = psi.indices
    if obj.kind == TOY_QUADRATIC:
        out = np.zeros(n)
        out[idx] = obj.weights[idx]
        return out, True
    x = np.zeros(n)
    if x0 is not None:
        x[idx] = x0[idx]
    f = objective_value(obj, x)
    best_x, best_f = x, f
    most_stationary = x
    smallest_gnorm = math.inf
    converged = False
    diverged = False
    for _ in range(cfg.inner_max_iters):
        grad = objective_gradient(obj, x)
        gm = np.zeros(n)
        gm[idx] = grad[idx]
        gnorm = float(np.linalg.norm(gm))
        if gnorm < smallest_gnorm:
            smallest_gnorm = gnorm
            most_stationary = x
        if gnorm <= cfg.inner_tol:
            converged = True
            break
        step = 1.0
        accepted = False
        for _ in range(80):
            trial = x - step * gm
            try:
                ft = objective_value(obj, trial)
            except NumericError:
                ft = math.inf
            if math.isfinite(ft) and ft <= f - _ARMIJO * step * gnorm * gnorm:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        x, f = trial, ft
        # the mass-normalized statistics are unbounded below off the meaningful
        # region; bail out of such a dive and fall back to the most stationary
        # point seen instead of chasing the singularity
        if f < -1e12 or float(np.abs(x).max()) > 1e8:
            diverged = True
            break
        if f < best_f:
            best_x, best_f = x, f
    if converged:
        return x, True
    if diverged:
        return most_stationary, False
    return best_x, False


def restricted_minimize(obj: ScanObjective, psi: SupportSet, cfg: SolverConfig,
                        x0: np.ndarray | None = None) -> np.ndarray:
    """Minimize f over vectors supported inside ``psi``.

    Projected gradient descent with backtracking (halving) line search from
    the given start point; the toy quadratic uses its closed form. Returns the
    best iterate found; non-convergence is not fatal.
    """
    if psi.size == 0:
        raise InputError("restricted minimization needs a nonempty support")
    vec, _ = _restricted_minimize(obj, psi, cfg, x0)
    return vec


def _run_solver(g: Graph, obj: ScanObjective, cfg: SolverConfig, pursuit: bool,
                head_oracle, tail_oracle, record_estimates: bool) -> SolverRun:
    if obj.n != g.n:
        raise DimensionError(f"objective has n={obj.n}, graph has n={g.n}")
    head = head_oracle or _default_head
    tail = tail_oracle or _default_tail
    t0 = time.perf_counter()
    x = np.zeros(g.n)
    s_prev = SupportSet(())
    trace = []
    estimates = []
    for it in range(1, cfg.max_iters + 1):
        try:
            grad = objective_gradient(obj, x)
        except NumericError as err:
            raise NumericError(f"iteration {it}: {err}") from err
        omega = head(g, grad, cfg.k)
        step = x.copy()
        oidx = omega.indices
        step[oidx] -= cfg.eta * grad[oidx]
        inner_ok = True
        if pursuit:
            psi_idx = np.flatnonzero(np.abs(step) > _CANCEL_EPS)
            if psi_idx.size == 0:
                b = np.zeros(g.n)
            else:
                psi = SupportSet(tuple(int(i) for i in psi_idx))
                b, inner_ok = _restricted_minimize(obj, psi, cfg, x0=x)
        else:
            b = step
        s_next = tail(g, b, cfg.k)
        x_next = np.zeros(g.n)
        nidx = s_next.indices
        x_next[nidx] = b[nidx]
        dx = float(np.linalg.norm(x_next - x))
        try:
            fval = objective_value(obj, x_next)
        except NumericError as err:
            raise NumericError(f"iteration {it}: {err}") from err
        trace.append(IterationRecord(omega, s_next, fval, dx, inner_ok))
        if record_estimates:
            estimates.append(x_next.copy())
        halt = False
        if cfg.halting == SUPPORT_STABLE:
            halt = s_next == s_prev and dx <= cfg.tol
        elif cfg.halting == RESIDUAL:
            halt = dx <= cfg.tol
        x = x_next
        s_prev = s_next
        if halt:
            break
    return SolverRun(
        estimate=x,
        support=positive_support(x),
        trace=tuple(trace),
        iterations=len(trace),
        wall_time=time.perf_counter() - t0,
        estimates=tuple(estimates) if record_estimates else None,
    )


def graph_iht(g: Graph, obj: ScanObjective, cfg: SolverConfig,
              head_oracle=None, tail_oracle=None,
              record_estimates: bool = False) -> SolverRun:
    """Hard-thresholding solver: head-projected gradient step, tail restriction.

    Oracles default to the budgeted-PCST approximations; pass
    ``exact_projection_oracle`` for both to run with exact projections on
    small graphs.
    """
    return _run_solver(g, obj, cfg, False, head_oracle, tail_oracle, record_estimates)


def graph_ghtp(g: Graph, obj: ScanObjective, cfg: SolverConfig,
               head_oracle=None, tail_oracle=None,
               record_estimates: bool = False) -> SolverRun:
    """Pursuit solver: like graph_iht, but minimizes f over the candidate
    support before the tail projection."""
    return _run_solver(g, obj, cfg, True, head_oracle, tail_oracle, record_estimates)


def convergence_constants(c_head: float, c_tail: float, xi: float, delta: float,
                          eta: float, reduced: bool = False) -> ConvergenceConstants:
    """Per-iteration contraction and noise constants of the solver analysis.

    ``reduced=True`` evaluates the exact-oracle shrinkage rate (tail factor
    contribution replaced by 1, head mismatch term dropped). Two published
    forms of the noise constant beta0 circulate; the primary one here is
    delta-scaled, delta*(1+c_head), and the xi-scaled variant xi*(1+c_head)
    is reported alongside as ``beta0_xi_scaled``.
    """
    if xi <= 0 or eta <= 0:
        raise InputError("xi and eta must be positive")
    if not (0.0 < delta < 1.0):
        raise DomainError(f"delta must be in (0, 1), got {delta}")
    alpha0 = c_head * (1.0 - delta) - delta
    if alpha0 <= 0.0:
        raise DomainError(
            f"alpha0 = c_head(1-delta) - delta = {alpha0:.6g} must be positive")
    one_minus = 1.0 - alpha0 * alpha0
    if one_minus <= 0.0:
        raise DomainError(f"1 - alpha0^2 = {one_minus:.6g} must be positive")
    beta0 = delta * (1.0 + c_head)
    beta0_xi_scaled = xi * (1.0 + c_head)
    drift = (2.0 - eta / xi) * delta + 1.0 - eta / xi
    rt2 = math.sqrt(2.0)
    if reduced:
        alpha = rt2 / (1.0 - delta) * drift
    else:
        alpha = rt2 * (1.0 + c_tail) / (1.0 - delta) * (math.sqrt(one_minus) + drift)
    beta = (1.0 + c_tail) / (1.0 - delta) * (
        (1.0 + 2.0 * rt2) * xi + (2.0 - 2.0 * rt2) * eta
        + rt2 * beta0 / alpha0 + rt2 * alpha0 * beta0 / math.sqrt(one_minus))
    return ConvergenceConstants(alpha0, beta0, alpha, beta, alpha < 1.0,
                                beta0_xi_scaled)


def wrsc_probe(obj: ScanObjective, g: Graph, k: int, xi: float,
               trials: int, seed: int) -> float:
    """Empirical contraction estimate of the restricted gradient map.

    Samples triples (x, y, S) with both supports inside a connected set S of
    size at most k (entries uniform on [0.6, 1], the upper relaxed-indicator
    region where candidate cluster indicators live) and returns the largest
    observed ratio ||x - y - xi grad_S f(x) + xi grad_S f(y)|| / ||x - y||.
    This is a diagnostic lower bound on the true constant.
    """
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    if g.n > 16:
        raise CapacityError(f"wrsc probe limited to n <= 16, got {g.n}")
    if obj.n != g.n:
        raise DimensionError(f"objective has n={obj.n}, graph has n={g.n}")
    subsets = list(enumerate_connected_subsets(g, k))
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(trials):
        s = subsets[int(rng.integers(len(subsets)))]
        idx = s.indices
        x = np.zeros(g.n)
        y = np.zeros(g.n)
        x[idx] = rng.uniform(0.6, 1.0, idx.size)
        y[idx] = rng.uniform(0.6, 1.0, idx.size)
        gx = np.zeros(g.n)
        gy = np.zeros(g.n)
        gx[idx] = objective_gradient(obj, x)[idx]
        gy[idx] = objective_gradient(obj, y)[idx]
        diff = x - y - xi * gx + xi * gy
        den = float(np.linalg.norm(x - y))
        if den > 1e-15:
            best = max(best, float(np.linalg.norm(diff)) / den)
    return best


def best_scoring_component(g: Graph, obj: ScanObjective,
                           support: SupportSet) -> SupportSet:
    """The connected component of ``support`` with the highest scan score.

    This is the reported subgraph: approximate projections can leave several
    components, and the detector's answer is the best one. Ties go to the
    smaller, lexicographically first component.
    """
    comps = connected_components(g, support)
    if not comps:
        return SupportSet(())
    return min(comps, key=lambda c: (-scan_score(obj, c), c.size, c.members))
