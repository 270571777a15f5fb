"""Synthetic instances, detection metrics, and the experiment harness.

Signal model: every node draws standard normal noise; nodes of a planted
connected cluster get a mean shift of ``mu`` on top (continuous mode) or
report 0/1 sensor values (binary mode). Flip noise selects a fixed fraction
of nodes and inverts their cluster membership before emission, mirroring the
sensor-flipping protocol; in binary mode that is exactly a report flip.

All randomness flows from the spec seed through one generator; trial seeds
are derived as seed + trial index. Trials are independent and may run in
parallel (set GRAPHSCAN_THREADS or pass ``threads``); aggregation always
folds in trial order.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import InputError
from .graphs import Graph, SupportSet, grid_graph, is_connected, path_graph
from .objectives import (EBP, EMS, KULLDORFF, ScanObjective, ebp_objective,
                         ems_objective, kulldorff_objective, normalize_counts_ems)
from .solvers import (MAX_ITERS_ONLY, SolverConfig, best_scoring_component,
                      graph_ghtp, graph_iht)

GRID = "grid"
PATH = "path"
RANDOM_GEOMETRIC = "random_geometric"

THREADS_ENV = "GRAPHSCAN_THREADS"


@dataclass(frozen=True)
class SyntheticSpec:
    topology: str = GRID
    rows: int = 20
    cols: int = 20
    n: int = 0
    radius: float = 0.0
    cluster_size: int = 10
    mu: float = 3.0
    noise_flip_fraction: float = 0.0
    binary: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.topology not in (GRID, PATH, RANDOM_GEOMETRIC):
            raise InputError(f"unknown topology {self.topology!r}")
        if not (0.0 <= self.noise_flip_fraction <= 1.0):
            raise InputError(
                f"noise_flip_fraction must be in [0, 1], got {self.noise_flip_fraction}")
        if not np.isfinite(self.mu):
            raise InputError("mu must be finite")
        if self.cluster_size < 1:
            raise InputError(f"cluster_size must be >= 1, got {self.cluster_size}")


@dataclass(frozen=True)
class DetectionMetrics:
    precision: float
    recall: float
    f_measure: float


def _build_topology(spec: SyntheticSpec, rng: np.random.Generator) -> Graph:
    if spec.topology == GRID:
        return grid_graph(spec.rows, spec.cols)
    if spec.topology == PATH:
        return path_graph(spec.n)
    if spec.n < 1:
        raise InputError("random geometric topology needs n >= 1")
    pts = rng.uniform(0.0, 1.0, (spec.n, 2))
    r2 = spec.radius * spec.radius
    edges = []
    for i in range(spec.n):
        d = pts[i + 1:] - pts[i]
        hits = np.flatnonzero((d * d).sum(axis=1) <= r2)
        edges.extend((i, i + 1 + int(j)) for j in hits)
    return Graph(spec.n, edges)


def _grow_cluster(g: Graph, size: int, rng: np.random.Generator) -> SupportSet:
    """Uniform random connected set: seeded BFS-style growth from a random node."""
    if size > g.n:
        raise InputError(f"cluster_size {size} exceeds node count {g.n}")
    start = int(rng.integers(g.n))
    chosen = {start}
    frontier = [int(u) for u in g.neighbors(start) if int(u) not in chosen]
    while len(chosen) < size:
        if not frontier:
            raise InputError(
                f"cannot grow a connected cluster of {size} nodes from node {start}")
        pick = int(rng.integers(len(frontier)))
        v = frontier.pop(pick)
        if v in chosen:
            continue
        chosen.add(v)
        for u in g.neighbors(v):
            u = int(u)
            if u not in chosen and u not in frontier:
                frontier.append(u)
    return SupportSet(tuple(chosen))


def generate_instance(spec: SyntheticSpec):
    """Build (graph, counts, truth) deterministically from the spec seed.

    Draw order: topology, cluster growth, flip selection, then signal noise.
    """
    rng = np.random.default_rng(spec.seed)
    g = _build_topology(spec, rng)
    truth = _grow_cluster(g, spec.cluster_size, rng)
    indicator = truth.to_mask(g.n)
    n_flips = int(round(spec.noise_flip_fraction * g.n))
    if n_flips > 0:
        flipped = rng.choice(g.n, size=n_flips, replace=False)
        indicator = indicator.copy()
        indicator[flipped] = ~indicator[flipped]
    if spec.binary:
        counts = indicator.astype(np.float64)
    else:
        counts = spec.mu * indicator.astype(np.float64) + rng.standard_normal(g.n)
    return g, counts, truth


def score_detection(truth: SupportSet, detected: SupportSet) -> DetectionMetrics:
    """Precision, recall, and F-measure of a detected support."""
    t = set(truth.members)
    d = set(detected.members)
    overlap = len(t & d)
    precision = overlap / len(d) if d else 0.0
    recall = overlap / len(t) if t else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return DetectionMetrics(precision, recall, f)


def build_objective(stat_kind: str, counts: np.ndarray) -> ScanObjective:
    """Objective for a synthetic instance, with the benchmark baselines.

    EMS normalizes the counts; the count statistics use the sensor
    conventions (EBP baseline = global average report, Kulldorff baseline =
    constant 1).
    """
    if stat_kind == EMS:
        return ems_objective(normalize_counts_ems(counts))
    if stat_kind == KULLDORFF:
        return kulldorff_objective(counts, np.ones_like(counts))
    if stat_kind == EBP:
        return ebp_objective(counts, np.full_like(counts, max(counts.mean(), 0.0)))
    raise InputError(f"unknown statistic {stat_kind!r}")


def dispatch_solver(algo_kind: str, g: Graph, obj: ScanObjective, cfg: SolverConfig):
    if algo_kind == "iht":
        return graph_iht(g, obj, cfg)
    if algo_kind == "ghtp":
        return graph_ghtp(g, obj, cfg)
    raise InputError(f"unknown algorithm {algo_kind!r}")


def run_single_trial(spec: SyntheticSpec, stat_kind: str, algo_kind: str,
                     cfg: SolverConfig) -> dict:
    """One seeded instance end to end; returns the trial row."""
    t0 = time.perf_counter()
    try:
        g, counts, truth = generate_instance(spec)
        obj = build_objective(stat_kind, counts)
        run = dispatch_solver(algo_kind, g, obj, cfg)
        detected = best_scoring_component(g, obj, run.support)
        metrics = score_detection(truth, detected)
        return {
            "seed": spec.seed,
            "precision": metrics.precision,
            "recall": metrics.recall,
            "f_measure": metrics.f_measure,
            "iterations": run.iterations,
            "detected_size": detected.size,
            "failed": False,
            "error": "",
            "wall_time_s": time.perf_counter() - t0,
        }
    except Exception as err:  # per-trial failures are recorded, not fatal
        return {
            "seed": spec.seed,
            "precision": 0.0,
            "recall": 0.0,
            "f_measure": 0.0,
            "iterations": 0,
            "detected_size": 0,
            "failed": True,
            "error": f"{type(err).__name__}: {err}",
            "wall_time_s": time.perf_counter() - t0,
        }


def _trial_worker(args):
    spec, stat_kind, algo_kind, cfg = args
    return run_single_trial(spec, stat_kind, algo_kind, cfg)


def resolve_threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError as err:
            raise InputError(f"{THREADS_ENV} must be an integer, got {env!r}") from err
    return 1


def run_trials(spec: SyntheticSpec, stat_kind: str, algo_kind: str,
               cfg: SolverConfig, n_trials: int, threads: int | None = None):
    """Seeded trial battery; returns (per-trial rows, aggregate dict).

    Trial i uses seed spec.seed + i. Failed trials are kept in the rows but
    excluded from the aggregates.
    """
    if n_trials < 1:
        raise InputError(f"n_trials must be >= 1, got {n_trials}")
    jobs = [(replace(spec, seed=spec.seed + i), stat_kind, algo_kind, cfg)
            for i in range(n_trials)]
    workers = resolve_threads(threads)
    if workers > 1 and n_trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_trial_worker, jobs))
    else:
        rows = [_trial_worker(job) for job in jobs]
    for i, row in enumerate(rows):
        row["trial"] = i
    ok = [r for r in rows if not r["failed"]]
    agg = {"n_trials": n_trials, "n_failed": n_trials - len(ok)}
    for key in ("precision", "recall", "f_measure", "iterations"):
        vals = np.asarray([r[key] for r in ok], dtype=np.float64)
        if vals.size:
            agg[f"mean_{key}"] = float(vals.mean())
            agg[f"median_{key}"] = float(np.median(vals))
            agg[f"std_{key}"] = float(vals.std())
        else:
            agg[f"mean_{key}"] = agg[f"median_{key}"] = agg[f"std_{key}"] = 0.0
    return rows, agg


def scalability_sweep(sizes, k_values, algo_kind: str, cfg: SolverConfig,
                      topology: str = PATH, seed: int = 0, mu: float = 3.0,
                      repeats: int = 1):
    """Wall time per (n, k) cell at a fixed iteration cap.

    Instances are continuous elevated-mean signals on a path or grid; the
    solver runs with halting disabled so every cell does identical iteration
    counts. ``repeats`` > 1 keeps the fastest time per cell.
    """
    sizes = list(sizes)
    if any(b < a for a, b in zip(sizes, sizes[1:])):
        raise InputError("sizes must be ascending")
    rows = []
    for n in sizes:
        if topology == PATH:
            spec = SyntheticSpec(topology=PATH, n=n, cluster_size=min(50, n),
                                 mu=mu, seed=seed)
        else:
            side = int(np.sqrt(n))
            spec = SyntheticSpec(topology=GRID, rows=side, cols=side,
                                 cluster_size=min(50, side * side), mu=mu, seed=seed)
        g, counts, _ = generate_instance(spec)
        obj = build_objective(EMS, counts)
        for k in k_values:
            cell_cfg = replace(cfg, k=int(k), halting=MAX_ITERS_ONLY)
            best = np.inf
            iters = 0
            for _ in range(max(1, repeats)):
                t0 = time.perf_counter()
                run = dispatch_solver(algo_kind, g, obj, cell_cfg)
                best = min(best, time.perf_counter() - t0)
                iters = run.iterations
            rows.append({"n": g.n, "k": int(k), "seconds": best,
                         "iterations": iters})
    return rows


def instance_is_valid(g: Graph, truth: SupportSet) -> bool:
    """Planted clusters are connected by construction; exposed for tests."""
    return is_connected(g, truth)
