"""Command-line entry point: detect, simulate, evaluate, bench.

Exit codes: 0 success, 2 parse/argument error, 3 dimension mismatch,
4 numeric failure. Every command echoes a manifest sufficient to reproduce
the run byte for byte with the same build.
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import bench as bench_mod
from . import io as gio
from .errors import (CapacityError, DimensionError, DomainError,
                     GraphScanError, InputError, NumericError)
from .objectives import EBP, EMS, KULLDORFF, scan_score
from .solvers import SolverConfig, best_scoring_component
from .synth import (SyntheticSpec, generate_instance, resolve_threads,
                    score_detection)
from .synth import build_objective as _build_stat
from .synth import dispatch_solver


def _detect(args) -> int:
    if args.k < 1:
        raise InputError(f"k must be >= 1, got {args.k}")
    g, ids, counts, baselines = gio.load_instance(args.graph, args.signal)
    if args.stat in (KULLDORFF, EBP) and baselines is None:
        raise InputError(f"statistic {args.stat} needs a baseline column 'b'")
    if args.stat == EMS:
        obj = _build_stat(EMS, counts)
    else:
        from .objectives import ebp_objective, kulldorff_objective
        maker = kulldorff_objective if args.stat == KULLDORFF else ebp_objective
        obj = maker(counts, baselines)
    cfg = SolverConfig(k=args.k, eta=args.eta, max_iters=args.max_iters,
                       tol=args.tol, rng_seed=args.seed)
    t0 = time.perf_counter()
    run = dispatch_solver(args.algo, g, obj, cfg)
    wall = time.perf_counter() - t0
    reported = best_scoring_component(g, obj, run.support)
    manifest = gio.make_manifest(
        "detect",
        {"graph": args.graph, "signal": args.signal, "stat": args.stat,
         "k": args.k, "algo": args.algo, "eta": args.eta,
         "max_iters": args.max_iters, "tol": args.tol, "seed": args.seed},
        [args.graph, args.signal],
        [args.out] if args.out else [],
        node_order=list(ids),
    )
    result = {
        "manifest": manifest,
        "support": [ids[i] for i in reported.members],
        "estimate": {ids[i]: float(run.estimate[i]) for i in range(g.n)},
        "score": scan_score(obj, reported),
        "trace": [
            {"omega": [ids[i] for i in t.omega.members],
             "support": [ids[i] for i in t.support.members],
             "objective": t.objective,
             "step_norm": t.step_norm,
             "inner_converged": t.inner_converged}
            for t in run.trace
        ],
        "iterations": run.iterations,
        "wall_time_s": wall,
    }
    text = gio.dumps_17g(result) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _simulate(args) -> int:
    topo = args.topology.replace("-", "_")
    spec = SyntheticSpec(
        topology=topo, rows=args.rows, cols=args.cols, n=args.n,
        radius=args.radius, cluster_size=args.cluster_size, mu=args.mu,
        noise_flip_fraction=args.noise, binary=args.binary, seed=args.seed)
    g, counts, truth = generate_instance(spec)
    ids = [str(i) for i in range(g.n)]
    edge_path = f"{args.out_prefix}.edges"
    node_path = f"{args.out_prefix}.nodes"
    truth_path = f"{args.out_prefix}.truth"
    manifest_path = f"{args.out_prefix}.manifest.json"
    gio.write_edge_file(edge_path, ids, g)
    baselines = None
    if args.binary:
        baselines = np.full(g.n, max(float(counts.mean()), 0.0))
    gio.write_node_file(node_path, ids, counts, baselines)
    gio.write_id_file(truth_path, [ids[i] for i in truth.members])
    manifest = gio.make_manifest(
        "simulate",
        {"topology": topo, "rows": args.rows, "cols": args.cols, "n": args.n,
         "radius": args.radius, "cluster_size": args.cluster_size,
         "mu": args.mu, "noise": args.noise, "binary": args.binary,
         "seed": args.seed},
        [],
        [edge_path, node_path, truth_path],
    )
    with open(manifest_path, "w", encoding="utf-8") as fh:
        fh.write(gio.dumps_17g(manifest) + "\n")
    sys.stdout.write(gio.dumps_17g(
        {"outputs": [edge_path, node_path, truth_path, manifest_path],
         "n": g.n, "edges": g.num_edges, "truth_size": truth.size}) + "\n")
    return 0


def _evaluate(args) -> int:
    truth_ids = gio.read_id_file(args.truth)
    detected_ids = gio.read_id_file(args.detected)
    universe = {nid: i for i, nid in
                enumerate(dict.fromkeys(truth_ids + detected_ids))}
    from .graphs import SupportSet
    truth = SupportSet(tuple(universe[t] for t in truth_ids))
    detected = SupportSet(tuple(universe[d] for d in detected_ids))
    m = score_detection(truth, detected)
    sys.stdout.write(gio.dumps_17g(
        {"precision": m.precision, "recall": m.recall,
         "f_measure": m.f_measure}) + "\n")
    return 0


def _bench(args) -> int:
    results = bench_mod.run_suite(args.suite, seed=args.seed)
    all_pass = True
    out_paths = []
    for res in results:
        path = f"{args.out_prefix}.{res.name}.csv"
        gio.write_csv(path, res.rows, res.columns)
        out_paths.append(path)
        all_pass = all_pass and res.passed
        sys.stdout.write(gio.dumps_17g(
            {"check": res.name, "passed": res.passed,
             "details": res.details}) + "\n")
    manifest = gio.make_manifest(
        "bench", {"suite": args.suite, "seed": args.seed}, [], out_paths)
    with open(f"{args.out_prefix}.manifest.json", "w", encoding="utf-8") as fh:
        fh.write(gio.dumps_17g(manifest) + "\n")
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphscan",
        description="Connected-subgraph detection via graph-structured "
                    "sparse optimization")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect the best connected subgraph")
    p.add_argument("--graph", required=True, help="edge file")
    p.add_argument("--signal", required=True, help="node file (node,c[,b])")
    p.add_argument("--stat", required=True, choices=[EMS, KULLDORFF, EBP])
    p.add_argument("--k", type=int, required=True, help="max subgraph size")
    p.add_argument("--algo", default="ghtp", choices=["iht", "ghtp"])
    p.add_argument("--eta", type=float, default=1.0, help="step size")
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="result JSON path (default stdout)")
    p.set_defaults(fn=_detect)

    p = sub.add_parser("simulate", help="write a synthetic instance")
    p.add_argument("--topology", default="grid",
                   choices=["grid", "path", "random-geometric"])
    p.add_argument("--rows", type=int, default=20)
    p.add_argument("--cols", type=int, default=20)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--radius", type=float, default=0.0)
    p.add_argument("--cluster-size", type=int, default=10)
    p.add_argument("--mu", type=float, default=3.0)
    p.add_argument("--noise", type=float, default=0.0,
                   help="flip fraction in [0, 1]")
    p.add_argument("--binary", action="store_true",
                   help="emit 0/1 sensor reports instead of continuous counts")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(fn=_simulate)

    p = sub.add_parser("evaluate", help="precision/recall/F of a detection")
    p.add_argument("--truth", required=True, help="truth id file")
    p.add_argument("--detected", required=True, help="detected id file")
    p.set_defaults(fn=_evaluate)

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("--suite", required=True, choices=sorted(bench_mod.SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", default="bench")
    p.set_defaults(fn=_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        resolve_threads(None)  # fail fast on a malformed env override
        return args.fn(args)
    except (InputError, CapacityError, DomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except DimensionError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except NumericError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except GraphScanError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
