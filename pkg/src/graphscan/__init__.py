"""Connected-subgraph detection via graph-structured sparse optimization.

Core pieces: an undirected graph model, a Goemans-Williamson prize-collecting
Steiner tree engine, head/tail approximate projections onto the
connected-subgraph sparsity model, differentiable graph scan statistics, the
Graph-IHT and Graph-GHTP solvers, and a synthetic benchmark harness.
"""

from .errors import (CapacityError, DimensionError, DomainError,
                     GraphScanError, InputError, NumericError)
from .graphs import (Graph, SupportSet, connected_components,
                     enumerate_connected_subsets, grid_graph, is_connected,
                     path_graph)
from .objectives import (EBP, EMS, KULLDORFF, TOY_QUADRATIC, ScanObjective,
                         ebp_objective, ems_objective, kulldorff_objective,
                         normalize_counts_ems, objective_gradient,
                         objective_value, scan_score, toy_quadratic_objective,
                         wrsc_delta_ems)
from .pcst import (PcstInstance, PcstSolution, pcst_budgeted, pcst_exact,
                   pcst_gw)
from .projections import (HEAD_FACTOR, TAIL_FACTOR, ModelParams,
                          check_c_condition, head_approx, project_exact,
                          tail_approx)
from .solvers import (MAX_ITERS_ONLY, RESIDUAL, SUPPORT_STABLE,
                      ConvergenceConstants, IterationRecord, SolverConfig,
                      SolverRun, best_scoring_component, convergence_constants,
                      exact_projection_oracle, graph_ghtp, graph_iht,
                      positive_support, restricted_minimize, wrsc_probe)
from .synth import (DetectionMetrics, SyntheticSpec, generate_instance,
                    run_trials, scalability_sweep, score_detection)

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "DimensionError", "DomainError", "GraphScanError",
    "InputError", "NumericError",
    "Graph", "SupportSet", "connected_components",
    "enumerate_connected_subsets", "grid_graph", "is_connected", "path_graph",
    "EBP", "EMS", "KULLDORFF", "TOY_QUADRATIC", "ScanObjective",
    "ebp_objective", "ems_objective", "kulldorff_objective",
    "normalize_counts_ems", "objective_gradient", "objective_value",
    "scan_score", "toy_quadratic_objective", "wrsc_delta_ems",
    "PcstInstance", "PcstSolution", "pcst_budgeted", "pcst_exact", "pcst_gw",
    "HEAD_FACTOR", "TAIL_FACTOR", "ModelParams", "check_c_condition",
    "head_approx", "project_exact", "tail_approx",
    "MAX_ITERS_ONLY", "RESIDUAL", "SUPPORT_STABLE", "ConvergenceConstants",
    "IterationRecord", "SolverConfig", "SolverRun", "best_scoring_component",
    "convergence_constants", "exact_projection_oracle", "graph_ghtp",
    "graph_iht", "positive_support", "restricted_minimize", "wrsc_probe",
    "DetectionMetrics", "SyntheticSpec", "generate_instance", "run_trials",
    "scalability_sweep", "score_detection",
    "__version__",
]
