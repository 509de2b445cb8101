"""Multi-robot periodic patrol planning on metric graphs with per-vertex
revisit deadlines.

The library finds sets of periodic timed walks that keep the time between
consecutive visits to every vertex within that vertex's deadline, using as
few robots as it can, and can certify optimality on tiny instances with an
exact bounded search.
"""

from .approx import ALPHA_MCCP, LatencyPartition, partition_by_latency, solve_approx
from .greedy import (
    GreedyConfig,
    max_feasible_detour,
    solve_orienteering_greedy,
    solve_simple_greedy,
)
from .instances import (
    GenSpec,
    ResultTable,
    generate,
    instance_from_json,
    instance_to_json,
    run_benchmark,
    solution_from_json,
    solution_to_json,
)
from .minmax import (
    BicriterionResult,
    WeightedInstance,
    bicriterion_min_robots,
    latency_walks,
    min_max_one_robot,
    weighted_cost,
)
from .model import (
    Instance,
    LatencyReport,
    Solution,
    Time,
    TimedWalk,
    UNVISITED,
    ValidationResult,
    as_time,
    build_visit_schedule,
    evaluate_latencies,
    periodic_feasibility,
    validate_instance,
    verify,
)
from .oracle import exact_decision, exact_min_robots
from .routing import Cycle, Path, equally_place, mccp, orienteering, tsp_tour

__version__ = "0.1.0"

__all__ = [
    "ALPHA_MCCP",
    "BicriterionResult",
    "Cycle",
    "GenSpec",
    "GreedyConfig",
    "Instance",
    "LatencyPartition",
    "LatencyReport",
    "Path",
    "ResultTable",
    "Solution",
    "Time",
    "TimedWalk",
    "UNVISITED",
    "ValidationResult",
    "WeightedInstance",
    "as_time",
    "bicriterion_min_robots",
    "build_visit_schedule",
    "equally_place",
    "evaluate_latencies",
    "exact_decision",
    "exact_min_robots",
    "generate",
    "instance_from_json",
    "instance_to_json",
    "latency_walks",
    "max_feasible_detour",
    "mccp",
    "min_max_one_robot",
    "orienteering",
    "partition_by_latency",
    "periodic_feasibility",
    "run_benchmark",
    "solution_from_json",
    "solution_to_json",
    "solve_approx",
    "solve_orienteering_greedy",
    "solve_simple_greedy",
    "tsp_tour",
    "validate_instance",
    "verify",
    "weighted_cost",
    "__version__",
]
