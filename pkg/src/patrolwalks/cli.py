"""Command-line interface.

Exit codes: 0 success / feasible verdict, 1 infeasible verdict, 2 usage
error, 3 data error (malformed JSON, invalid instance).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .greedy import GreedyConfig, solve_orienteering_greedy, solve_simple_greedy
from .approx import solve_approx
from .instances import (
    GenSpec,
    generate,
    instance_from_json,
    instance_to_json,
    run_benchmark,
    solution_from_json,
    solution_to_json,
    default_solvers,
)
from .minmax import (
    NoFeasibleRobotsError,
    WeightedInstance,
    bicriterion_min_robots,
    latency_walks,
    weighted_cost,
)
from .model import Instance, validate_instance, verify
from .oracle import exact_decision

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_DATA = 3


def _load_instance(path: str) -> Instance:
    inst = instance_from_json(Path(path).read_text())
    result = validate_instance(inst)
    if not result.ok:
        msgs = "; ".join(v.message for v in result.violations[:5])
        raise ValueError(f"invalid instance {path}: {msgs}")
    return inst


def _greedy_cfg(args) -> GreedyConfig:
    return GreedyConfig(m=Fraction(args.m), restarts=args.restarts,
                        rng_seed=args.seed)


def _cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    if args.algo == "approx":
        sol = solve_approx(inst)
    elif args.algo == "greedy":
        sol = solve_simple_greedy(inst, _greedy_cfg(args))
    else:
        sol = solve_orienteering_greedy(inst, _greedy_cfg(args))
    report = verify(sol, inst)
    # solvers are feasible by construction; a failure here is a bug
    assert report.feasible, "solver emitted an infeasible solution"
    Path(args.output).write_text(solution_to_json(sol))
    print(f"{args.algo}: {sol.robots} robot(s), "
          f"total walk length {sol.total_length(inst)}")
    print(report.summary(inst))
    return EXIT_OK


def _cmd_verify(args) -> int:
    inst = _load_instance(args.instance)
    sol = solution_from_json(Path(args.solution).read_text())
    report = verify(sol, inst)
    print(report.summary(inst))
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def _cmd_gen(args) -> int:
    spec = GenSpec(n=args.n, k_range=(args.k_min, args.k_max), seed=args.seed)
    inst = generate(spec)
    Path(args.output).write_text(instance_to_json(inst))
    print(f"wrote {inst.name} ({inst.n} vertices) to {args.output}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    paths = sorted(Path(args.dir).glob("*.json"))
    if not paths:
        raise ValueError(f"no instance files in {args.dir}")
    instances = [_load_instance(str(p)) for p in paths]
    cfg = GreedyConfig(restarts=args.restarts, rng_seed=args.seed)
    table = run_benchmark(instances, args.algos, budget=args.budget,
                          solvers=default_solvers(cfg))
    print(table.summary())
    if args.csv:
        Path(args.csv).write_text(table.to_csv())
        print(f"wrote {len(table.rows)} rows to {args.csv}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    inst = _load_instance(args.instance)
    feasible, sol = exact_decision(inst, args.robots, args.horizon)
    if not feasible:
        print(f"infeasible at horizon {args.horizon} with {args.robots} robot(s)")
        return EXIT_INFEASIBLE
    report = verify(sol, inst)
    assert report.feasible
    if args.output:
        Path(args.output).write_text(solution_to_json(sol))
    print(f"feasible with {args.robots} robot(s); period "
          f"{max(w.period(inst) for w in sol.walks)}")
    print(report.summary(inst))
    return EXIT_OK


def _cmd_minmax(args) -> int:
    inst = _load_instance(args.instance)
    winst = WeightedInstance.from_instance(inst)
    sol = latency_walks(winst, args.robots)
    cost = weighted_cost(sol, winst)
    if args.output:
        Path(args.output).write_text(solution_to_json(sol))
    print(f"{sol.robots} walk(s); max weighted latency {cost} "
          f"(weights r_min/r(v))")
    return EXIT_OK


def _cmd_minrobots(args) -> int:
    inst = _load_instance(args.instance)
    try:
        res = bicriterion_min_robots(inst, Fraction(args.alpha))
    except NoFeasibleRobotsError as exc:
        print(f"no feasible robot count: {exc}")
        return EXIT_INFEASIBLE
    if args.output:
        Path(args.output).write_text(solution_to_json(res.solution))
    print(f"minimum robots: {res.robots}; achieved relaxation "
          f"{res.achieved_relaxation} (requested {args.alpha})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patrolwalks",
        description="Periodic patrol planning under per-vertex revisit deadlines")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run a solver on an instance")
    p.add_argument("--algo", choices=("approx", "greedy", "ogreedy"),
                   required=True)
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--m", default="1/10", help="covered-vertex weight discount")
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check a solution against an instance")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("-s", "--solution", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-min", type=int, default=4)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="benchmark solvers over a directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--algos", nargs="+", default=["approx", "greedy", "ogreedy"])
    p.add_argument("--budget", type=float, default=60.0,
                   help="soft per-cell budget in seconds")
    p.add_argument("--csv", help="write rows to this CSV file")
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("oracle", help="exact bounded search (tiny instances)")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("--robots", type=int, required=True)
    p.add_argument("--horizon", type=int, default=32)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("minmax", help="min-max weighted latency with R robots")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("--robots", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_minmax)

    p = sub.add_parser("minrobots",
                       help="fewest robots within a relaxation factor")
    p.add_argument("-i", "--instance", required=True)
    p.add_argument("--alpha", default="1", help="deadline relaxation factor")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_minrobots)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON at line {exc.lineno}, column {exc.colno}: "
              f"{exc.msg}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entrypoint():  # console script
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
