"""Random instance generation, JSON file formats, and the benchmark harness.

Generated instances are uniform points in the unit square with Euclidean
distances rounded to a fixed 1e-6 grid and then metrically closed, so every
instance is exactly rational and triangle-clean. Deadlines are drawn
uniformly between tour/k and k*tour for a per-instance k.

File formats (byte-stable under round-trip):
  instance: {"name": str, "n": int, "dist": [[num|"p/q"]], "r": [num|"p/q"]}
  solution: {"walks": [{"steps": [[vertex, num|"p/q"]], "offset": num|"p/q"}]}
"""

from __future__ import annotations

import json
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .approx import solve_approx
from .greedy import GreedyConfig, solve_orienteering_greedy, solve_simple_greedy
from .model import Instance, Solution, TimedWalk, as_time, verify
from .routing import tsp_tour

_MICRO = 10 ** 6


@dataclass(frozen=True)
class GenSpec:
    """Recipe for one random instance: n uniform unit-square points, with
    the deadline spread parameter k drawn from ``k_range`` (inclusive)."""

    n: int
    k_range: tuple[int, int] = (4, 8)
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        lo, hi = self.k_range
        if not (2 <= lo <= hi <= 16):
            raise ValueError("k_range must sit inside [2, 16]")


def generate(spec: GenSpec) -> Instance:
    """Deterministic per seed; output always passes validate_instance."""
    rng = random.Random(spec.seed)
    pts = [(rng.random(), rng.random()) for _ in range(spec.n)]
    n = spec.n

    micro = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
            micro[i][j] = micro[j][i] = max(1, round(d * _MICRO))
    # metric closure repairs any rounding-induced triangle violations
    for k in range(n):
        for i in range(n):
            dik = micro[i][k]
            for j in range(n):
                if dik + micro[k][j] < micro[i][j]:
                    micro[i][j] = dik + micro[k][j]

    dist = tuple(tuple(Fraction(micro[i][j], _MICRO) for j in range(n))
                 for i in range(n))
    probe = Instance(name="probe", dist=dist,
                     r=tuple(Fraction(1) for _ in range(n)))
    tour_len = tsp_tour(probe, range(n)).length
    if tour_len == 0:
        tour_len = Fraction(1)

    k = rng.randint(*spec.k_range)
    lo, hi = float(tour_len) / k, float(tour_len) * k
    r = tuple(Fraction(max(1, round(rng.uniform(lo, hi) * _MICRO)), _MICRO)
              for _ in range(n))
    return Instance(name=f"rand-n{n}-s{spec.seed}", dist=dist, r=r)


# ---------------------------------------------------------------------------
# JSON formats
# ---------------------------------------------------------------------------

def _num(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def instance_to_json(inst: Instance) -> str:
    payload = {
        "name": inst.name,
        "n": inst.n,
        "dist": [[_num(x) for x in row] for row in inst.dist],
        "r": [_num(x) for x in inst.r],
    }
    return json.dumps(payload, indent=2) + "\n"


def instance_from_json(text: str) -> Instance:
    payload = json.loads(text, parse_float=Fraction)
    inst = Instance.build(
        name=str(payload["name"]),
        dist=payload["dist"],
        r=payload["r"],
    )
    if inst.n != int(payload["n"]):
        raise ValueError(f"declared n={payload['n']} but found {inst.n} vertices")
    return inst


def solution_to_json(sol: Solution) -> str:
    payload = {
        "walks": [
            {
                "steps": [[v, _num(h)] for v, h in w.steps],
                "offset": _num(w.offset),
            }
            for w in sol.walks
        ]
    }
    return json.dumps(payload, indent=2) + "\n"


def solution_from_json(text: str) -> Solution:
    payload = json.loads(text, parse_float=Fraction)
    walks = []
    for blob in payload["walks"]:
        steps = tuple((int(v), as_time(h)) for v, h in blob["steps"])
        walks.append(TimedWalk(steps=steps, offset=as_time(blob.get("offset", 0))))
    return Solution(tuple(walks))


# ---------------------------------------------------------------------------
# Benchmark harness
# ---------------------------------------------------------------------------

Solver = Callable[[Instance], Solution]


def default_solvers(cfg: GreedyConfig = GreedyConfig()) -> dict[str, Solver]:
    return {
        "approx": solve_approx,
        "greedy": lambda inst: solve_simple_greedy(inst, cfg),
        "ogreedy": lambda inst: solve_orienteering_greedy(inst, cfg),
    }


@dataclass(frozen=True)
class BenchRow:
    instance: str
    n: int
    algorithm: str
    robots: int
    total_length: Fraction
    millis: int
    feasible: bool
    timed_out: bool


@dataclass(frozen=True)
class ResultTable:
    rows: tuple[BenchRow, ...]

    CSV_HEADER = "instance,algorithm,robots,total_length,millis,feasible"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for row in self.rows:
            lines.append(f"{row.instance},{row.algorithm},{row.robots},"
                         f"{_num(row.total_length)},{row.millis},"
                         f"{'true' if row.feasible else 'false'}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, sizes: dict[str, int] | None = None) -> "ResultTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if lines[0] != cls.CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {lines[0]!r}")
        rows = []
        for ln in lines[1:]:
            inst, algo, robots, length, millis, feas = ln.split(",")
            rows.append(BenchRow(
                instance=inst,
                n=(sizes or {}).get(inst, 0),
                algorithm=algo,
                robots=int(robots),
                total_length=as_time(length),
                millis=int(millis),
                feasible=feas == "true",
                timed_out=False,
            ))
        return cls(tuple(rows))

    def summary(self) -> str:
        """Plain-text table: per (size bucket, algorithm) mean/min/max robot
        counts and mean wall time."""
        buckets: dict[tuple[int, str], list[BenchRow]] = {}
        for row in self.rows:
            buckets.setdefault((row.n, row.algorithm), []).append(row)
        lines = [f"{'n':>4} {'algorithm':>10} {'cells':>5} {'robots':>20} "
                 f"{'mean ms':>9} {'feasible':>8}"]
        for (n, algo), rows in sorted(buckets.items()):
            robots = [r.robots for r in rows]
            mean = sum(robots) / len(robots)
            ms = sum(r.millis for r in rows) / len(rows)
            feas = all(r.feasible for r in rows)
            flag = "" if not any(r.timed_out for r in rows) else " (timeouts)"
            lines.append(
                f"{n:>4} {algo:>10} {len(rows):>5} "
                f"{f'{mean:.2f} (min {min(robots)}, max {max(robots)})':>20} "
                f"{ms:>9.1f} {'yes' if feas else 'NO':>8}{flag}")
        return "\n".join(lines)


def run_benchmark(instances: Sequence[Instance], algorithms: Iterable[str],
                  budget: float = 60.0,
                  solvers: dict[str, Solver] | None = None,
                  max_workers: int | None = None) -> ResultTable:
    """Run every algorithm on every instance and verify each output.

    ``budget`` is a soft per-cell limit in seconds: cells run to completion
    and are flagged timed_out when they exceed it (pure in-process calls
    cannot be preempted safely). Cells run concurrently; rows come back
    sorted by (instance, algorithm).
    """
    table = solvers or default_solvers()
    algorithms = list(algorithms)
    unknown = [a for a in algorithms if a not in table]
    if unknown:
        raise KeyError(f"unknown algorithms: {unknown}; "
                       f"available: {sorted(table)}")

    def cell(inst: Instance, name: str) -> BenchRow:
        start = time.perf_counter()
        sol = table[name](inst)
        elapsed = time.perf_counter() - start
        report = verify(sol, inst)
        return BenchRow(
            instance=inst.name,
            n=inst.n,
            algorithm=name,
            robots=sol.robots,
            total_length=sol.total_length(inst),
            millis=round(elapsed * 1000),
            feasible=report.feasible and sol.covered() == frozenset(range(inst.n)),
            timed_out=elapsed > budget,
        )

    jobs = [(inst, name) for inst in instances for name in algorithms]
    if not jobs:
        return ResultTable(())
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        rows = list(pool.map(lambda job: cell(*job), jobs))
    rows.sort(key=lambda row: (row.instance, row.algorithm))
    return ResultTable(tuple(rows))
