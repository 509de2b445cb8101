"""Deadline-class partition solver.

Vertices are split into doubling classes of their revisit deadlines; each
class is covered either by a budgeted cycle cover (at most four robots per
cycle after the class relaxation) or by a single TSP tour with enough
equally spaced robots, whichever needs fewer robots. The construction is
feasible by design and deterministic.

The cycle-cover scheme here is tour-splitting, whose documented
approximation constant is ALPHA_MCCP = 4 (see routing.mccp); the overall
robot-count guarantee of this solver is 4 * ALPHA_MCCP * ceil(log2(spread))
times optimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .model import Instance, Solution, ceil_log2
from .routing import Cycle, equally_place, mccp, tsp_tour

#: Constant factor of the tour-splitting cycle cover: an optimal cover's m
#: cycles link into a tour of length <= 1.5 * m * budget once the budget is
#: at least twice the diameter, and greedy budget/2 splitting cuts such a
#: tour into at most 3m + 1 <= 4m cycles. Assumes an optimal tour; the
#: NN+2-opt tour used in practice carries no worst-case bound.
ALPHA_MCCP = 4


@dataclass(frozen=True)
class LatencyPartition:
    """Doubling classes of the deadline range.

    Class i (1-based) holds vertices with r_min * 2^(i-1) <= r(v) <
    r_min * 2^i; ``relaxed[i-1]`` is the class's rounded-up deadline
    r_min * 2^i used by the construction's budgets.
    """

    classes: tuple[frozenset[int], ...]
    relaxed: tuple[Fraction, ...]
    r_min: Fraction
    rho: Fraction


def partition_by_latency(inst: Instance) -> LatencyPartition:
    """Split vertices into ceil(log2(rho)) doubling deadline classes."""
    r_min = inst.r_min
    rho = inst.rho
    count = ceil_log2(rho)
    classes: list[set[int]] = [set() for _ in range(count)]
    for v in range(inst.n):
        ratio = inst.r[v] / r_min
        # largest idx with 2^idx <= ratio < 2^(idx+1); boundary deadlines
        # r = r_min * 2^idx belong to the class they open
        idx = 0
        while Fraction(2) ** (idx + 1) <= ratio:
            idx += 1
        classes[idx].add(v)
    relaxed = tuple(r_min * Fraction(2) ** (i + 1) for i in range(count))
    return LatencyPartition(
        classes=tuple(frozenset(c) for c in classes),
        relaxed=relaxed,
        r_min=r_min,
        rho=rho,
    )


def _robots_for(cycle: Cycle, min_deadline: Fraction) -> int:
    return max(1, math.ceil(cycle.length / min_deadline))


def solve_approx(inst: Instance) -> Solution:
    """Cover every deadline class with cycles and space robots on them.

    Per class: (a) cycle-cover the class with budget r_min * 2^(i+1) and put
    ceil(length / min-covered-deadline) robots on each cycle; (b) put
    ceil(tour-length / min-class-deadline) robots on the class's TSP tour.
    Keep whichever uses fewer robots (ties go to the single tour).
    """
    partition = partition_by_latency(inst)
    walks = []
    for i, cls in enumerate(partition.classes):
        if not cls:
            continue
        budget = inst.r_min * Fraction(2) ** (i + 2)
        cover = mccp(inst, cls, budget)
        cover_placement = [(c, _robots_for(c, min(inst.r[v] for v in c.vertices)))
                           for c in cover]
        cover_robots = sum(k for _, k in cover_placement)

        tour = tsp_tour(inst, cls)
        tour_robots = _robots_for(tour, min(inst.r[v] for v in cls))

        if tour_robots <= cover_robots:
            walks.extend(equally_place(tour, tour_robots))
        else:
            for cycle, k in cover_placement:
                walks.extend(equally_place(cycle, k))
    return Solution(tuple(walks))
