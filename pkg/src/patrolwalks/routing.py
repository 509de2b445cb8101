"""Combinatorial routing primitives: TSP tours, budgeted cycle covers,
point-to-point orienteering, and equal placement of robots on a cycle.

Everything here is deterministic; ties break toward the lowest vertex
index. Lengths and prizes are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import kernels
from .model import Instance, TimedWalk


class InfeasibleBudgetError(ValueError):
    """A cycle cover could not respect the length budget."""


class BudgetTooSmallError(ValueError):
    """An orienteering budget below the direct x-to-y distance."""


@dataclass(frozen=True)
class Cycle:
    """A closed visiting order (each vertex once) with its cyclic length."""
    vertices: tuple[int, ...]
    length: Fraction


@dataclass(frozen=True)
class Path:
    """An s-to-t path with its length and collected prize."""
    vertices: tuple[int, ...]
    length: Fraction
    prize: Fraction


def _cycle_length(order: Sequence[int], inst: Instance) -> Fraction:
    total = Fraction(0)
    for i, v in enumerate(order):
        total += inst.dist[v][order[(i + 1) % len(order)]]
    return total


def _path_length(order: Sequence[int], inst: Instance) -> Fraction:
    total = Fraction(0)
    for a, b in zip(order, order[1:]):
        total += inst.dist[a][b]
    return total


def tsp_tour(inst: Instance, subset: Iterable[int]) -> Cycle:
    """Heuristic TSP cycle through ``subset``: nearest-neighbor from every
    start vertex, keep the shortest, then 2-opt to local optimality."""
    verts = sorted(set(subset))
    if not verts:
        raise ValueError("tsp_tour needs a nonempty subset")
    if len(verts) == 1:
        return Cycle((verts[0],), Fraction(0))
    if len(verts) == 2:
        a, b = verts
        return Cycle((a, b), inst.dist[a][b] * 2)

    best_order = None
    best_len = None
    for start in verts:
        order = [start]
        remaining = [v for v in verts if v != start]
        while remaining:
            cur = order[-1]
            nxt = min(remaining, key=lambda v: (inst.dist[cur][v], v))
            order.append(nxt)
            remaining.remove(nxt)
        length = _cycle_length(order, inst)
        if best_len is None or length < best_len:
            best_len = length
            best_order = order

    improved = kernels.two_opt_order(best_order, inst)
    return Cycle(tuple(improved), _cycle_length(improved, inst))


def mccp(inst: Instance, subset: Iterable[int], budget: Fraction) -> tuple[Cycle, ...]:
    """Cover ``subset`` with vertex-disjoint cycles of length at most
    ``budget``, using as few cycles as the tour-splitting scheme manages.

    The TSP tour of the subset is cut greedily into maximal segments of path
    length at most budget/2 (closing a segment into a cycle at most doubles
    it on a metric), then adjacent cycles are re-merged while the merged
    cycle still fits. Far-flung vertices end up on singleton zero-length
    cycles, i.e. parked robots.
    """
    budget = Fraction(budget)
    tour = tsp_tour(inst, subset)
    verts = tour.vertices
    if tour.length <= budget:
        return (tour,)

    half = budget / 2
    segments: list[list[int]] = []
    current = [verts[0]]
    current_len = Fraction(0)
    for v in verts[1:]:
        step = inst.dist[current[-1]][v]
        if current_len + step <= half:
            current.append(v)
            current_len += step
        else:
            segments.append(current)
            current = [v]
            current_len = Fraction(0)
    segments.append(current)

    cycles = [Cycle(tuple(seg), _cycle_length(seg, inst)) for seg in segments]

    merged = True
    while merged:
        merged = False
        i = 0
        while i + 1 < len(cycles):
            joined = cycles[i].vertices + cycles[i + 1].vertices
            length = _cycle_length(joined, inst)
            if length <= budget:
                cycles[i:i + 2] = [Cycle(joined, length)]
                merged = True
            else:
                i += 1

    for c in cycles:
        if c.length > budget:
            raise InfeasibleBudgetError(
                f"cycle {c.vertices} has length {c.length} > budget {budget}")
    return tuple(cycles)


def orienteering(inst: Instance, candidates: Iterable[int], x: int, y: int,
                 budget: Fraction, weights: Mapping[int, Fraction],
                 exact_limit: int = 16) -> Path:
    """Max-prize path from x to y of length at most ``budget`` over
    ``candidates``.

    Vertices whose detour dist(x,z)+dist(z,y) exceeds the budget are dropped
    up front. With at most ``exact_limit`` surviving intermediate vertices
    the search is an exact depth-first branch-and-bound; beyond that, a
    cheapest-insertion heuristic. x and y are always included.
    """
    budget = Fraction(budget)
    direct = inst.dist[x][y]
    if budget < direct:
        raise BudgetTooSmallError(f"budget {budget} < dist({x},{y}) = {direct}")

    cand = sorted(set(candidates) | {x, y})
    middle = [z for z in cand
              if z not in (x, y) and inst.dist[x][z] + inst.dist[z][y] <= budget]

    def prize_of(order: Sequence[int]) -> Fraction:
        return sum((Fraction(weights.get(v, 0)) for v in order), Fraction(0))

    if not middle:
        base = (x, y) if x != y else (x,)
        return Path(base, direct if x != y else Fraction(0), prize_of(set(base)))

    if len(middle) <= exact_limit:
        order = _orienteering_exact(inst, middle, x, y, budget, weights)
    else:
        order = _orienteering_insertion(inst, middle, x, y, budget, weights)
    return Path(tuple(order), _path_length(order, inst), prize_of(set(order)))


def _orienteering_exact(inst, middle, x, y, budget, weights):
    """Branch-and-bound over visiting orders of the surviving candidates."""
    w = {z: Fraction(weights.get(z, 0)) for z in middle}
    base_prize = Fraction(weights.get(x, 0))
    if y != x:
        base_prize += Fraction(weights.get(y, 0))

    best_order = [x, y] if y != x else [x]
    best_prize = [base_prize]

    def rest_sum(mask_remaining):
        return sum((w[z] for z in mask_remaining), Fraction(0))

    def dfs(cur, used_len, order, remaining, prize):
        if prize > best_prize[0]:
            best_prize[0] = prize
            best_order[:] = order + [y]
        if prize + rest_sum(remaining) <= best_prize[0]:
            return
        for idx, z in enumerate(remaining):
            new_len = used_len + inst.dist[cur][z]
            if new_len + inst.dist[z][y] > budget:
                continue
            dfs(z, new_len, order + [z],
                remaining[:idx] + remaining[idx + 1:], prize + w[z])

    dfs(x, Fraction(0), [x], tuple(middle), base_prize)
    return best_order


def _orienteering_insertion(inst, middle, x, y, budget, weights):
    """Cheapest feasible insertion; ties prefer heavier prize, then lower
    vertex index."""
    order = [x, y]
    length = inst.dist[x][y]
    remaining = set(middle)
    while remaining:
        best = None
        for z in sorted(remaining):
            for pos in range(1, len(order)):
                a, b = order[pos - 1], order[pos]
                delta = inst.dist[a][z] + inst.dist[z][b] - inst.dist[a][b]
                if length + delta > budget:
                    continue
                key = (delta, -Fraction(weights.get(z, 0)), z, pos)
                if best is None or key < best[0]:
                    best = (key, z, pos, delta)
        if best is None:
            break
        _, z, pos, delta = best
        order.insert(pos, z)
        length += delta
        remaining.remove(z)
    return order


def equally_place(cycle: Cycle, k: int) -> tuple[TimedWalk, ...]:
    """k robots on one cycle at offsets j*length/k: every covered vertex's
    latency becomes exactly length/k (a cycle visits each vertex once, so
    staggered copies divide every gap evenly)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    steps = tuple((v, Fraction(0)) for v in cycle.vertices)
    return tuple(
        TimedWalk(steps=steps, offset=cycle.length * j / k)
        for j in range(k)
    )
