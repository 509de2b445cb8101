"""Partition heuristics: grow one periodically feasible walk at a time,
deferring vertices the walk can no longer serve to the next robot.

``solve_simple_greedy`` always travels straight to the unexpired vertex with
the least remaining slack. ``solve_orienteering_greedy`` additionally
stretches each hop to the largest feasible duration and fills it with a
max-prize orienteering detour, so one robot picks up cheap extra coverage on
the way. Both keep every intermediate walk periodically feasible, so their
output verifies by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .model import Instance, Solution, TimedWalk
from .routing import orienteering


@dataclass(frozen=True)
class GreedyConfig:
    """Shared knobs for both greedy solvers.

    Attributes:
        m: weight discount for vertices the walk already covers (keeps the
            orienteering detour pointed at new vertices).
        restarts: independent seeded runs; the solution with the fewest
            walks (then the smallest total length) wins.
        rng_seed: base seed; restart k runs on its own stream derived from
            it, so prefixes of the restart sequence are stable.
    """

    m: Fraction = Fraction(1, 10)
    restarts: int = 5
    rng_seed: int = 0

    def __post_init__(self):
        if not 0 < Fraction(self.m) <= 1:
            raise ValueError("discount m must be in (0, 1]")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


class _WalkState:
    """One growing walk plus the expiry bookkeeping of Eq.-style slack
    updates: slack[v] = r(v) - time since v's last departure (or since the
    walk started, for vertices not yet visited)."""

    def __init__(self, inst: Instance, remaining: set[int], start: int):
        self.inst = inst
        self.verts = [start]
        self.holds = [Fraction(0)]
        self.elapsed = Fraction(0)
        self.slack = {v: inst.r[v] for v in remaining}
        # expired: uncovered vertices this walk can no longer serve (next
        # robot's seeds); dead_targets: covered vertices retired as hop
        # targets (still fine as detour intermediates)
        self.expired: set[int] = set()
        self.dead_targets: set[int] = set()

    def covered(self) -> set[int]:
        return set(self.verts)

    def retire_target(self, y: int):
        if y in self.covered():
            self.dead_targets.add(y)
        else:
            self.expired.add(y)

    def feasible_append(self, y: int, leg_override=None) -> bool:
        return kernels.walk_feasible(self.verts + [y], self.holds + [Fraction(0)],
                                     self.inst, override_last_leg=leg_override)

    def advance(self, to: int, duration: Fraction):
        """Move the walk head to ``to``, taking ``duration`` of travel."""
        self.elapsed += duration
        for v in self.slack:
            self.slack[v] -= duration
        self.slack[to] = self.inst.r[to]
        self.verts.append(to)
        self.holds.append(Fraction(0))

    def hold_at_head(self, duration: Fraction):
        if duration == 0:
            return
        head = self.verts[-1]
        self.elapsed += duration
        for v in self.slack:
            if v != head:
                self.slack[v] -= duration
        self.holds[-1] += duration

    def candidates(self):
        """Eligible targets in increasing slack order (ties: lower index),
        excluding the current head and anything retired."""
        head = self.verts[-1]
        return sorted((v for v in self.slack
                       if v not in self.expired
                       and v not in self.dead_targets and v != head),
                      key=lambda v: (self.slack[v], v))

    def walk(self) -> TimedWalk:
        return TimedWalk(steps=tuple(zip(self.verts, map(Fraction, self.holds))))


def _restart_seeds(cfg: GreedyConfig):
    base = random.Random(cfg.rng_seed)
    return [base.randrange(2 ** 62) for _ in range(cfg.restarts)]


def _best_of_restarts(inst: Instance, cfg: GreedyConfig, one_pass) -> Solution:
    best = None
    best_key = None
    for seed in _restart_seeds(cfg):
        sol = one_pass(inst, random.Random(seed))
        key = (sol.robots, sol.total_length(inst))
        if best_key is None or key < best_key:
            best, best_key = sol, key
    return best


# ---------------------------------------------------------------------------
# Simple greedy
# ---------------------------------------------------------------------------

def _simple_pass(inst: Instance, rng: random.Random) -> Solution:
    remaining = set(range(inst.n))
    walks = []
    while remaining:
        start = rng.choice(sorted(remaining))
        state = _WalkState(inst, remaining, start)
        while (remaining - state.covered()) - state.expired:
            appended = False
            for y in state.candidates():
                if state.feasible_append(y):
                    state.advance(y, inst.dist[state.verts[-1]][y])
                    appended = True
                    break
                state.retire_target(y)
            if not appended:
                break
        walk = state.walk()
        assert kernels.walk_feasible(state.verts, state.holds, inst)
        assert not state.expired & state.covered()
        walks.append(walk)
        remaining -= state.covered()
    return Solution(tuple(walks))


def solve_simple_greedy(inst: Instance, cfg: GreedyConfig = GreedyConfig()) -> Solution:
    """Partitioned walks by repeatedly chasing the tightest unexpired
    deadline; vertices that cannot be feasibly appended wait for the next
    robot."""
    return _best_of_restarts(inst, cfg, _simple_pass)


# ---------------------------------------------------------------------------
# Orienteering greedy
# ---------------------------------------------------------------------------

def max_feasible_detour(walk: TimedWalk, y: int, inst: Instance) -> Fraction:
    """Largest duration d for the final leg into ``y`` (on the instance's
    time grid) that keeps the periodic walk feasible.

    The walk must already be feasible with the direct leg. Feasibility is
    monotone in the leg duration, so a binary search over grid multiples in
    [dist(x,y), slack(y)] is exact.
    """
    verts = [v for v, _ in walk.steps]
    holds = [h for _, h in walk.steps]
    if len(verts) < 2:
        raise ValueError("walk must end with a leg into y")
    if verts[-1] != y:
        raise ValueError("walk must already end at y")
    x = verts[-2]
    grid = inst.time_grid
    lo = inst.dist[x][y]

    # slack of y at the moment the leg starts: deadline minus elapsed time
    elapsed = Fraction(0)
    deadline = inst.r[y]
    for i in range(len(verts) - 1):
        elapsed += holds[i]
        if verts[i] == y:
            deadline = elapsed + inst.r[y]
        if i < len(verts) - 2:
            elapsed += inst.dist[verts[i]][verts[i + 1]]
    hi = deadline - elapsed

    lo_k = int(lo / grid)
    hi_k = int(hi / grid) if hi >= lo else lo_k
    if not kernels.walk_feasible(verts, holds, inst, override_last_leg=lo):
        raise ValueError("walk is not feasible even with the direct leg")
    while lo_k < hi_k:
        mid = (lo_k + hi_k + 1) // 2
        if kernels.walk_feasible(verts, holds, inst,
                                 override_last_leg=grid * mid):
            lo_k = mid
        else:
            hi_k = mid - 1
    return grid * lo_k


def _ogreedy_pass(inst: Instance, rng: random.Random, m: Fraction) -> Solution:
    grid = inst.time_grid
    remaining = set(range(inst.n))
    walks = []
    while remaining:
        start = rng.choice(sorted(remaining))
        state = _WalkState(inst, remaining, start)
        anchor = start
        while (remaining - state.covered()) - state.expired:
            progressed = False
            for y in state.candidates():
                if not state.feasible_append(y):
                    state.retire_target(y)
                    continue
                x = state.verts[-1]
                d = max_feasible_detour(
                    TimedWalk(steps=tuple(zip(state.verts + [y],
                                              map(Fraction, state.holds + [Fraction(0)])))),
                    y, inst)
                covered = state.covered()
                for z in sorted(remaining - state.expired - covered - {y}):
                    if state.slack[z] < d + inst.dist[y][anchor]:
                        state.expired.add(z)

                weights = {}
                for v in remaining - state.expired:
                    s = state.slack[v]
                    w = Fraction(2, 1) / grid if s <= 0 else Fraction(1) / s
                    if v in covered:
                        w *= m
                    weights[v] = w
                path = orienteering(inst, (remaining - state.expired) | {x, y},
                                    x, y, d, weights)
                for a, b in zip(path.vertices, path.vertices[1:]):
                    state.advance(b, inst.dist[a][b])
                state.hold_at_head(d - path.length)
                assert kernels.walk_feasible(state.verts, state.holds, inst)
                progressed = True
                break
            if not progressed:
                break
        assert not state.expired & state.covered()
        walks.append(state.walk())
        remaining -= state.covered()
    return Solution(tuple(walks))


def solve_orienteering_greedy(inst: Instance,
                              cfg: GreedyConfig = GreedyConfig()) -> Solution:
    """Partitioned walks that stretch each greedy hop into a max-prize
    detour: the hop to the tightest feasible target gets the largest
    feasible duration, vertices that would expire during it are deferred,
    and an orienteering path (weights 1/slack, covered vertices discounted
    by ``cfg.m``) fills the budget; leftover budget becomes hold time at the
    target."""
    return _best_of_restarts(
        inst, cfg, lambda i, rng: _ogreedy_pass(i, rng, Fraction(cfg.m)))
