"""Exact decision solver for tiny instances via bounded state-space search.

The joint state tracks every robot's position (or in-flight target and
residual travel) plus each vertex's clamped time-to-expiry, all on the
instance's integer time grid. Any state revisited along a search path closes
a lasso whose cycle is, by itself, a feasible periodic schedule; exhaustion
within the step budget means "no schedule whose transient plus one full
period fits in `horizon` grid steps" and nothing stronger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from . import kernels
from .model import Instance, Solution, TimedWalk

MAX_VERTICES = 6
MAX_ROBOTS = 3
MAX_HORIZON = 64
MAX_GRID_DEADLINE = 4096  # scaled deadlines above this blow up the state space


class InstanceTooLargeError(ValueError):
    """The instance exceeds what the exhaustive search is allowed to try."""


@dataclass(frozen=True)
class JointState:
    """One snapshot of the search: per-robot (target, residual) pairs
    (residual 0 = at the vertex) and the clamped expiry vector."""

    robots: tuple[tuple[int, int], ...]
    expiry: tuple[int, ...]


def _grid_ints(inst: Instance):
    grid = inst.time_grid
    dist = [[int(inst.dist[i][j] / grid) for j in range(inst.n)]
            for i in range(inst.n)]
    r = [int(rv / grid) for rv in inst.r]
    return grid, dist, r


def _check_limits(inst: Instance, robots: int, horizon: int):
    if inst.n > MAX_VERTICES:
        raise InstanceTooLargeError(
            f"{inst.n} vertices exceeds the cap of {MAX_VERTICES}")
    if robots > MAX_ROBOTS:
        raise InstanceTooLargeError(
            f"{robots} robots exceeds the cap of {MAX_ROBOTS}")
    if horizon > MAX_HORIZON:
        raise InstanceTooLargeError(
            f"horizon {horizon} exceeds the cap of {MAX_HORIZON}")
    if horizon < 1 or robots < 1:
        raise ValueError("robots and horizon must be positive")
    _, _, r = _grid_ints(inst)
    if max(r) > MAX_GRID_DEADLINE:
        raise InstanceTooLargeError(
            f"deadlines span {max(r)} grid steps (cap {MAX_GRID_DEADLINE})")


def _walks_from_cycle(frames, closing, grid: Fraction, robots: int) -> Solution:
    """Turn a state-space cycle into timed walks.

    ``frames`` are the raw per-slot robot states along the cycle and
    ``closing`` equals the first frame up to a permutation of interchangeable
    robots; following that permutation for its order unrolls an exact
    period for every physical robot.
    """
    base = len(frames)

    # match closing slots onto first-frame slots (identical substates are
    # interchangeable; take the first unused match)
    first = frames[0]
    unused = list(range(robots))
    perm = [0] * robots
    for slot in range(robots):
        for pos, cand in enumerate(unused):
            if first[cand] == closing[slot]:
                perm[slot] = cand
                unused.pop(pos)
                break
        else:  # pragma: no cover - closing is a permutation by construction
            raise AssertionError("closing frame does not match cycle start")

    order = 1
    current = list(range(robots))
    while True:
        current = [perm[i] for i in current]
        if current == list(range(robots)):
            break
        order += 1

    period_steps = base * order
    walks = []
    for slot0 in range(robots):
        positions = []
        slot = slot0
        for _ in range(order):
            positions.extend(frames[t][slot] for t in range(base))
            slot = perm[slot]

        if all(p == positions[0] and p[1] == 0 for p in positions):
            walks.append(TimedWalk.simple([positions[0][0]]))
            continue

        arrivals = []
        for t in range(period_steps):
            v, resid = positions[t]
            if resid != 0:
                continue
            pv, presid = positions[(t - 1) % period_steps]
            if presid != 0 or pv != v:
                arrivals.append((t, v))
        assert arrivals, "a moving robot must arrive somewhere"

        steps = []
        period_time = grid * period_steps
        for idx, (t, v) in enumerate(arrivals):
            stay = 0
            while positions[(t + stay + 1) % period_steps] == (v, 0) \
                    and stay + 1 < period_steps:
                stay += 1
            steps.append((v, grid * stay))
        first_arrival = arrivals[0][0]
        offset = (-grid * first_arrival) % period_time
        walks.append(TimedWalk(steps=tuple(steps), offset=offset))
    return Solution(tuple(walks))


def exact_decision(inst: Instance, robots: int,
                   horizon: int = 32) -> tuple[bool, Solution | None]:
    """Can ``robots`` robots satisfy every deadline with a schedule whose
    transient plus one period fits in ``horizon`` grid steps?

    Feasible verdicts come with a concrete Solution (always verifiable);
    infeasible verdicts are conditional on the horizon.
    """
    _check_limits(inst, robots, horizon)
    grid, dist, r = _grid_ints(inst)
    hit = kernels.oracle_find_cycle(tuple(map(tuple, dist)), tuple(r),
                                    robots, horizon)
    if hit is None:
        return False, None
    frames, closing = hit
    return True, _walks_from_cycle(list(frames), closing, grid, robots)


def exact_min_robots(inst: Instance, horizon: int = 32) -> int:
    """Smallest robot count that exact_decision accepts (horizon-bounded).

    Exact whenever the search cap suffices: for instances with at most
    MAX_ROBOTS + 1 vertices, parking one robot per vertex is always feasible,
    so an exhausted search pins the optimum at |V|.
    """
    for robots in range(1, min(MAX_ROBOTS, inst.n) + 1):
        feasible, _ = exact_decision(inst, robots, horizon)
        if feasible:
            return robots
    if inst.n <= MAX_ROBOTS + 1:
        return inst.n
    raise InstanceTooLargeError(
        f"optimum exceeds {MAX_ROBOTS} robots; cannot certify it for "
        f"{inst.n} vertices")


def parked_solution(inst: Instance) -> Solution:
    """One parked robot per vertex: every latency is zero."""
    return Solution(tuple(TimedWalk.simple([v]) for v in range(inst.n)))
