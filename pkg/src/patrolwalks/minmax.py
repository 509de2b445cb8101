"""Min-max weighted latency with a robot budget, and the reduction that
turns any such solver into a minimum-robot search with uniformly relaxed
deadlines.

Weights are normalized to max 1 and split into doubling classes. With few
robots, contiguous class blocks each get one walk from a pluggable
single-robot subroutine; with enough robots, every class tour gets an equal
share and leftovers go to whichever class currently costs the most. The
default single-robot subroutine is a stand-in (heavier classes woven in with
doubled frequency) and carries no approximation guarantee of its own, which
is why the minimum-robot search reports the relaxation it actually achieved
instead of assuming one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .model import (
    Instance,
    Solution,
    TimedWalk,
    UNVISITED,
    as_time,
    ceil_log2,
    evaluate_latencies,
    verify,
)
from .routing import equally_place, tsp_tour


class UnvisitedVertexError(ValueError):
    """Weighted cost is undefined while some vertex is never visited."""


class NoFeasibleRobotsError(RuntimeError):
    """No robot count up to |V| met the requested relaxation (the
    single-robot stand-in carries no guarantee, so this can happen for
    tight relaxation factors)."""


def _is_power_of_two(x: Fraction) -> bool:
    return x.denominator == 1 and x.numerator > 0 and x.numerator & (x.numerator - 1) == 0


def _floor_log2(x: Fraction) -> int:
    """Largest e with 2**e <= x, for x >= 1."""
    e = max(0, x.numerator.bit_length() - x.denominator.bit_length() - 1)
    while Fraction(2) ** (e + 1) <= x:
        e += 1
    return e


@dataclass(frozen=True)
class WeightedInstance:
    """Metric geometry plus per-vertex positive weights, normalized so the
    heaviest vertex has weight 1. ``phi(v) * latency(v)`` is the cost a
    solution pays at v."""

    name: str
    dist: tuple[tuple[Fraction, ...], ...]
    phi: tuple[Fraction, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if any(w <= 0 for w in self.phi):
            raise ValueError("weights must be positive")
        top = max(self.phi)
        if top != 1:
            object.__setattr__(self, "phi", tuple(w / top for w in self.phi))
        if not self.names:
            object.__setattr__(
                self, "names", tuple(f"v{i}" for i in range(len(self.phi))))

    @classmethod
    def build(cls, name, dist, phi, names=()):
        return cls(
            name=name,
            dist=tuple(tuple(as_time(x) for x in row) for row in dist),
            phi=tuple(Fraction(w) for w in phi),
            names=tuple(names),
        )

    @classmethod
    def from_instance(cls, inst: Instance) -> "WeightedInstance":
        """Deadline-to-weight mapping phi(v) = r_min / r(v): a solution
        meets every deadline exactly when its weighted cost is at most
        r_min."""
        return cls(name=inst.name, dist=inst.dist,
                   phi=tuple(inst.r_min / rv for rv in inst.r),
                   names=inst.names)

    @property
    def n(self) -> int:
        return len(self.phi)

    @property
    def weight_spread(self) -> Fraction:
        """max phi / min phi, bumped by one on exact powers of two."""
        spread = max(self.phi) / min(self.phi)
        if _is_power_of_two(spread):
            spread = spread + 1
        return spread

    def geometry(self) -> Instance:
        """The bare metric as an Instance (unit deadlines; only distances
        matter to the routing primitives and the evaluator)."""
        return Instance(name=self.name, dist=self.dist,
                        r=tuple(Fraction(1) for _ in self.phi),
                        names=self.names)

    def weight_classes(self) -> tuple[frozenset[int], ...]:
        """Doubling weight classes: class i (1-based) holds vertices with
        1/2^i < phi(v) <= 1/2^(i-1)."""
        count = ceil_log2(self.weight_spread)
        classes: list[set[int]] = [set() for _ in range(count)]
        for v, w in enumerate(self.phi):
            idx = _floor_log2(Fraction(1) / w)  # class i-1
            classes[idx].add(v)
        return tuple(frozenset(c) for c in classes)


def weighted_cost(sol: Solution, winst: WeightedInstance) -> Fraction:
    """max over vertices of phi(v) * latency(v); every vertex must be
    visited."""
    report = evaluate_latencies(sol, winst.geometry())
    worst = Fraction(0)
    for v, lat in enumerate(report.latencies):
        if lat is UNVISITED:
            raise UnvisitedVertexError(f"vertex {v} is never visited")
        worst = max(worst, winst.phi[v] * lat)
    return worst


# ---------------------------------------------------------------------------
# Single-robot subroutine (pluggable)
# ---------------------------------------------------------------------------

OneRobotSolver = Callable[["WeightedInstance", frozenset], TimedWalk]


def min_max_one_robot(winst: WeightedInstance, subset: Iterable[int]) -> TimedWalk:
    """Stand-in single-robot walk over ``subset``: per-weight-class TSP
    tours, with class i (heavier = lower i) woven in 2^(i_max - i) times per
    period.

    This is a frequency heuristic, not the approximation subroutine the
    block construction was designed around; swap in a guaranteed solver via
    the ``one_robot`` hook of :func:`latency_walks` to inherit its quality.
    """
    subset = sorted(set(subset))
    if not subset:
        raise ValueError("subset must be nonempty")
    geometry = winst.geometry()
    top = max(winst.phi[v] for v in subset)
    by_class: dict[int, list[int]] = {}
    for v in subset:
        i = _floor_log2(top / winst.phi[v]) + 1  # local class, 1-based
        by_class.setdefault(i, []).append(v)
    i_max = max(by_class)
    tours = {i: tsp_tour(geometry, vs).vertices for i, vs in by_class.items()}

    sequence: list[int] = []
    for slot in range(2 ** (i_max - 1)):
        for i in sorted(by_class):
            if slot % (2 ** (i - 1)) == 0:
                sequence.extend(tours[i])
    deduped = [sequence[0]]
    for v in sequence[1:]:
        if v != deduped[-1]:
            deduped.append(v)
    if len(deduped) > 1 and deduped[-1] == deduped[0]:
        deduped.pop()
    return TimedWalk.simple(deduped)


# ---------------------------------------------------------------------------
# Multi-robot construction
# ---------------------------------------------------------------------------

def _block_upper(j: int, robots: int, spread: Fraction) -> int:
    """ceil(j * log2(spread) / robots), exactly: smallest m with
    2^(m * robots) >= spread^j."""
    m = 0
    target = spread ** j
    while Fraction(2) ** (m * robots) < target:
        m += 1
    return m


def latency_walks(winst: WeightedInstance, robots: int,
                  one_robot: OneRobotSolver = min_max_one_robot) -> Solution:
    """Spread ``robots`` walks over the weight classes.

    With robots < log2(weight spread), classes are grouped into ``robots``
    contiguous blocks and each block gets one walk from ``one_robot`` (empty
    blocks are skipped, so fewer walks may come back). Otherwise every
    nonempty class tour gets floor(robots / #classes) equally spaced robots
    and each leftover robot joins the class with the current worst weighted
    cost, which is then re-spaced.
    """
    if robots < 1:
        raise ValueError("robots must be at least 1")
    classes = winst.weight_classes()
    spread = winst.weight_spread
    count = len(classes)
    geometry = winst.geometry()

    few_robots = Fraction(2) ** robots < spread
    share = robots // count
    if not few_robots and share == 0:  # unreachable for integral robots
        few_robots = True

    if few_robots:
        walks: list[TimedWalk] = []
        lower = 1
        for j in range(1, robots + 1):
            upper = _block_upper(j, robots, spread)
            block = frozenset().union(*classes[lower - 1:upper]) \
                if upper >= lower else frozenset()
            lower = upper + 1
            if block:
                walks.append(one_robot(winst, block))
        return Solution(tuple(walks))

    nonempty = [i for i, cls in enumerate(classes) if cls]
    tours = {i: tsp_tour(geometry, classes[i]) for i in nonempty}
    top_weight = {i: max(winst.phi[v] for v in classes[i]) for i in nonempty}
    counts = {i: share for i in nonempty}
    leftovers = robots - share * len(nonempty)

    def class_cost(i: int) -> Fraction:
        return top_weight[i] * tours[i].length / counts[i]

    for _ in range(leftovers):
        worst = max(nonempty, key=lambda i: (class_cost(i), -i))
        counts[worst] += 1

    walks = []
    for i in nonempty:
        walks.extend(equally_place(tours[i], counts[i]))
    return Solution(tuple(walks))


@dataclass(frozen=True)
class BicriterionResult:
    robots: int
    solution: Solution
    cost: Fraction
    achieved_relaxation: Fraction  # max over v of latency(v) / r(v)


def bicriterion_min_robots(inst: Instance, alpha,
                           one_robot: OneRobotSolver = min_max_one_robot,
                           ) -> BicriterionResult:
    """Minimum robot count whose latency_walks solution keeps every vertex
    within ``alpha`` times its deadline.

    Under phi(v) = r_min/r(v) that is exactly "weighted cost <= alpha *
    r_min". Candidate counts below ceil(log2(weight spread)) are scanned
    linearly (block walks carry no cost monotonicity); from there up, the
    equal-spacing branch only improves with more robots, so binary search
    applies.
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    winst = WeightedInstance.from_instance(inst)
    threshold = alpha * inst.r_min
    n = inst.n

    cache: dict[int, tuple[Solution, Fraction]] = {}

    def attempt(robots: int):
        if robots not in cache:
            sol = latency_walks(winst, robots, one_robot=one_robot)
            try:
                cost = weighted_cost(sol, winst)
            except UnvisitedVertexError:
                cost = None
            cache[robots] = (sol, cost)
        return cache[robots]

    def feasible(robots: int) -> bool:
        _, cost = attempt(robots)
        return cost is not None and cost <= threshold

    pivot = ceil_log2(winst.weight_spread)
    best = None
    for robots in range(1, min(pivot - 1, n) + 1):
        if feasible(robots):
            best = robots
            break
    if best is None and pivot <= n:
        lo, hi = pivot, n
        if feasible(hi):
            while lo < hi:
                mid = (lo + hi) // 2
                if feasible(mid):
                    hi = mid
                else:
                    lo = mid + 1
            best = lo
    if best is None:
        raise NoFeasibleRobotsError(
            f"no robot count up to {n} reaches relaxation {alpha}")

    sol, cost = attempt(best)
    report = verify(sol, inst)
    achieved = max(lat / rv for lat, rv in zip(report.latencies, inst.r))
    return BicriterionResult(robots=best, solution=sol, cost=cost,
                             achieved_relaxation=achieved)
