"""Core data model: metric instances, periodic timed walks, and exact
latency evaluation.

All times are exact rationals (`fractions.Fraction`); nothing in this module
touches floating point. A timed walk repeats forever with a fixed period and
an optional phase offset, and the evaluator measures, for every vertex, the
largest steady-state gap between a departure and the next arrival over one
hyper-period. Feasibility means every vertex is visited and its largest gap
stays within its revisit deadline r(v).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import kernels

Time = Fraction

UNVISITED = None  # latency value for vertices no walk ever reaches


class EmptySolutionError(ValueError):
    """A solution with no walks cannot be evaluated."""


class WalkError(ValueError):
    """A walk references vertices outside the instance or has a bad offset."""


class ScheduleBlowupError(RuntimeError):
    """Materializing a visit schedule would need too many interval copies."""


def as_time(value) -> Fraction:
    """Coerce ints, Fractions, and strings such as ``"3/2"`` or ``"0.25"``
    to an exact nonnegative time.

    Floats are read through their shortest decimal repr, so ``0.1`` becomes
    exactly 1/10 rather than the binary float value.
    """
    if isinstance(value, float):
        t = Fraction(str(value))
    else:
        t = Fraction(value)
    if t < 0:
        raise ValueError(f"times must be nonnegative, got {value!r}")
    return t


def time_lcm(a: Fraction, b: Fraction) -> Fraction:
    """Least common multiple of two positive rationals (exact)."""
    return Fraction(math.lcm(a.numerator, b.numerator),
                    math.gcd(a.denominator, b.denominator))


def time_gcd(a: Fraction, b: Fraction) -> Fraction:
    """Greatest common divisor of two rationals (exact; gcd(x, 0) == x)."""
    return Fraction(math.gcd(a.numerator, b.numerator),
                    math.lcm(a.denominator, b.denominator))


def _is_power_of_two(x: Fraction) -> bool:
    return x.denominator == 1 and x.numerator > 0 and x.numerator & (x.numerator - 1) == 0


def ceil_log2(x: Fraction) -> int:
    """Smallest integer L with 2**L >= x, for x > 0. Exact."""
    if x <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    lo = x.numerator.bit_length() - x.denominator.bit_length() - 1
    while Fraction(2) ** lo < x:
        lo += 1
    return lo


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    """A complete metric graph with per-vertex revisit deadlines.

    Attributes:
        name: instance label (used in benchmark tables and files).
        dist: n x n symmetric matrix of exact travel times.
        r: per-vertex revisit deadlines r(v) > 0 (max allowed gap between
            consecutive visits).
        names: per-vertex labels; defaults to v0..v{n-1}.
    """

    name: str
    dist: tuple[tuple[Fraction, ...], ...]
    r: tuple[Fraction, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.r)
        if len(self.dist) != n or any(len(row) != n for row in self.dist):
            raise ValueError("dist must be an n x n matrix matching len(r)")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"v{i}" for i in range(n)))
        elif len(self.names) != n:
            raise ValueError("names length must match vertex count")

    @classmethod
    def build(cls, name: str, dist: Sequence[Sequence], r: Sequence,
              names: Sequence[str] = ()) -> "Instance":
        """Construct an instance, coercing entries with :func:`as_time`."""
        return cls(
            name=name,
            dist=tuple(tuple(as_time(x) for x in row) for row in dist),
            r=tuple(as_time(x) for x in r),
            names=tuple(names),
        )

    @property
    def n(self) -> int:
        return len(self.r)

    @cached_property
    def r_min(self) -> Fraction:
        return min(self.r)

    @cached_property
    def r_max(self) -> Fraction:
        return max(self.r)

    @cached_property
    def rho(self) -> Fraction:
        """Deadline spread r_max/r_min, bumped by one when the raw ratio is
        an exact power of two (keeps the top deadline strictly inside the
        last doubling class)."""
        ratio = self.r_max / self.r_min
        if _is_power_of_two(ratio):
            ratio = ratio + 1
        return ratio

    @cached_property
    def time_grid(self) -> Fraction:
        """gcd of all instance times (off-diagonal distances and deadlines).

        Every quantity the solvers manipulate is an integer multiple of this
        step, which makes discrete searches over time exact.
        """
        g = Fraction(0)
        for i in range(self.n):
            g = time_gcd(g, self.r[i])
            for j in range(self.n):
                if i != j:
                    g = time_gcd(g, self.dist[i][j])
        return g if g > 0 else Fraction(1)

    @cached_property
    def int_form(self):
        """Integer rescaling ``(denom, dist_int, r_int, max_value)`` shared by
        the fast kernels: every time multiplied by ``denom`` is an int."""
        denom = 1
        for row in self.dist:
            for x in row:
                denom = math.lcm(denom, x.denominator)
        for x in self.r:
            denom = math.lcm(denom, x.denominator)
        dist_int = tuple(tuple(int(x * denom) for x in row) for row in self.dist)
        r_int = tuple(int(x * denom) for x in self.r)
        max_value = max(max(max(row) for row in dist_int), max(r_int))
        return denom, dist_int, r_int, max_value

    @cached_property
    def np_form(self):
        """int64 numpy views of :attr:`int_form` for the compiled kernels."""
        import numpy as np

        _, dist_int, r_int, _ = self.int_form
        return (np.array(dist_int, dtype=np.int64),
                np.array(r_int, dtype=np.int64))

    def scaled(self, c: Fraction) -> "Instance":
        """All distances and deadlines multiplied by c > 0."""
        c = Fraction(c)
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return Instance(
            name=self.name,
            dist=tuple(tuple(x * c for x in row) for row in self.dist),
            r=tuple(x * c for x in self.r),
            names=self.names,
        )


@dataclass(frozen=True)
class Violation:
    """One metric-model violation found by :func:`validate_instance`."""
    kind: str
    vertices: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_instance(inst: Instance) -> ValidationResult:
    """Check the metric model: symmetry, zero diagonal, positive off-diagonal
    distances, triangle inequality, and positive deadlines.

    Violations are returned as data (with witness vertices), never raised.
    """
    out: list[Violation] = []
    n = inst.n
    d = inst.dist
    for i in range(n):
        if d[i][i] != 0:
            out.append(Violation("diagonal", (i,), f"dist[{i}][{i}] != 0"))
        if inst.r[i] <= 0:
            out.append(Violation("nonpositive-deadline", (i,),
                                 f"r[{i}] = {inst.r[i]} must be positive"))
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                out.append(Violation("asymmetry", (i, j),
                                     f"dist[{i}][{j}] != dist[{j}][{i}]"))
            if d[i][j] <= 0:
                out.append(Violation("nonpositive-distance", (i, j),
                                     f"dist[{i}][{j}] must be positive"))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for k in range(n):
                if k == i or k == j:
                    continue
                if d[i][j] > d[i][k] + d[k][j]:
                    out.append(Violation(
                        "triangle", (i, k, j),
                        f"dist[{i}][{j}] > dist[{i}][{k}] + dist[{k}][{j}]"))
    return ValidationResult(tuple(out))


# ---------------------------------------------------------------------------
# Walks and solutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimedWalk:
    """A periodic walk: ordered ``(vertex, hold)`` steps plus a phase offset.

    The walk wraps from its last step back to its first; its period is the
    sum of all travel legs (including the wrap leg) and all holds. A
    single-step walk with zero hold is a parked robot (period 0). The offset
    shifts the whole schedule in time so several robots can share one cycle
    at staggered positions: the robot's position at time t is its position at
    phase (t + offset) of the unshifted walk.
    """

    steps: tuple[tuple[int, Fraction], ...]
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if not self.steps:
            raise WalkError("a walk needs at least one step")
        if any(h < 0 for _, h in self.steps):
            raise WalkError("holds must be nonnegative")
        if self.offset < 0:
            raise WalkError("offset must be nonnegative")

    @classmethod
    def simple(cls, vertices: Iterable[int], offset=0) -> "TimedWalk":
        """Walk visiting ``vertices`` in order with zero holds."""
        return cls(steps=tuple((v, Fraction(0)) for v in vertices),
                   offset=Fraction(offset))

    def vertices(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.steps)

    def period(self, inst: Instance) -> Fraction:
        total = Fraction(0)
        k = len(self.steps)
        for i, (v, hold) in enumerate(self.steps):
            total += hold
            total += inst.dist[v][self.steps[(i + 1) % k][0]]
        return total

    def is_parked(self, inst: Instance) -> bool:
        return self.period(inst) == 0

    def scaled(self, c: Fraction) -> "TimedWalk":
        c = Fraction(c)
        return TimedWalk(steps=tuple((v, h * c) for v, h in self.steps),
                         offset=self.offset * c)


@dataclass(frozen=True)
class Solution:
    """A set of timed walks sharing one time origin."""

    walks: tuple[TimedWalk, ...]

    @property
    def robots(self) -> int:
        return len(self.walks)

    @cached_property
    def partitioned(self) -> bool:
        """True iff no vertex appears in two walks."""
        seen: set[int] = set()
        for w in self.walks:
            vs = w.vertices()
            if vs & seen:
                return False
            seen |= vs
        return True

    def covered(self) -> frozenset[int]:
        out: set[int] = set()
        for w in self.walks:
            out |= w.vertices()
        return frozenset(out)

    def total_length(self, inst: Instance) -> Fraction:
        return sum((w.period(inst) for w in self.walks), Fraction(0))

    def scaled(self, c: Fraction) -> "Solution":
        return Solution(tuple(w.scaled(c) for w in self.walks))


@dataclass(frozen=True)
class ExpiryState:
    """Snapshot of the time-to-expiry vector while traversing a walk.

    ``slack[v]`` is how long vertex v can still wait before its deadline is
    missed; it resets to r(v) whenever the robot is at v and otherwise drops
    with elapsed time.
    """

    slack: tuple[Fraction, ...]
    position: int
    elapsed: Fraction


@dataclass(frozen=True)
class LatencyReport:
    """Per-vertex steady-state latencies against their deadlines."""

    latencies: tuple[Fraction | None, ...]
    deadlines: tuple[Fraction, ...]

    @cached_property
    def vertex_feasible(self) -> tuple[bool, ...]:
        return tuple(lat is not UNVISITED and lat <= dl
                     for lat, dl in zip(self.latencies, self.deadlines))

    @property
    def feasible(self) -> bool:
        return all(self.vertex_feasible)

    def margin(self, v: int) -> Fraction | None:
        """Slack r(v) - L(v), or None when v is unvisited."""
        lat = self.latencies[v]
        return None if lat is UNVISITED else self.deadlines[v] - lat

    def summary(self, inst: Instance) -> str:
        lines = []
        for v in range(len(self.latencies)):
            lat = self.latencies[v]
            shown = "UNVISITED" if lat is UNVISITED else str(lat)
            mark = "ok" if self.vertex_feasible[v] else "VIOLATED"
            lines.append(f"  {inst.names[v]:>8}  latency={shown:>10}  "
                         f"deadline={self.deadlines[v]!s:>10}  {mark}")
        verdict = "FEASIBLE" if self.feasible else "INFEASIBLE"
        lines.append(f"  => {verdict}")
        return "\n".join(lines)


@dataclass(frozen=True)
class VisitSchedule:
    """Merged per-vertex visit intervals over one global hyper-period.

    ``hyper_period`` is the lcm of all positive walk periods; parked walks
    contribute a single interval covering all of it. Intervals are sorted,
    non-overlapping ``(arrival, departure)`` pairs.
    """

    hyper_period: Fraction
    intervals: tuple[tuple[tuple[Fraction, Fraction], ...], ...]


# ---------------------------------------------------------------------------
# Exact evaluation
# ---------------------------------------------------------------------------

def _walk_visit_phases(walk: TimedWalk, inst: Instance):
    """Per-step ``(vertex, arrival_phase, departure_phase)`` within one
    period of the unshifted walk, plus the period itself."""
    t = Fraction(0)
    phases = []
    k = len(walk.steps)
    for i, (v, hold) in enumerate(walk.steps):
        if v < 0 or v >= inst.n:
            raise WalkError(f"vertex {v} out of range for {inst.n}-vertex instance")
        phases.append((v, t, t + hold))
        t += hold
        t += inst.dist[v][walk.steps[(i + 1) % k][0]]
    return phases, t


def _merge_circular(intervals: list[tuple[Fraction, Fraction]], circle: Fraction):
    """Merge possibly wrapping intervals on a circle of circumference
    ``circle``; returns sorted disjoint intervals or None when they cover
    the whole circle."""
    flat: list[tuple[Fraction, Fraction]] = []
    for s, e in intervals:
        if e - s >= circle:
            return None
        s %= circle
        e2 = s + (e - s)
        if e2 > circle:
            flat.append((s, circle))
            flat.append((Fraction(0), e2 - circle))
        else:
            flat.append((s, e2))
    flat.sort()
    merged = [list(flat[0])]
    for s, e in flat[1:]:
        if s <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    # join across the wrap point
    if len(merged) > 1 and merged[0][0] == 0 and merged[-1][1] == circle:
        merged[0][0] = merged[-1][0] - circle
        merged.pop()
    if len(merged) == 1 and merged[0][1] - merged[0][0] >= circle:
        return None
    return [(s, e) for s, e in merged]


def _max_circular_gap(merged, circle: Fraction) -> Fraction:
    gap = Fraction(0)
    for i, (s, e) in enumerate(merged):
        nxt = merged[(i + 1) % len(merged)][0]
        if i + 1 == len(merged):
            nxt += circle
        gap = max(gap, nxt - e)
    return gap


def _check_walks(sol: Solution, inst: Instance):
    if not sol.walks:
        raise EmptySolutionError("solution has no walks")
    out = []
    for w in sol.walks:
        phases, period = _walk_visit_phases(w, inst)
        if period == 0:
            if w.offset != 0:
                raise WalkError("parked walk must have offset 0")
        elif not 0 <= w.offset < period:
            raise WalkError(f"offset {w.offset} outside [0, {period})")
        out.append((w, phases, period))
    return out


def evaluate_latencies(sol: Solution, inst: Instance) -> LatencyReport:
    """Exact steady-state latency of every vertex under ``sol``.

    For each vertex the visit intervals of all walks that reach it are laid
    onto a circle whose circumference is the lcm of those walks' periods;
    the latency is the largest gap between a departure and the next arrival
    around that circle. Unvisited vertices get :data:`UNVISITED`.
    """
    walks = _check_walks(sol, inst)

    by_vertex: dict[int, list[tuple[int, Fraction]]] = {}
    parked_at: set[int] = set()
    for idx, (w, phases, period) in enumerate(walks):
        if period == 0:
            parked_at.add(w.steps[0][0])
            continue
        for v, _, _ in phases:
            by_vertex.setdefault(v, []).append((idx, period))

    latencies: list[Fraction | None] = [UNVISITED] * inst.n
    for v in parked_at:
        latencies[v] = Fraction(0)

    for v, visitors in by_vertex.items():
        if latencies[v] == 0:
            continue
        walk_ids = sorted({idx for idx, _ in visitors})
        circle = walks[walk_ids[0]][2]
        for idx in walk_ids[1:]:
            circle = time_lcm(circle, walks[idx][2])
        intervals: list[tuple[Fraction, Fraction]] = []
        for idx in walk_ids:
            w, phases, period = walks[idx]
            copies = int(circle / period)
            for u, arr, dep in phases:
                if u != v:
                    continue
                base = (arr - w.offset) % period
                hold = dep - arr
                for m in range(copies):
                    s = base + m * period
                    intervals.append((s, s + hold))
        merged = _merge_circular(intervals, circle)
        latencies[v] = Fraction(0) if merged is None else _max_circular_gap(merged, circle)

    return LatencyReport(latencies=tuple(latencies), deadlines=inst.r)


def verify(sol: Solution, inst: Instance) -> LatencyReport:
    """Evaluate ``sol`` and report feasibility against every deadline.

    This is the ground-truth check every solver's output is held to: a
    report is feasible iff every vertex is visited and its steady-state
    latency is within r(v).
    """
    return evaluate_latencies(sol, inst)


def build_visit_schedule(sol: Solution, inst: Instance,
                         max_intervals: int = 200_000) -> VisitSchedule:
    """Materialize merged visit intervals for every vertex over the global
    hyper-period (lcm of all positive walk periods).

    Raises :class:`ScheduleBlowupError` when the lcm forces more than
    ``max_intervals`` interval copies; :func:`evaluate_latencies` avoids this
    by working per vertex and should be preferred for feasibility questions.
    """
    walks = _check_walks(sol, inst)
    hyper = Fraction(1)
    positive = [period for _, _, period in walks if period > 0]
    if positive:
        hyper = positive[0]
        for p in positive[1:]:
            hyper = time_lcm(hyper, p)

    total_copies = 0
    for w, phases, period in walks:
        if period > 0:
            total_copies += len(phases) * int(hyper / period)
    if total_copies > max_intervals:
        raise ScheduleBlowupError(
            f"hyper-period {hyper} needs {total_copies} interval copies")

    per_vertex: list[list[tuple[Fraction, Fraction]]] = [[] for _ in range(inst.n)]
    full = [False] * inst.n
    for w, phases, period in walks:
        if period == 0:
            full[w.steps[0][0]] = True
            continue
        copies = int(hyper / period)
        for v, arr, dep in phases:
            base = (arr - w.offset) % period
            hold = dep - arr
            for m in range(copies):
                s = base + m * period
                per_vertex[v].append((s, s + hold))

    out = []
    for v in range(inst.n):
        if full[v]:
            out.append(((Fraction(0), hyper),))
            continue
        if not per_vertex[v]:
            out.append(())
            continue
        merged = _merge_circular(per_vertex[v], hyper)
        if merged is None:
            out.append(((Fraction(0), hyper),))
            continue
        pieces: list[tuple[Fraction, Fraction]] = []
        for s, e in merged:
            if s < 0:  # interval joined across the wrap point
                pieces.append((s + hyper, hyper))
                pieces.append((Fraction(0), e))
            else:
                pieces.append((s, e))
        out.append(tuple(sorted(pieces)))
    return VisitSchedule(hyper_period=hyper, intervals=tuple(out))


# ---------------------------------------------------------------------------
# Periodic feasibility (the greedy solvers' inner check)
# ---------------------------------------------------------------------------

def periodic_feasibility(walk: TimedWalk, inst: Instance) -> bool:
    """True iff repeating ``walk`` forever satisfies r(v) for every vertex
    the walk visits.

    Simulates two concatenated copies of the walk, resetting each vertex's
    expiry clock on arrival; the first copy settles into the steady state
    and the second certifies it. Runs through the compiled kernel when the
    walk's times lie on the instance grid, otherwise through the exact
    pure-Python path.
    """
    verts = [v for v, _ in walk.steps]
    holds = [h for _, h in walk.steps]
    for v in verts:
        if v < 0 or v >= inst.n:
            raise WalkError(f"vertex {v} out of range")
    return kernels.walk_feasible(verts, holds, inst, override_last_leg=None)


def expiry_trace(walk: TimedWalk, inst: Instance) -> list[ExpiryState]:
    """Slack vector after each step of one pass over ``walk`` (visited
    vertices only carry meaning; others stay at their initial deadline)."""
    slack = list(inst.r)
    out = []
    elapsed = Fraction(0)
    k = len(walk.steps)
    prev = None
    for i, (v, hold) in enumerate(walk.steps):
        if prev is not None:
            leg = inst.dist[prev][v]
            elapsed += leg
            for u in range(inst.n):
                slack[u] -= leg
        slack[v] = inst.r[v]
        if hold:
            elapsed += hold
            for u in range(inst.n):
                if u != v:
                    slack[u] -= hold
        out.append(ExpiryState(slack=tuple(slack), position=v, elapsed=elapsed))
        prev = v
    return out
