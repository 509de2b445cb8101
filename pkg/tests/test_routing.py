import random
from fractions import Fraction
from itertools import permutations

import pytest

from patrolwalks.model import Instance, Solution, evaluate_latencies
from patrolwalks.routing import (
    BudgetTooSmallError,
    Cycle,
    equally_place,
    mccp,
    orienteering,
    tsp_tour,
)

from conftest import random_int_instance, random_int_metric


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------

def brute_tsp_length(inst, verts):
    """Shortest cycle length by fixing the first vertex and trying every
    order of the rest."""
    verts = sorted(verts)
    if len(verts) == 1:
        return Fraction(0)
    first, rest = verts[0], verts[1:]
    best = None
    for perm in permutations(rest):
        order = (first,) + perm
        length = sum(
            (inst.dist[order[i]][order[(i + 1) % len(order)]]
             for i in range(len(order))), Fraction(0))
        if best is None or length < best:
            best = length
    return best


def brute_min_cycle_cover(inst, verts, budget):
    """Fewest cycles covering verts with every cycle's optimal cyclic length
    within budget, by exhausting set partitions."""
    verts = sorted(verts)

    def partitions(items):
        if not items:
            yield []
            return
        head, rest = items[0], items[1:]
        for sub in partitions(rest):
            for i in range(len(sub)):
                yield sub[:i] + [[head] + sub[i]] + sub[i + 1:]
            yield [[head]] + sub

    best = None
    for part in partitions(verts):
        if best is not None and len(part) >= best:
            continue
        if all(len(b) == 1 or brute_tsp_length(inst, b) <= budget for b in part):
            best = len(part)
    return best


def brute_orienteering(inst, candidates, x, y, budget, weights):
    """Max prize over every subset and order of intermediate vertices."""
    middle = sorted(set(candidates) - {x, y})
    best = Fraction(weights.get(x, 0)) + (Fraction(weights.get(y, 0)) if y != x else 0)

    def rec(cur, used, remaining, prize):
        nonlocal best
        best = max(best, prize)
        for i, z in enumerate(remaining):
            length = used + inst.dist[cur][z]
            if length + inst.dist[z][y] > budget:
                continue
            rec(z, length, remaining[:i] + remaining[i + 1:],
                prize + Fraction(weights.get(z, 0)))

    rec(x, Fraction(0), middle, best)
    return best


# ---------------------------------------------------------------------------
# tsp_tour
# ---------------------------------------------------------------------------

def test_tsp_singleton_and_triangle():
    inst = Instance.build("tri", [[0, 1, 1], [1, 0, 1], [1, 1, 0]], [1, 1, 1])
    single = tsp_tour(inst, [2])
    assert single == Cycle((2,), Fraction(0))
    tri = tsp_tour(inst, [0, 1, 2])
    assert tri.length == 3
    assert sorted(tri.vertices) == [0, 1, 2]


def test_tsp_visits_each_once_and_is_two_opt_optimal():
    rng = random.Random(21)
    for _ in range(25):
        inst = random_int_instance(rng, rng.randint(2, 9), max_d=9)
        tour = tsp_tour(inst, range(inst.n))
        assert sorted(tour.vertices) == list(range(inst.n))
        order = list(tour.vertices)
        n = len(order)
        for i in range(n - 1):
            for j in range(i + 1, n):
                if i == 0 and j == n - 1:
                    continue
                cand = order[:i] + order[i:j + 1][::-1] + order[j + 1:]
                cand_len = sum(
                    (inst.dist[cand[t]][cand[(t + 1) % n]] for t in range(n)),
                    Fraction(0))
                assert cand_len >= tour.length


def test_tsp_against_exact_on_eight_vertices():
    rng = random.Random(42)
    hits = 0
    for _ in range(50):
        inst = random_int_instance(rng, 8, max_d=20)
        tour = tsp_tour(inst, range(8))
        opt = brute_tsp_length(inst, range(8))
        assert tour.length <= Fraction(3, 2) * opt
        if tour.length == opt:
            hits += 1
    assert hits >= 35  # 70% of 50 seeds


def test_tsp_deterministic():
    rng = random.Random(3)
    inst = random_int_instance(rng, 7)
    assert tsp_tour(inst, range(7)) == tsp_tour(inst, range(7))


# ---------------------------------------------------------------------------
# mccp
# ---------------------------------------------------------------------------

def test_mccp_whole_tour_when_budget_allows():
    rng = random.Random(31)
    inst = random_int_instance(rng, 6)
    tour = tsp_tour(inst, range(6))
    cycles = mccp(inst, range(6), tour.length)
    assert len(cycles) == 1


def test_mccp_two_far_pairs():
    d = [[0, 1, 10, 10],
         [1, 0, 10, 10],
         [10, 10, 0, 1],
         [10, 10, 1, 0]]
    inst = Instance.build("pairs", d, [1, 1, 1, 1])
    cycles = mccp(inst, range(4), 2)
    assert len(cycles) == 2
    groups = {frozenset(c.vertices) for c in cycles}
    assert groups == {frozenset({0, 1}), frozenset({2, 3})}


def test_mccp_invariants_and_far_singletons():
    rng = random.Random(33)
    for _ in range(30):
        inst = random_int_instance(rng, rng.randint(2, 7), max_d=9)
        budget = Fraction(rng.randint(2, 12))
        cycles = mccp(inst, range(inst.n), budget)
        seen = []
        for c in cycles:
            assert c.length <= budget
            seen.extend(c.vertices)
        assert sorted(seen) == list(range(inst.n))


def test_mccp_against_exhaustive_cover():
    rng = random.Random(35)
    for _ in range(12):
        inst = random_int_instance(rng, 7, max_d=9)
        two_cycle_bound = max(
            min(2 * inst.dist[u][v] for v in range(7) if v != u)
            for u in range(7))
        budget = Fraction(6, 5) * two_cycle_bound
        ours = len(mccp(inst, range(7), budget))
        exact = brute_min_cycle_cover(inst, range(7), budget)
        assert ours <= 5 * exact


# ---------------------------------------------------------------------------
# orienteering
# ---------------------------------------------------------------------------

def test_orienteering_no_slack():
    inst = Instance.build("tri", [[0, 2, 2], [2, 0, 2], [2, 2, 0]], [1, 1, 1])
    w = {0: Fraction(1), 1: Fraction(2), 2: Fraction(4)}
    path = orienteering(inst, [0, 1, 2], 0, 1, 2, w)
    assert path.vertices == (0, 1)
    assert path.prize == 3
    with pytest.raises(BudgetTooSmallError):
        orienteering(inst, [0, 1, 2], 0, 1, 1, w)


def test_orienteering_free_detours_take_everything():
    # all vertices on a line metric between the endpoints
    d = [[0, 1, 2, 3],
         [1, 0, 1, 2],
         [2, 1, 0, 1],
         [3, 2, 1, 0]]
    inst = Instance.build("line", d, [1] * 4)
    w = {v: Fraction(1) for v in range(4)}
    path = orienteering(inst, range(4), 0, 3, 3, w)
    assert sorted(path.vertices) == [0, 1, 2, 3]
    assert path.prize == 4


def test_orienteering_exact_matches_brute_force():
    rng = random.Random(55)
    for _ in range(50):
        inst = random_int_instance(rng, 9, max_d=9)
        x, y = rng.sample(range(9), 2)
        budget = inst.dist[x][y] + rng.randint(0, 14)
        weights = {v: Fraction(rng.randint(1, 9), rng.randint(1, 4))
                   for v in range(9)}
        path = orienteering(inst, range(9), x, y, budget, weights)
        assert path.length <= budget
        assert path.vertices[0] == x and path.vertices[-1] == y
        assert path.prize == brute_orienteering(inst, range(9), x, y,
                                                budget, weights)


def test_orienteering_heuristic_mode_respects_budget():
    rng = random.Random(56)
    inst = random_int_instance(rng, 24, max_d=9)
    weights = {v: Fraction(1, rng.randint(1, 5)) for v in range(24)}
    path = orienteering(inst, range(24), 0, 1,
                        inst.dist[0][1] + 30, weights, exact_limit=4)
    assert path.length <= inst.dist[0][1] + 30
    assert path.vertices[0] == 0 and path.vertices[-1] == 1
    assert len(set(path.vertices)) == len(path.vertices)


# ---------------------------------------------------------------------------
# equally_place
# ---------------------------------------------------------------------------

def test_equally_place_basics(fig1):
    tour = tsp_tour(fig1, range(3))
    walks = equally_place(tour, 1)
    report = evaluate_latencies(Solution(walks), fig1)
    assert set(report.latencies) == {tour.length}

    tri = Instance.build("tri", [[0, 1, 1], [1, 0, 1], [1, 1, 0]], [1, 1, 1])
    walks = equally_place(tsp_tour(tri, range(3)), 3)
    report = evaluate_latencies(Solution(walks), tri)
    assert report.latencies == (1, 1, 1)


def test_equally_place_fuzzed_exact_division():
    rng = random.Random(77)
    for _ in range(100):
        inst = random_int_instance(rng, rng.randint(1, 6), max_d=7)
        subset = sorted(rng.sample(range(inst.n), rng.randint(1, inst.n)))
        cycle = tsp_tour(inst, subset)
        k = rng.randint(1, 5)
        report = evaluate_latencies(Solution(equally_place(cycle, k)), inst)
        expected = cycle.length / k
        for v in subset:
            assert report.latencies[v] == expected
