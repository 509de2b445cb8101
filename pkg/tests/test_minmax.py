import random
from fractions import Fraction

import pytest

from patrolwalks.minmax import (
    NoFeasibleRobotsError,
    UnvisitedVertexError,
    WeightedInstance,
    bicriterion_min_robots,
    latency_walks,
    min_max_one_robot,
    weighted_cost,
)
from patrolwalks.model import Instance, Solution, TimedWalk, verify
from patrolwalks.routing import tsp_tour

from conftest import covering_solution, random_int_instance


def weighted_from(inst: Instance, phi) -> WeightedInstance:
    return WeightedInstance.build(inst.name, inst.dist, phi)


# ---------------------------------------------------------------------------
# weighted cost and classes
# ---------------------------------------------------------------------------

def test_uniform_weights_cost_is_max_latency():
    rng = random.Random(1)
    inst = random_int_instance(rng, 5)
    winst = weighted_from(inst, [1] * 5)
    sol = covering_solution(rng, inst)
    report = verify(sol, inst)
    assert weighted_cost(sol, winst) == max(report.latencies)


def test_single_parked_robot_costs_zero():
    winst = WeightedInstance.build("one", [[0]], [1])
    assert weighted_cost(Solution((TimedWalk.simple([0]),)), winst) == 0


def test_unvisited_vertex_rejected():
    winst = WeightedInstance.build("p", [[0, 1], [1, 0]], [1, 1])
    with pytest.raises(UnvisitedVertexError):
        weighted_cost(Solution((TimedWalk.simple([0]),)), winst)


def test_cost_scales_with_time():
    rng = random.Random(2)
    inst = random_int_instance(rng, 4)
    winst = weighted_from(inst, [Fraction(1, k + 1) for k in range(4)])
    sol = covering_solution(rng, inst)
    c = Fraction(7, 3)
    scaled = WeightedInstance.build(
        winst.name, [[x * c for x in row] for row in winst.dist], winst.phi)
    assert weighted_cost(sol.scaled(c), scaled) == c * weighted_cost(sol, winst)


def test_weight_classes_boundary_rule():
    winst = WeightedInstance.build(
        "w", [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]],
        [1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)])
    # 1 -> class 1; 1/2 -> (1/4, 1/2] -> class 2; 1/3 -> class 2;
    # 1/5 -> (1/8, 1/4] -> class 3
    assert [sorted(c) for c in winst.weight_classes()] == [[0], [1, 2], [3]]


def test_weight_normalization():
    winst = WeightedInstance.build("w", [[0, 1], [1, 0]], [4, 1])
    assert winst.phi == (1, Fraction(1, 4))


# ---------------------------------------------------------------------------
# single-robot stand-in
# ---------------------------------------------------------------------------

def test_one_robot_uniform_weights_is_plain_tour():
    rng = random.Random(3)
    inst = random_int_instance(rng, 6)
    winst = weighted_from(inst, [1] * 6)
    walk = min_max_one_robot(winst, range(6))
    assert sorted(v for v, _ in walk.steps) == list(range(6))


def test_one_robot_heavy_class_twice_per_period():
    winst = WeightedInstance.build(
        "two-class", [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]],
        [1, 1, Fraction(1, 2), Fraction(1, 2)])
    walk = min_max_one_robot(winst, range(4))
    heavy = sum(1 for v, _ in walk.steps if v in (0, 1))
    light = sum(1 for v, _ in walk.steps if v in (2, 3))
    assert heavy == 2 * light


def test_one_robot_covers_subset_exactly():
    rng = random.Random(4)
    for _ in range(25):
        inst = random_int_instance(rng, rng.randint(1, 7))
        phi = [Fraction(1, rng.randint(1, 9)) for _ in range(inst.n)]
        winst = weighted_from(inst, phi)
        subset = frozenset(rng.sample(range(inst.n), rng.randint(1, inst.n)))
        walk = min_max_one_robot(winst, subset)
        assert walk.vertices() == subset


# ---------------------------------------------------------------------------
# latency_walks
# ---------------------------------------------------------------------------

def test_uniform_weights_spread_evenly():
    rng = random.Random(5)
    inst = random_int_instance(rng, 6)
    winst = weighted_from(inst, [1] * 6)
    tour = tsp_tour(winst.geometry(), range(6))
    for robots in (1, 2, 3):
        sol = latency_walks(winst, robots)
        assert sol.robots == robots
        assert weighted_cost(sol, winst) == tour.length / robots


def test_block_index_arithmetic_two_blocks_of_two():
    # spread 12 -> ceil(log2) = 4 classes; two robots split them 2 + 2
    winst = WeightedInstance.build(
        "blocks",
        [[0 if i == j else 1 for j in range(4)] for i in range(4)],
        [1, Fraction(1, 2), Fraction(1, 4), Fraction(1, 12)])
    classes = winst.weight_classes()
    assert [sorted(c) for c in classes] == [[0], [1], [2], [3]]

    calls = []

    def spy(wi, subset):
        calls.append(frozenset(subset))
        return min_max_one_robot(wi, subset)

    sol = latency_walks(winst, 2, one_robot=spy)
    assert calls == [frozenset({0, 1}), frozenset({2, 3})]
    assert sol.robots == 2


def test_leftover_robots_go_to_worst_class():
    winst = WeightedInstance.build(
        "lop",
        [[0, 1, 8, 8], [1, 0, 8, 8], [8, 8, 0, 1], [8, 8, 1, 0]],
        [1, 1, Fraction(1, 3), Fraction(1, 3)])
    # classes {0,1} (tour 2) and {2,3} (tour 2, weight 1/3); spread 3 ->
    # 2 classes; with R=3, both get one robot and the leftover joins the
    # heavier class
    sol = latency_walks(winst, 3)
    assert sol.robots == 3
    assert weighted_cost(sol, winst) == max(Fraction(2, 2),
                                            Fraction(1, 3) * Fraction(2, 1))


def test_cost_nonincreasing_in_equal_spacing_branch():
    rng = random.Random(6)
    inst = random_int_instance(rng, 8)
    winst = weighted_from(
        inst, [Fraction(1, rng.randint(1, 10)) for _ in range(8)])
    from patrolwalks.model import ceil_log2

    start = ceil_log2(winst.weight_spread)
    costs = [weighted_cost(latency_walks(winst, robots), winst)
             for robots in range(start, 2 * start + 1)]
    assert all(a >= b for a, b in zip(costs, costs[1:]))


# ---------------------------------------------------------------------------
# deadline <-> weight reduction
# ---------------------------------------------------------------------------

def test_reduction_equivalence_on_fuzz():
    rng = random.Random(7)
    for _ in range(60):
        inst = random_int_instance(rng, rng.randint(1, 6), max_r=20)
        winst = WeightedInstance.from_instance(inst)
        sol = covering_solution(rng, inst)
        feasible = verify(sol, inst).feasible
        assert feasible == (weighted_cost(sol, winst) <= inst.r_min)


def test_bicriterion_uniform_tour_needs_one_robot():
    rng = random.Random(8)
    inst0 = random_int_instance(rng, 6)
    tour = tsp_tour(inst0, range(6))
    inst = Instance.build("t", inst0.dist, [tour.length] * 6)
    res = bicriterion_min_robots(inst, 1)
    assert res.robots == 1
    assert res.achieved_relaxation <= 1


def test_bicriterion_reports_relaxation():
    rng = random.Random(9)
    inst = random_int_instance(rng, 6, max_r=30)
    res = bicriterion_min_robots(inst, 2)
    assert res.cost <= 2 * inst.r_min
    assert res.achieved_relaxation <= 2
    report = verify(res.solution, inst)
    for lat, rv in zip(report.latencies, inst.r):
        assert lat <= 2 * rv


def test_bicriterion_can_fail_for_tiny_alpha():
    inst = Instance.build("far", [[0, 100], [100, 0]], [1, 1])
    with pytest.raises(NoFeasibleRobotsError):
        bicriterion_min_robots(inst, Fraction(1, 1000))
