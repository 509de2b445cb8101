import random
from fractions import Fraction

import pytest

from patrolwalks.greedy import GreedyConfig
from patrolwalks.instances import (
    GenSpec,
    ResultTable,
    default_solvers,
    generate,
    instance_from_json,
    instance_to_json,
    run_benchmark,
    solution_from_json,
    solution_to_json,
)
from patrolwalks.model import Solution, TimedWalk, validate_instance
from patrolwalks.routing import tsp_tour

from conftest import covering_solution, random_int_instance


def test_generate_single_vertex():
    inst = generate(GenSpec(n=1, seed=0))
    assert inst.n == 1
    assert inst.r[0] > 0


def test_generate_valid_instances():
    for seed in range(60):
        inst = generate(GenSpec(n=seed % 12 + 2, seed=seed))
        assert validate_instance(inst).ok, seed


def test_generate_deadline_bounds():
    # with k drawn from [4, 8], every deadline sits in [tour/8, 8*tour]
    for seed in range(25):
        inst = generate(GenSpec(n=9, k_range=(4, 8), seed=seed))
        tour = tsp_tour(inst, range(inst.n)).length
        for rv in inst.r:
            assert tour / 8 - Fraction(1, 10 ** 6) <= rv <= 8 * tour + Fraction(1, 10 ** 6)


def test_generate_deterministic_bytes():
    a = instance_to_json(generate(GenSpec(n=10, seed=5)))
    b = instance_to_json(generate(GenSpec(n=10, seed=5)))
    assert a == b
    c = instance_to_json(generate(GenSpec(n=10, seed=6)))
    assert a != c


def test_genspec_validation():
    with pytest.raises(ValueError):
        GenSpec(n=0)
    with pytest.raises(ValueError):
        GenSpec(n=3, k_range=(1, 4))
    with pytest.raises(ValueError):
        GenSpec(n=3, k_range=(4, 20))


# ---------------------------------------------------------------------------
# JSON round-trips
# ---------------------------------------------------------------------------

def test_instance_json_round_trip_is_byte_stable():
    inst = generate(GenSpec(n=7, seed=3))
    text = instance_to_json(inst)
    again = instance_from_json(text)
    assert again == inst
    assert instance_to_json(again) == text


def test_instance_json_accepts_rational_strings_and_floats():
    text = '{"name": "t", "n": 2, "dist": [[0, "3/2"], [1.5, 0]], "r": [0.25, "7/3"]}'
    inst = instance_from_json(text)
    assert inst.dist[0][1] == Fraction(3, 2)
    assert inst.dist[1][0] == Fraction(3, 2)
    assert inst.r == (Fraction(1, 4), Fraction(7, 3))
    # canonical form re-parses to the same instance
    assert instance_from_json(instance_to_json(inst)) == inst


def test_instance_json_rejects_wrong_n():
    with pytest.raises(ValueError):
        instance_from_json('{"name": "t", "n": 3, "dist": [[0, 1], [1, 0]], "r": [1, 1]}')


def test_solution_json_round_trip():
    rng = random.Random(4)
    inst = random_int_instance(rng, 5)
    sol = Solution((
        TimedWalk(steps=((0, Fraction(1, 2)), (3, Fraction(0))), offset=Fraction(3, 2)),
        TimedWalk.simple([1, 2, 4]),
    ))
    text = solution_to_json(sol)
    again = solution_from_json(text)
    assert again == sol
    assert solution_to_json(again) == text


# ---------------------------------------------------------------------------
# benchmark harness
# ---------------------------------------------------------------------------

def test_benchmark_empty_inputs():
    assert run_benchmark([], ["approx"]).rows == ()
    inst = generate(GenSpec(n=4, seed=1))
    assert run_benchmark([inst], []).rows == ()


def test_benchmark_rows_feasible_and_sorted():
    instances = [generate(GenSpec(n=n, seed=s)) for n in (4, 6) for s in (0, 1)]
    cfg = GreedyConfig(restarts=2, rng_seed=0)
    table = run_benchmark(instances, ["approx", "greedy", "ogreedy"],
                          solvers=default_solvers(cfg))
    assert len(table.rows) == len(instances) * 3
    assert all(row.feasible for row in table.rows)
    keys = [(row.instance, row.algorithm) for row in table.rows]
    assert keys == sorted(keys)
    assert "approx" in table.summary()


def test_benchmark_unknown_algorithm():
    inst = generate(GenSpec(n=4, seed=1))
    with pytest.raises(KeyError):
        run_benchmark([inst], ["nope"])


def test_csv_round_trip():
    instances = [generate(GenSpec(n=5, seed=s)) for s in (0, 1)]
    table = run_benchmark(instances, ["approx"],
                          solvers=default_solvers(GreedyConfig(restarts=1)))
    text = table.to_csv()
    sizes = {inst.name: inst.n for inst in instances}
    again = ResultTable.from_csv(text, sizes=sizes)
    assert again.to_csv() == text
    assert [r.robots for r in again.rows] == [r.robots for r in table.rows]
    assert [r.total_length for r in again.rows] == [r.total_length for r in table.rows]
