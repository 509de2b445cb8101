"""Compiled and pure kernels must agree bit for bit on shared inputs."""

import random
from fractions import Fraction

import pytest

from patrolwalks import kernels
from patrolwalks.kernels import compiled_module, pure_module
from patrolwalks.model import Instance, TimedWalk, periodic_feasibility

from conftest import random_int_instance, random_int_metric, random_walk

needs_compiled = pytest.mark.skipif(compiled_module is None,
                                    reason="compiled kernels not built")


def test_backend_reporting():
    assert kernels.BACKEND in ("compiled", "pure")
    assert "pure" in kernels.available_backends()


@needs_compiled
def test_walk_feasible_parity():
    import numpy as np

    rng = random.Random(11)
    for _ in range(400):
        n = rng.randint(1, 5)
        dist = random_int_metric(rng, n, 4)
        r = [rng.randint(1, 10) for _ in range(n)]
        k = rng.randint(1, 6)
        verts = [rng.randrange(n) for _ in range(k)]
        holds = [rng.randint(0, 3) for _ in range(k)]
        override = rng.choice([None, rng.randint(1, 8)]) if k >= 2 else None
        pure = pure_module.walk_feasible(verts, holds, dist, r, override)
        comp = compiled_module.walk_feasible(
            np.asarray(verts, dtype=np.int64),
            np.asarray(holds, dtype=np.int64),
            np.asarray(dist, dtype=np.int64),
            np.asarray(r, dtype=np.int64),
            -1 if override is None else override)
        assert pure == comp


@needs_compiled
def test_two_opt_parity():
    import numpy as np

    rng = random.Random(12)
    for _ in range(100):
        n = rng.randint(2, 9)
        dist = random_int_metric(rng, n, 9)
        order = list(range(n))
        rng.shuffle(order)
        pure = pure_module.two_opt(order, dist)
        comp = compiled_module.two_opt(np.asarray(order, dtype=np.int64),
                                       np.asarray(dist, dtype=np.int64))
        assert pure == comp


@needs_compiled
def test_oracle_parity_verdicts_and_frames():
    import numpy as np

    rng = random.Random(13)
    for _ in range(60):
        n = rng.randint(1, 4)
        dist = random_int_metric(rng, n, 3)
        r = [rng.randint(1, 6) for _ in range(n)]
        robots = rng.randint(1, 2)
        horizon = rng.randint(4, 16)
        pure = pure_module.oracle_search(dist, r, robots, horizon)
        comp = compiled_module.oracle_search(np.asarray(dist, dtype=np.int64),
                                             np.asarray(r, dtype=np.int64),
                                             robots, horizon)
        if pure is None:
            assert comp is None
        else:
            assert comp is not None
            pure_frames = [tuple(f) for f in pure[0]] + [tuple(pure[1])]
            comp_frames = [tuple(f) for f in comp[0]] + [tuple(comp[1])]
            assert pure_frames == comp_frames


def test_dispatcher_fallback_on_off_grid_holds():
    # holds off the instance grid cannot be scaled to int64; the dispatcher
    # must answer exactly through the pure path. Period is 1/7 + 2 = 15/7:
    # v0 is away for 2, v1 for the whole period.
    walk = TimedWalk(steps=((0, Fraction(1, 7)), (1, Fraction(0))))
    boundary = Instance.build("p", [[0, 1], [1, 0]], [2, Fraction(15, 7)])
    assert periodic_feasibility(walk, boundary)
    tight = Instance.build("p", [[0, 1], [1, 0]], [2, 2])
    assert not periodic_feasibility(walk, tight)


def test_dispatcher_matches_pure_on_instance():
    rng = random.Random(14)
    for _ in range(100):
        inst = random_int_instance(rng, rng.randint(1, 5), max_d=4, max_r=10)
        walk = random_walk(rng, inst, with_holds=True)
        verts = [v for v, _ in walk.steps]
        holds = [h for _, h in walk.steps]
        via_dispatch = kernels.walk_feasible(verts, holds, inst)
        via_pure = pure_module.walk_feasible(verts, holds, inst.dist, inst.r, None)
        assert via_dispatch == via_pure
