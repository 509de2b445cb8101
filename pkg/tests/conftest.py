from __future__ import annotations

import random
from fractions import Fraction

import pytest

from patrolwalks.model import Instance, Solution, TimedWalk


def make_fig1(r=(2, 4, 4)) -> Instance:
    """Three vertices a,b,c: unit edges a-b and a-c, d(b,c)=2 by closure."""
    return Instance.build("fig1", [[0, 1, 1], [1, 0, 2], [1, 2, 0]], r,
                          names=("a", "b", "c"))


def random_int_metric(rng: random.Random, n: int, max_d: int = 5) -> list[list[int]]:
    """Random symmetric integer matrix repaired into a metric by closure."""
    d = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = rng.randint(1, max_d)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def random_int_instance(rng: random.Random, n: int, max_d: int = 5,
                        max_r: int = 20) -> Instance:
    dist = random_int_metric(rng, n, max_d)
    r = [rng.randint(2, max_r) for _ in range(n)]
    return Instance.build(f"rnd-{n}", dist, r)


def random_walk(rng: random.Random, inst: Instance, max_len: int = 6,
                with_holds: bool = False, with_offset: bool = False) -> TimedWalk:
    length = rng.randint(1, max_len)
    verts = [rng.randrange(inst.n) for _ in range(length)]
    holds = [Fraction(rng.randint(0, 3)) if with_holds else Fraction(0)
             for _ in range(length)]
    walk = TimedWalk(steps=tuple(zip(verts, holds)))
    if with_offset:
        period = walk.period(inst)
        if period > 0:
            num = rng.randint(0, period.numerator - 1) if period.numerator > 1 else 0
            walk = TimedWalk(steps=walk.steps,
                             offset=Fraction(num, period.denominator))
    return walk


def covering_solution(rng: random.Random, inst: Instance) -> Solution:
    """Random partitioned walks covering every vertex exactly once."""
    verts = list(range(inst.n))
    rng.shuffle(verts)
    walks = []
    while verts:
        take = rng.randint(1, min(4, len(verts)))
        walks.append(TimedWalk.simple(verts[:take]))
        verts = verts[take:]
    return Solution(tuple(walks))


@pytest.fixture
def fig1() -> Instance:
    return make_fig1()
