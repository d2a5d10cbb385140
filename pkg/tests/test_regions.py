import random
from fractions import Fraction

import pytest

from toricvanish.cones import extreme_rays
from toricvanish.regions import (
    IneqSystem,
    count_lattice_points,
    feasible,
    has_lattice_point,
    is_bounded,
    lattice_points,
    subtract_cones,
)


def sys_of(dim, triples):
    return IneqSystem.build(dim, triples)


def test_feasible_open_interval():
    s = sys_of(1, [((1,), 0, True), ((-1,), -1, True)])  # 0 < x < 1
    w = feasible(s)
    assert w == (Fraction(1, 2),)


def test_infeasible():
    s = sys_of(1, [((1,), 0, False), ((-1,), 1, False)])  # x >= 0, -x >= 1
    assert feasible(s) is None


def test_feasible_chamber_strict():
    # <m,(1,0)> < 1, <m,(0,1)> < 1, <m,(-1,-1)> < 1
    s = sys_of(2, [((-1, 0), -1, True), ((0, -1), -1, True), ((1, 1), -1, True)])
    assert feasible(s) == (0, 0)


def test_is_bounded():
    square = sys_of(2, [((1, 0), 0, False), ((-1, 0), -1, False),
                        ((0, 1), 0, False), ((0, -1), -1, False)])
    assert is_bounded(square)
    half = sys_of(2, [((1, 0), 0, False)])
    assert not is_bounded(half)
    chamber = sys_of(2, [((-1, 0), -1, True), ((0, -1), -1, True), ((1, 1), -1, True)])
    assert is_bounded(chamber)
    with pytest.raises(ValueError, match="empty region"):
        is_bounded(sys_of(1, [((1,), 0, False), ((-1,), 1, False)]))


def test_lattice_points_triangle():
    # m1 >= -1, m2 >= -1, -m1-m2 >= -1: 10 points
    s = sys_of(2, [((1, 0), -1, False), ((0, 1), -1, False), ((-1, -1), -1, False)])
    pts = lattice_points(s)
    assert len(pts) == 10
    assert pts == sorted(pts)
    assert (-1, -1) in pts and (2, -1) in pts


def test_lattice_points_trivial():
    assert lattice_points(sys_of(1, [((1,), 0, False), ((-1,), 1, False)])) == []
    s = sys_of(1, [((1,), 0, False), ((-1,), 0, False)])
    assert lattice_points(s) == [(0,)]


def test_has_lattice_point_thin_slab():
    # 1/4 <= x <= 1/3, y >= 0: rationally feasible, no integer points
    s = sys_of(2, [((4, 0), 1, False), ((-3, 0), -1, False), ((0, 1), 0, False)])
    assert feasible(s) is not None
    assert not has_lattice_point(s)
    # widen the slab to include x = 1
    s2 = sys_of(2, [((1, 0), 0, False), ((-1, 0), -1, False), ((0, 1), 0, False)])
    assert has_lattice_point(s2)


def test_has_lattice_point_diagonal_slab():
    # 1/4 <= x - y <= 1/3: both coordinates unbounded, no integer points
    s = sys_of(2, [((4, -4), 1, False), ((-3, 3), -1, False)])
    assert feasible(s) is not None
    assert not has_lattice_point(s)


def brute_force_box(triples, dim, radius=6):
    pts = []
    from itertools import product

    for p in product(range(-radius, radius + 1), repeat=dim):
        ok = True
        for a, c, s in triples:
            v = sum(x * y for x, y in zip(a, p))
            if s and not v > c:
                ok = False
                break
            if not s and not v >= c:
                ok = False
                break
        if ok:
            pts.append(p)
    return pts


def test_random_systems_against_grid():
    rng = random.Random(7)
    for _ in range(120):
        triples = []
        for _ in range(rng.randint(1, 5)):
            a = (rng.randint(-3, 3), rng.randint(-3, 3))
            if a == (0, 0):
                a = (1, 0)
            triples.append((a, rng.randint(-4, 4), rng.random() < 0.3))
        s = sys_of(2, triples)
        w = feasible(s)
        grid = brute_force_box(triples, 2, radius=50)
        if w is not None:
            for (a, c, strict), (na, nc, ns) in zip(triples, s.rows):
                val = sum(Fraction(x) * y for x, y in zip(na, w))
                assert val > nc if ns else val >= nc
        else:
            assert grid == []
        if w is not None:
            # recession oracle: with covectors in [-3,3]^2 the recession cone,
            # if nontrivial, contains an integer direction in the same box
            rec_dirs = [d for d in
                        ((dx, dy) for dx in range(-3, 4) for dy in range(-3, 4))
                        if d != (0, 0)
                        and all(a[0] * d[0] + a[1] * d[1] >= 0 for a, c, st in triples)]
            assert is_bounded(s) == (not rec_dirs)
        if w is not None and is_bounded(s):
            inner = brute_force_box(triples, 2, radius=200)
            assert sorted(lattice_points(s)) == inner


def test_lattice_count_unimodular_invariance():
    rng = random.Random(11)
    base = [((1, 0), -2, False), ((0, 1), -2, False), ((-1, -1), -3, False)]
    s = sys_of(2, base)
    n0 = count_lattice_points(s)
    for _ in range(10):
        # random unimodular transform T: count of {x : A(Tx) >= c} equals n0
        a, b = rng.randint(-2, 2), rng.randint(-2, 2)
        T = [[1, a], [0, 1]] if rng.random() < 0.5 else [[1, 0], [b, 1]]
        rows = []
        for cov, c, strict in base:
            newcov = (cov[0] * T[0][0] + cov[1] * T[1][0],
                      cov[0] * T[0][1] + cov[1] * T[1][1])
            rows.append((newcov, c, strict))
        assert count_lattice_points(sys_of(2, rows)) == n0


def test_extreme_rays_examples():
    assert extreme_rays([(1, 0), (0, 1), (1, 1)]) == [(1, 0), (0, 1)]
    assert extreme_rays([(1, 0), (0, 1)]) == [(1, 0), (0, 1)]
    with pytest.raises(ValueError, match="not strongly convex"):
        extreme_rays([(1, 0), (-1, 0)])


def test_extreme_rays_doubled_classes():
    rays = [(1, 0, 0, 1), (1, 0, 0, 1), (0, 1, 1, 0), (0, 2, 2, 0)]
    out = extreme_rays(rays)
    assert len(out) == 2


def test_extreme_rays_regenerate_cone():
    from toricvanish.cones import cones_equal

    rng = random.Random(3)
    for _ in range(25):
        gens = [(rng.randint(0, 4), rng.randint(0, 4), rng.randint(0, 4))
                for _ in range(rng.randint(1, 6))]
        gens = [g for g in gens if any(g)]
        if not gens:
            continue
        sub = extreme_rays(gens)
        assert cones_equal(gens, sub, 3)


def test_subtract_cones_cover():
    # the two halves of the plane cover it
    left = ([(1, 0)], [])
    right = ([(-1, 0)], [])
    assert subtract_cones(2, [], [left, right]) is None
    w = subtract_cones(2, [], [left])
    assert w is not None and w[0] < 0
