import random
from fractions import Fraction

import pytest

from conftest import flip_side_a
from toricvanish.divisors import cartier_data, positivity, principal, ray_divisor
from toricvanish.mori import curve_class, extremal_rays, intersect, wall_relation, walls


def test_wall_counts(p2, f1, p1xp1):
    assert len(walls(p2)) == 3
    assert len(walls(f1)) == 4
    assert len(walls(p1xp1)) == 4
    assert len(walls(flip_side_a())) == 1


def test_walls_non_simplicial(cube):
    with pytest.raises(ValueError):
        walls(cube)


def test_wall_relation_f1(f1):
    w = next(w for w in walls(f1) if w.rays == (f1.ray_index((1, 1)),))
    rel = wall_relation(f1, w).as_dict()
    assert rel[f1.ray_index((1, 0))] == 1
    assert rel[f1.ray_index((0, 1))] == 1
    assert rel[f1.ray_index((1, 1))] == -1


def test_wall_relation_p2(p2):
    w = next(w for w in walls(p2) if w.rays == (p2.ray_index((1, 0)),))
    rel = wall_relation(p2, w).as_dict()
    assert rel == {p2.ray_index((1, 0)): 1, p2.ray_index((0, 1)): 1,
                   p2.ray_index((-1, -1)): 1}


def test_wall_relation_flip_side_a():
    fan = flip_side_a()
    (w,) = walls(fan)
    assert set(w.rays) == {fan.ray_index((1, 0, 0)), fan.ray_index((0, 1, 0))}
    rel = wall_relation(fan, w).as_dict()
    assert rel[fan.ray_index((1, 0, 0))] == -1
    assert rel[fan.ray_index((0, 1, 0))] == -1
    assert rel[fan.ray_index((0, 0, 1))] == 2
    assert rel[fan.ray_index((1, 1, -2))] == 1


def test_intersect_f1_exceptional(f1):
    w = next(w for w in walls(f1) if w.rays == (f1.ray_index((1, 1)),))
    E = ray_divisor(f1, (1, 1))
    assert intersect(f1, E, w) == -1


def test_intersect_p2_hyperplane(p2):
    H = ray_divisor(p2, (1, 0))
    for w in walls(p2):
        assert intersect(p2, H, w) == 1


def test_intersect_principal_trivial(p2, f1, p112, p3):
    for fan in (p2, f1, p112, p3):
        basis = [tuple(1 if i == j else 0 for i in range(fan.rank))
                 for j in range(fan.rank)]
        for m in basis:
            div = principal(fan, m)
            for w in walls(fan):
                assert intersect(fan, div, w) == 0


def test_intersect_linear(p2, f1, p112):
    rng = random.Random(21)
    for fan in (p2, f1, p112):
        ws = walls(fan)
        for _ in range(8):
            a = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in fan.rays)
            b = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in fan.rays)
            lam = Fraction(rng.randint(1, 5), rng.randint(1, 3))
            for w in ws:
                left = intersect(fan, tuple(x + lam * y for x, y in zip(a, b)), w)
                assert left == intersect(fan, a, w) + lam * intersect(fan, b, w)


def test_intersect_integral_on_smooth(p2, f1, p1xp1, p3):
    rng = random.Random(23)
    for fan in (p2, f1, p1xp1, p3):
        for _ in range(6):
            D = tuple(Fraction(rng.randint(-3, 3)) for _ in fan.rays)
            for w in walls(fan):
                assert intersect(fan, D, w).denominator == 1


def test_intersect_p112_symmetric_value(p112):
    # D_{(0,1)} . V(<(1,0)>) = 1 on the weighted plane
    w = next(w for w in walls(p112) if w.rays == (p112.ray_index((1, 0)),))
    assert intersect(p112, ray_divisor(p112, (0, 1)), w) == 1
    # and the weight-2 ray divisor pairs to 2 with its own wall curve
    w2 = next(w for w in walls(p112) if w.rays == (p112.ray_index((0, 1)),))
    assert intersect(p112, ray_divisor(p112, (0, 1)), w2) == 2


def test_curve_class_matches_intersect(p2, f1, p112):
    rng = random.Random(29)
    for fan in (p2, f1, p112):
        for w in walls(fan):
            cc = curve_class(fan, w)
            for _ in range(5):
                D = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 2))
                          for _ in fan.rays)
                assert cc.pair(D) == intersect(fan, D, w)


def test_curve_class_principal_vanishing(p2, f1, p3):
    for fan in (p2, f1, p3):
        for w in walls(fan):
            cc = curve_class(fan, w)
            for j in range(fan.rank):
                m = tuple(1 if i == j else 0 for i in range(fan.rank))
                assert cc.pair(principal(fan, m)) == 0


def test_extremal_rays_counts(p2, f1, p1xp1):
    assert len(extremal_rays(p2)) == 1
    assert len(extremal_rays(p2)[0][1]) == 3
    assert len(extremal_rays(f1)) == 2
    rays_pp = extremal_rays(p1xp1)
    assert len(rays_pp) == 2
    assert all(len(item[1]) == 2 for item in rays_pp)
    assert len(extremal_rays(flip_side_a())) == 1


def test_nef_via_walls_agrees_with_support_function(p2, f1, p112):
    rng = random.Random(31)
    for fan in (p2, f1, p112):
        ws = walls(fan)
        for _ in range(12):
            D = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in fan.rays)
            from toricvanish.divisors import NotQCartier

            cd = cartier_data(fan, D)
            if isinstance(cd, NotQCartier):
                continue
            nef_walls = all(intersect(fan, D, w) >= 0 for w in ws)
            assert nef_walls == positivity(fan, D).nef
