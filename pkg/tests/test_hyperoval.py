"""Hyperoval construction, arc checks, directions, translation closure."""

import math
from itertools import combinations

import pytest

from hoval.errors import GcdHypothesisViolated, TooFewPoints
from hoval.gf2 import tower_create
from hoval.hyperoval import (
    AffinePointSet,
    HyperovalSpec,
    build_hyperoval,
    direction_pair_counts,
    directions,
    is_arc,
    translation_closure_check,
)
from hoval.reduction import maps_for


@pytest.fixture(scope="module")
def hov321():
    return build_hyperoval(HyperovalSpec(3, 2, 1))


def test_spec_validation():
    with pytest.raises(GcdHypothesisViolated):
        HyperovalSpec(4, 2, 2)
    HyperovalSpec(4, 2, 2, strict=False)  # allowed as control input
    with pytest.raises(ValueError):
        HyperovalSpec(3, 2, 0)
    with pytest.raises(ValueError):
        HyperovalSpec(3, 2, 6)
    assert HyperovalSpec(3, 2, 5).hk == 6
    assert not HyperovalSpec(4, 2, 2, strict=False).is_strict_case


def test_sizes_321(hov321):
    assert hov321.size == 66  # q^k + 2 = 64 + 2
    assert len(hov321.affine) == 64
    assert len(set(hov321.plane_points)) == 66
    assert hov321.infinity[0] != hov321.infinity[1]
    for p in hov321.affine:
        assert hov321.maps.ambient.chunk(p, 0) == 1


def test_oval_is_arc_in_plane(hov321):
    ok, witness = is_arc(hov321.plane_points, hov321.maps.plane_big)
    assert ok and witness is None


def test_frobenius_points_explicit():
    # q = 8, k = 2, i = 1: (1, t, t^2) for a couple of hand-computed t
    hov = build_hyperoval(HyperovalSpec(3, 2, 1))
    big = hov.maps.tower.big
    plane = hov.maps.plane_big
    for t in (0, 1, 2, 3, 37):
        assert plane.pack((1, t, big.mul(t, t))) in hov.plane_points


def test_nonstrict_square_exponent_not_an_arc():
    # gcd(2, 4) = 2: u^3 = v^3 has nontrivial solutions, so collinear
    # triples must exist
    hov = build_hyperoval(HyperovalSpec(2, 2, 2, strict=False))
    ok, witness = is_arc(hov.plane_points, hov.maps.plane_big)
    assert not ok
    a, b, c = witness
    key = hov.maps.plane_big.pair_line_key
    assert key(a, b) == key(a, c)


def test_is_arc_guards():
    maps = maps_for(tower_create(3, 2))
    with pytest.raises(TooFewPoints):
        is_arc([1, 2], maps.plane_big)
    with pytest.raises(ValueError):
        is_arc([1, 1, 2], maps.plane_big)


def test_direction_count_and_pair_uniformity(hov321):
    d = directions(hov321.affine, hov321.maps)
    assert len(d) == 63  # q^k - 1 for a strict exponent
    counts = direction_pair_counts(hov321.affine, hov321.maps)
    # each direction comes from exactly q^k / 2 unordered pairs
    assert set(counts.values()) == {32}
    assert sum(counts.values()) == 64 * 63 // 2


def test_direction_count_331():
    hov = build_hyperoval(HyperovalSpec(3, 3, 1))
    d = directions(hov.affine, hov.maps)
    assert len(d) == 8**3 - 1


def test_directions_collapse_for_gcd2_control():
    # gcd(i, hk) = 2 glues scalar fibers of size 3:
    # |D| = (q^k - 1) / 3 + non... the frozen control count is 85
    hov = build_hyperoval(HyperovalSpec(4, 2, 2, strict=False))
    d = directions(hov.affine, hov.maps)
    assert len(d) == 85


def test_translation_closure(hov321):
    ok, witness = translation_closure_check(hov321.affine)
    assert ok and witness is None


def test_translation_closure_witness_on_damage(hov321):
    pts = list(hov321.affine.ordered)
    # swap one point for an affine point outside the set
    outside = next(
        1 | (v << hov321.maps.tower.h)
        for v in range(1, 1 << 12)
        if (1 | (v << hov321.maps.tower.h)) not in hov321.affine.points
    )
    damaged = AffinePointSet(pts[1:] + [outside], hov321.maps.ambient)
    ok, witness = translation_closure_check(damaged)
    assert not ok
    a, b, base, v = witness
    assert v == a ^ b ^ base
    assert v not in damaged.points


def test_closure_holds_even_nonstrict():
    # closure is a property of the graph of an additive map, so the gcd
    # hypothesis plays no role here
    hov = build_hyperoval(HyperovalSpec(4, 2, 2, strict=False))
    ok, _ = translation_closure_check(hov.affine)
    assert ok


def test_affine_set_is_graph_of_additive_map(hov321):
    # difference of any two points has the same shape as a point difference
    # from the base point: the direction multiset is closed under addition
    tower = hov321.maps.tower
    vecs = {p ^ hov321.affine.ordered[0] for p in hov321.affine.ordered}
    for a, b in combinations(sorted(vecs)[:20], 2):
        assert a ^ b in vecs


def test_exponent_family_sizes():
    # all strict exponents at (3, 2) give hyperovals
    for i in (1, 5):
        hov = build_hyperoval(HyperovalSpec(3, 2, i))
        ok, _ = is_arc(hov.plane_points, hov.maps.plane_big)
        assert ok, i
        assert math.gcd(i, 6) == 1
