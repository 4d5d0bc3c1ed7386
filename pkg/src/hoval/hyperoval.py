"""Translation hyperovals of PG(2, q^k) and their affine shadows.

The point set is {(1, t, t^(2^i)) : t in GF(q^k)} plus (0,1,0) and (0,0,1).
It is a hyperoval exactly when gcd(i, hk) = 1; the constructor still builds
the set for other exponents so the detection machinery has honest negative
inputs to work on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .errors import GcdHypothesisViolated, TooFewPoints
from .gf2 import tower_create
from .projective import ProjSpace
from .reduction import CorrespondenceMaps, maps_for


@dataclass(frozen=True)
class HyperovalSpec:
    """Parameters (h, k, i): tower GF(2^h) < GF(2^hk), Frobenius x -> x^(2^i)."""

    h: int
    k: int
    i: int
    strict: bool = True

    def __post_init__(self):
        if self.h < 1 or self.k < 1:
            raise ValueError("h and k must be positive")
        hk = self.h * self.k
        if not 1 <= self.i <= hk - 1:
            raise ValueError(f"exponent must lie in 1..{hk - 1}")
        if self.strict and math.gcd(self.i, hk) != 1:
            raise GcdHypothesisViolated(
                f"gcd({self.i}, {hk}) = {math.gcd(self.i, hk)} != 1; "
                "pass strict=False to build the set anyway"
            )

    @property
    def hk(self) -> int:
        return self.h * self.k

    @property
    def is_strict_case(self) -> bool:
        return math.gcd(self.i, self.hk) == 1


class AffinePointSet:
    """A set of normalized affine points of one projective space."""

    __slots__ = ("points", "ordered", "space")

    def __init__(self, points, space: ProjSpace):
        self.points = frozenset(points)
        self.ordered = tuple(sorted(self.points))
        self.space = space
        for p in self.ordered:
            if space.chunk(p, 0) != 1:
                raise ValueError(f"0x{p:x} is not normalized affine")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ordered)

    def __contains__(self, p: int) -> bool:
        return p in self.points


class DirectionSet:
    """Normalized points of the hyperplane at infinity hit by secant lines."""

    __slots__ = ("points", "ordered", "space")

    def __init__(self, points, space: ProjSpace):
        self.points = frozenset(points)
        self.ordered = tuple(sorted(self.points))
        self.space = space

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ordered)

    def __contains__(self, p: int) -> bool:
        return p in self.points


@dataclass(frozen=True)
class TranslationHyperoval:
    spec: HyperovalSpec
    maps: CorrespondenceMaps
    plane_points: tuple  # all q^k + 2 points of PG(2, q^k), sorted
    affine: AffinePointSet  # the q^k affine images in PG(2k, q)
    infinity: tuple  # the two plane points at infinity

    @property
    def size(self) -> int:
        return len(self.plane_points)


def build_hyperoval(spec: HyperovalSpec, maps: CorrespondenceMaps | None = None) -> TranslationHyperoval:
    if maps is None:
        maps = maps_for(tower_create(spec.h, spec.k))
    tower = maps.tower
    big = tower.big
    plane = maps.plane_big
    frob = big.frob
    affine_plane = [plane.pack((1, t, frob(t, spec.i))) for t in range(big.q)]
    e1 = plane.pack((0, 1, 0))
    e2 = plane.pack((0, 0, 1))
    q_points = AffinePointSet((maps.abb_affine(p) for p in affine_plane), maps.ambient)
    return TranslationHyperoval(
        spec=spec,
        maps=maps,
        plane_points=tuple(sorted(affine_plane + [e1, e2])),
        affine=q_points,
        infinity=(e1, e2),
    )


def is_arc(points: Sequence[int], space: ProjSpace):
    """No three of the points collinear.

    Returns (True, None) or (False, (p1, p2, p3)) with a collinear triple.
    Points must be normalized; duplicates are rejected up front.
    """
    pts = sorted(set(points))
    if len(pts) != len(points):
        raise ValueError("duplicate points")
    if len(pts) < 3:
        raise TooFewPoints(f"need at least 3 points, got {len(pts)}")
    first_pair: dict = {}
    for a, b in combinations(pts, 2):
        key = space.pair_line_key(a, b)
        prev = first_pair.get(key)
        if prev is not None:
            third = prev[0] if prev[0] not in (a, b) else prev[1]
            return False, (third, a, b)
        first_pair[key] = (a, b)
    return True, None


def directions(q_points: AffinePointSet, maps: CorrespondenceMaps) -> DirectionSet:
    """Normalized H_inf points spanned by differences of affine points."""
    h = maps.tower.h
    normalize = maps.hinf.normalize
    out = set()
    for a, b in combinations(q_points.ordered, 2):
        out.add(normalize((a ^ b) >> h))
    return DirectionSet(out, maps.hinf)


def direction_pair_counts(q_points: AffinePointSet, maps: CorrespondenceMaps) -> dict:
    """How many point pairs determine each direction."""
    h = maps.tower.h
    normalize = maps.hinf.normalize
    out: dict[int, int] = {}
    for a, b in combinations(q_points.ordered, 2):
        d = normalize((a ^ b) >> h)
        out[d] = out.get(d, 0) + 1
    return out


def translation_closure_check(q_points: AffinePointSet):
    """P1 + P2 + P0 stays in the set for a fixed base point P0.

    The affine set is closed under this ternary operation iff it is a coset
    of an additive group of vectors, which is what makes every secant
    direction a full translation direction.  Returns (ok, witness).
    """
    base = q_points.ordered[0]
    pts = q_points.points
    for a, b in combinations(q_points.ordered, 2):
        v = a ^ b ^ base
        if v not in pts:
            return False, (a, b, base, v)
    return True, None
