"""Planes spanned by the affine point set together with its long secants.

For each affine point P of the translation set C and each long secant s of
its direction set, the span <P, s> is a plane of PG(2k, q).  These C-planes
tile the affine points off C, slice C itself into q-arcs, and every triple
of C points generates either one of them or a plane holding exactly four
points of C.  The axiom checks here are exhaustive at the supported sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import CPlaneConstructionFailed, DegenerateSpan, EnumerationTooLarge
from .hyperoval import AffinePointSet, is_arc
from .projective import DEFAULT_BUDGET
from .pseudoregulus import SecantStructure
from .reduction import CorrespondenceMaps


@dataclass(frozen=True)
class CPlane:
    secant_index: int
    base: int  # affine coset representative against the lifted secant rows
    rows: tuple  # canonical 3-row basis in the ambient space
    points: tuple  # the q points of C on this plane, sorted


@dataclass(frozen=True)
class CPlaneFamily:
    planes: tuple
    m: int  # number of long secants
    q: int
    vector_keys: frozenset  # (secant rows, reduced base vector) per plane

    def __len__(self) -> int:
        return len(self.planes)


def build_c_planes(
    c_points: AffinePointSet,
    structure: SecantStructure,
    maps: CorrespondenceMaps,
) -> CPlaneFamily:
    """Group C by coset against each lifted long secant.

    Every (point, secant) pair must land in a class of exactly q points of
    C; the family size comes out to |C| * m / q.
    """
    amb = maps.ambient
    h = maps.tower.h
    q = amb.q
    lifted = [tuple(r << h for r in s.rows) for s in structure.secants]
    groups: dict = {}
    for p in c_points.ordered:
        for sidx, rows in enumerate(lifted):
            key = (sidx, amb.reduce(p, rows))
            groups.setdefault(key, []).append(p)
    planes = []
    for (sidx, base), pts in sorted(groups.items()):
        if len(pts) != q:
            raise CPlaneConstructionFailed(
                f"secant {sidx} coset 0x{base:x} holds {len(pts)} points of C, "
                f"expected {q}"
            )
        rows = (base,) + lifted[sidx]
        planes.append(
            CPlane(secant_index=sidx, base=base, rows=rows, points=tuple(pts))
        )
    expected = len(c_points) * structure.count // q
    if len(planes) != expected:
        raise CPlaneConstructionFailed(
            f"{len(planes)} planes formed, expected {expected}"
        )
    hinf = maps.hinf
    vkeys = frozenset(
        (structure.secants[pl.secant_index].rows,
         hinf.reduce(pl.base >> h, structure.secants[pl.secant_index].rows))
        for pl in planes
    )
    if len(vkeys) != len(planes):
        raise CPlaneConstructionFailed("two planes share a vector key")
    return CPlaneFamily(
        planes=tuple(planes), m=structure.count, q=q, vector_keys=vkeys
    )


@dataclass(frozen=True)
class AxiomReport:
    name: str
    ok: bool
    checked: int
    witness: tuple | None
    detail: dict


def _check_a1(family: CPlaneFamily, maps: CorrespondenceMaps) -> AxiomReport:
    """Each plane meets C in a q-arc."""
    amb = maps.ambient
    checked = 0
    for idx, pl in enumerate(family.planes):
        ok, witness = is_arc(pl.points, amb)
        checked += len(pl.points) * (len(pl.points) - 1) // 2
        if not ok:
            return AxiomReport(
                "A1", False, checked, ("plane", idx) + witness, {}
            )
    return AxiomReport("A1", True, checked, None, {"planes": len(family.planes)})


def _check_a2(family: CPlaneFamily, c_points: AffinePointSet) -> AxiomReport:
    """Every pair of C points lies on exactly one plane of the family."""
    seen: dict = {}
    for idx, pl in enumerate(family.planes):
        for a, b in combinations(pl.points, 2):
            prev = seen.get((a, b))
            if prev is not None:
                return AxiomReport(
                    "A2", False, len(seen), ("pair", a, b, prev, idx), {}
                )
            seen[(a, b)] = idx
    n = len(c_points)
    total = n * (n - 1) // 2
    ok = len(seen) == total
    witness = None if ok else ("covered", len(seen), total)
    return AxiomReport("A2", ok, len(seen), witness, {"pairs": total})


def _check_a3(
    family: CPlaneFamily, c_points: AffinePointSet, maps: CorrespondenceMaps
) -> AxiomReport:
    """Affine points off C lie on exactly one plane; C points on exactly m."""
    amb = maps.ambient
    q = family.q
    cover: dict = {}
    for pl in family.planes:
        r1, r2 = pl.rows[1], pl.rows[2]
        m1 = [amb.smul(c, r1) for c in range(q)]
        m2 = [amb.smul(c, r2) for c in range(q)]
        for a in m1:
            pa = pl.base ^ a
            for b in m2:
                p = pa ^ b
                cover[p] = cover.get(p, 0) + 1
    cset = c_points.points
    checked = 0
    for p, cnt in cover.items():
        want = family.m if p in cset else 1
        if cnt != want:
            return AxiomReport(
                "A3", False, checked, ("point", p, cnt, want), {}
            )
        checked += 1
    total_affine = amb.q ** (amb.width - 1)
    ok = len(cover) == total_affine
    witness = None if ok else ("coverage", len(cover), total_affine)
    return AxiomReport(
        "A3", ok, checked, witness,
        {"affine_points": total_affine, "off_set_planes": 1, "on_set_planes": family.m},
    )


def _check_a4(
    family: CPlaneFamily,
    c_points: AffinePointSet,
    maps: CorrespondenceMaps,
    budget: int | None,
) -> AxiomReport:
    """Triples of C points span family planes or 4-point planes only.

    Every unordered triple is binned by the affine plane it spans, working
    with difference vectors in the H_inf coordinate space.  A bin of a
    family plane must collect C(q, 3) triples, any other bin exactly
    C(4, 3) = 4, meaning a fourth point of C completes it.
    """
    space = maps.hinf
    h = maps.tower.h
    q = family.q
    vecs = [p >> h for p in c_points.ordered]
    n = len(vecs)
    total = n * (n - 1) * (n - 2) // 6
    if budget is not None and total > budget:
        raise EnumerationTooLarge(total, budget, "triple span scan")
    space.ensure_tables()
    normalize = space.normalize
    pair_key = space.pair_line_key
    reduce = space.reduce
    # keys packed into a single int: rows then coset, `shift` bits apiece
    shift = space.width * space.field.m
    fam_packed = {
        (rows[0] << 2 * shift) | (rows[1] << shift) | coset
        for rows, coset in family.vector_keys
    }
    counts: dict = {}
    for ia in range(n - 2):
        a = vecs[ia]
        for ib in range(ia + 1, n - 1):
            u = normalize(a ^ vecs[ib])
            for ic in range(ib + 1, n):
                w = normalize(a ^ vecs[ic])
                try:
                    r0, r1 = pair_key(u, w)
                except DegenerateSpan:
                    return AxiomReport(
                        "A4", False, 0,
                        ("collinear", c_points.ordered[ia],
                         c_points.ordered[ib], c_points.ordered[ic]),
                        {},
                    )
                kk = (r0 << 2 * shift) | (r1 << shift) | reduce(a, (r0, r1))
                counts[kk] = counts.get(kk, 0) + 1
    family_mult = comb(q, 3)
    family_seen = 0
    quads = 0
    mask = (1 << shift) - 1
    for kk, cnt in counts.items():
        in_family = kk in fam_packed
        if in_family and cnt == family_mult:
            family_seen += 1
        elif cnt == 4 and not in_family:
            quads += 1
        else:
            return AxiomReport(
                "A4", False, total,
                ("plane", (kk >> 2 * shift, (kk >> shift) & mask), kk & mask,
                 cnt, "family" if in_family else "outside"),
                {},
            )
    ok = family_seen == len(family.planes)
    witness = None if ok else ("family planes seen", family_seen, len(family.planes))
    return AxiomReport(
        "A4", ok, total, witness,
        {"triples": total, "family_planes": family_seen, "four_point_planes": quads},
    )


def check_axioms(
    family: CPlaneFamily,
    c_points: AffinePointSet,
    maps: CorrespondenceMaps,
    axioms=("A1", "A2", "A3", "A4"),
    budget: int | None = DEFAULT_BUDGET,
) -> dict:
    """Run the requested axiom checks; returns {name: AxiomReport}."""
    out: dict = {}
    for name in axioms:
        if name == "A1":
            out[name] = _check_a1(family, maps)
        elif name == "A2":
            out[name] = _check_a2(family, c_points)
        elif name == "A3":
            out[name] = _check_a3(family, c_points, maps)
        elif name == "A4":
            out[name] = _check_a4(family, c_points, maps, budget)
        else:
            raise ValueError(f"unknown axiom {name!r}")
    return out
