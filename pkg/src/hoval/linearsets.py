"""Secant spectra of direction sets and their GF(2)-linear structure.

The direction set D of a translation hyperoval lives in H_inf = PG(2k-1, q).
Its line spectrum says how many lines meet D in j points; the target shape
is support {0, 1, 3, q-1}.  D is also the GF(q)-projection of a GF(2)-linear
point set K of rank hk, scattered with respect to the (h-1)-spread.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product

from .errors import EnumerationTooLarge, NotF2Linear, TooFewPoints
from .gf2 import field_create
from .hyperoval import AffinePointSet, DirectionSet
from .projective import DEFAULT_BUDGET, ProjSpace, projective_points_count
from .reduction import CorrespondenceMaps, Spread


@dataclass(frozen=True)
class SpectrumHistogram:
    """counts[j] = number of lines meeting the point set in exactly j points."""

    counts: dict
    mode: str
    nlines: int
    npoints: int

    @property
    def support(self) -> tuple:
        return tuple(sorted(j for j, c in self.counts.items() if c))

    def count(self, j: int) -> int:
        return self.counts.get(j, 0)

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "lines": self.nlines,
            "points": self.npoints,
            "counts": {str(j): self.counts[j] for j in sorted(self.counts)},
        }


def spectrum_conforms(hist: SpectrumHistogram, q: int):
    """Support must be contained in {0, 1, 3, q-1}.

    Returns (ok, offending_j or None).
    """
    allowed = {0, 1, 3, q - 1}
    for j in hist.support:
        if j not in allowed:
            return False, j
    return True, None


# -- pairs mode ---------------------------------------------------------------

def _pair_multiplicities(pts, space: ProjSpace, budget):
    npairs = len(pts) * (len(pts) - 1) // 2
    if budget is not None and npairs > budget:
        raise EnumerationTooLarge(npairs, budget, "secant pair scan")
    key = space.pair_line_key
    mult: dict = {}
    for a, b in combinations(pts, 2):
        k = key(a, b)
        mult[k] = mult.get(k, 0) + 1
    return mult


def _merge_counts(dicts):
    out: dict = {}
    for d in dicts:
        for k, v in d.items():
            out[k] = out.get(k, 0) + v
    return out


def _hist_from_multiplicities(mult, ndirs: int, space: ProjSpace) -> dict:
    counts: dict = {}
    incident = 0
    for c in mult.values():
        # invert c = j(j-1)/2
        j = (1 + math.isqrt(1 + 8 * c)) // 2
        if j * (j - 1) // 2 != c:
            raise AssertionError(f"pair multiplicity {c} is not triangular")
        counts[j] = counts.get(j, 0) + 1
        incident += j
    # every point lies on (q^n - 1)/(q - 1) lines; what is not accounted for
    # by multi-point lines must be 1-point lines
    through = projective_points_count(space.n, space.q)
    ones = ndirs * through - incident
    if ones:
        counts[1] = ones
    zeros = space.nlines() - sum(counts.values())
    if zeros:
        counts[0] = zeros
    return {j: counts[j] for j in sorted(counts)}


# -- exhaustive mode ----------------------------------------------------------

def _cone_set(pts, space: ProjSpace) -> frozenset:
    """All scalar multiples of the normalized points, as raw vectors."""
    cone = set()
    for d in pts:
        for lam in range(1, space.q):
            cone.add(space.smul(lam, d))
    return frozenset(cone)


def _scan_pattern(space: ProjSpace, cone, task) -> dict:
    p0, p1, free0, free1, pinned = task
    q, h = space.q, space.h
    smul = space.smul
    counts: dict = {}
    base0 = 1 << (p0 * h)
    base1 = 1 << (p1 * h)
    ranges0 = [range(q)] * len(free0)
    if pinned is not None:
        ranges0[0] = (pinned,)
    lams = range(1, q)
    for vals0 in product(*ranges0):
        r0 = base0
        for sh, c in zip(free0, vals0):
            r0 |= c << sh
        for vals1 in product(range(q), repeat=len(free1)):
            r1 = base1
            for sh, c in zip(free1, vals1):
                r1 |= c << sh
            c = (r1 in cone) + (r0 in cone)
            for lam in lams:
                if r0 ^ smul(lam, r1) in cone:
                    c += 1
            counts[c] = counts.get(c, 0) + 1
    return counts


def _exhaustive_tasks(space: ProjSpace):
    tasks = []
    for p0, p1, free0, free1 in space.line_chunks():
        if free0:
            for v in range(space.q):
                tasks.append((p0, p1, free0, free1, v))
        else:
            tasks.append((p0, p1, free0, free1, None))
    return tasks


# worker-process state for the parallel paths
_W: dict = {}


def _worker_init(m, modulus, n, pts, need_cone):
    f = field_create(m, modulus)
    space = ProjSpace(n, f)
    space.ensure_tables()
    _W["space"] = space
    _W["pts"] = tuple(pts)
    _W["cone"] = _cone_set(pts, space) if need_cone else None


def _worker_scan(task) -> dict:
    return _scan_pattern(_W["space"], _W["cone"], task)


def _worker_pairs(bounds) -> dict:
    lo, hi = bounds
    space = _W["space"]
    pts = _W["pts"]
    key = space.pair_line_key
    mult: dict = {}
    for idx in range(lo, hi):
        a = pts[idx]
        for b in pts[idx + 1:]:
            k = key(a, b)
            mult[k] = mult.get(k, 0) + 1
    return mult


def spectrum(
    dirs,
    space: ProjSpace | None = None,
    mode: str = "pairs",
    budget: int | None = DEFAULT_BUDGET,
    processes: int = 1,
) -> SpectrumHistogram:
    """Line spectrum of a point set.

    mode "pairs" scans the C(|D|, 2) point pairs and derives the 1- and
    0-line counts from incidence identities; mode "exhaustive" walks every
    line of the space and counts memberships directly.  Both give the same
    histogram; exhaustive is the independent cross-check but costs
    nlines * (q + 1) operations.
    """
    if isinstance(dirs, DirectionSet):
        pts = dirs.ordered
        space = dirs.space
    else:
        pts = tuple(sorted(dirs))
        if space is None:
            raise ValueError("space is required for plain point iterables")
    if not pts:
        raise TooFewPoints("empty point set has no spectrum")
    if mode not in ("pairs", "exhaustive"):
        raise ValueError(f"unknown mode {mode!r}")

    if mode == "pairs":
        if processes > 1 and len(pts) >= 64:
            npairs = len(pts) * (len(pts) - 1) // 2
            if budget is not None and npairs > budget:
                raise EnumerationTooLarge(npairs, budget, "secant pair scan")
            step = max(1, len(pts) // (4 * processes))
            bounds = [
                (lo, min(lo + step, len(pts)))
                for lo in range(0, len(pts), step)
            ]
            with ProcessPoolExecutor(
                max_workers=processes,
                initializer=_worker_init,
                initargs=(space.field.m, space.field.modulus, space.n, pts, False),
            ) as pool:
                mult = _merge_counts(pool.map(_worker_pairs, bounds))
        else:
            mult = _pair_multiplicities(pts, space, budget)
        counts = _hist_from_multiplicities(mult, len(pts), space)
        return SpectrumHistogram(counts, "pairs", space.nlines(), len(pts))

    est = space.nlines() * (space.q + 1)
    if budget is not None and est > budget:
        raise EnumerationTooLarge(est, budget, "exhaustive line scan")
    tasks = _exhaustive_tasks(space)
    if processes > 1:
        with ProcessPoolExecutor(
            max_workers=processes,
            initializer=_worker_init,
            initargs=(space.field.m, space.field.modulus, space.n, pts, True),
        ) as pool:
            counts = _merge_counts(pool.map(_worker_scan, tasks))
    else:
        space.ensure_tables()
        cone = _cone_set(pts, space)
        counts = _merge_counts(_scan_pattern(space, cone, t) for t in tasks)
    counts = {j: counts[j] for j in sorted(counts)}
    total = sum(counts.values())
    if total != space.nlines():
        raise AssertionError(f"scanned {total} lines, expected {space.nlines()}")
    return SpectrumHistogram(counts, "exhaustive", space.nlines(), len(pts))


# -- GF(2)-linear structure ----------------------------------------------------

@dataclass(frozen=True)
class F2Witness:
    """The GF(2)-linear point set behind an affine translation set.

    rows span the difference vectors of the Barlotti-Cofman images; the
    nonzero span vectors are the points of K in PG(2hk-1, 2).
    """

    base: int
    rows: tuple
    rank: int
    span: frozenset
    k_points: tuple


def f2_witness(
    q_points: AffinePointSet, dirs: DirectionSet, maps: CorrespondenceMaps
) -> F2Witness:
    """Check that the GF(2) images differ by an F2-closed vector set.

    Raises NotF2Linear when the difference set is not a subspace or when its
    renormalization does not reproduce the direction set.
    """
    if len(q_points) < 2:
        raise TooFewPoints("need at least 2 affine points")
    images = [maps.bc_affine(p) for p in q_points.ordered]
    base = images[0]
    diffs = {(im ^ base) >> 1 for im in images}
    rows = maps.hinf2.rref(diffs)
    rank = len(rows)
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    if len(span) != len(diffs):
        missing = min(span - diffs)
        raise NotF2Linear(
            f"difference set of size {len(diffs)} spans {len(span)} vectors; "
            f"0x{missing:x} is in the span but not the set"
        )
    k_points = tuple(sorted(span - {0}))
    projected = {maps.hinf_point_of_f2_vector(w) for w in k_points}
    if projected != dirs.points:
        off = min(projected.symmetric_difference(dirs.points))
        raise NotF2Linear(
            f"projection of the rank-{rank} span differs from the "
            f"direction set near 0x{off:x}"
        )
    return F2Witness(base, rows, rank, frozenset(span), k_points)


@dataclass(frozen=True)
class ScatterednessReport:
    scattered: bool
    rank: int
    max_rank: int
    is_maximum: bool
    max_meet: int
    offending_element: int | None
    meet_histogram: dict


def scattered_check(witness: F2Witness, spread_prime: Spread) -> ScatterednessReport:
    """Does every element of the (h-1)-spread meet K in at most one point?"""
    meets: dict = {}
    for p in witness.k_points:
        idx = spread_prime.element_of(p)
        meets[idx] = meets.get(idx, 0) + 1
    max_meet = max(meets.values(), default=0)
    offender = None
    if max_meet > 1:
        offender = min(i for i, c in meets.items() if c == max_meet)
    hist: dict = {0: len(spread_prime) - len(meets)}
    for c in meets.values():
        hist[c] = hist.get(c, 0) + 1
    max_rank = (spread_prime.space.n + 1) // 2
    scattered = max_meet <= 1
    return ScatterednessReport(
        scattered=scattered,
        rank=witness.rank,
        max_rank=max_rank,
        is_maximum=scattered and witness.rank == max_rank,
        max_meet=max_meet,
        offending_element=offender,
        meet_histogram={j: hist[j] for j in sorted(hist)},
    )
