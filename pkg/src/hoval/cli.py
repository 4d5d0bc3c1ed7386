"""Command line front end.

Every subcommand prints one JSON document to stdout (or writes it with
--out) and signals through the exit code:

    0  checks passed
    1  a property check failed, or construction was refused
    2  usage error or unreadable input file
    3  an enumeration exceeded the budget

Set HOVAL_PARALLEL to change the default worker count of --parallel.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import serialize
from .bruckbose import build_plane, hyperoval_in_plane, plane_axioms_check
from .cplanes import build_c_planes, check_axioms
from .errors import EnumerationTooLarge, HovalError, ParseError
from .gf2 import tower_create
from .hyperoval import DirectionSet, HyperovalSpec, build_hyperoval, directions
from .linearsets import spectrum, spectrum_conforms
from .pipeline import run_verify_all
from .projective import DEFAULT_BUDGET
from .pseudoregulus import detect_pseudoregulus, find_long_secants
from .reduction import maps_for

_AXIOM_NAMES = ("A1", "A2", "A3", "A4")


def _default_parallel() -> int:
    raw = os.environ.get("HOVAL_PARALLEL", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _budget(args) -> int | None:
    if args.budget is None:
        return DEFAULT_BUDGET
    return None if args.budget <= 0 else args.budget


def _spec(args) -> HyperovalSpec:
    return HyperovalSpec(args.h, args.k, args.i, strict=not args.allow_nonstrict)


def _emit(args, doc: dict) -> None:
    text = serialize.dumps(doc)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="ascii") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _cmd_construct(args) -> int:
    hov = build_hyperoval(_spec(args))
    _emit(args, serialize.hyperoval_dict(hov))
    return 0


def _cmd_directions(args) -> int:
    hov = build_hyperoval(_spec(args))
    d = directions(hov.affine, hov.maps)
    _emit(args, serialize.point_set_dict("directions", d.points, hov.spec, hov.maps))
    return 0


def _dirs_from_file(path: str):
    doc = serialize.load_point_set(path)
    if doc.kind != "directions":
        raise ParseError(f"expected a directions file, got kind {doc.kind!r}")
    p = doc.params
    spec = HyperovalSpec(p["h"], p["k"], p["i"], strict=bool(p.get("strict", True)))
    maps = maps_for(tower_create(spec.h, spec.k))
    hinf = maps.hinf
    limit = 1 << (hinf.width * hinf.field.m)
    for pt in doc.points:
        if not 0 < pt < limit or hinf.normalize(pt) != pt:
            raise ParseError(f"0x{pt:x} is not a normalized point of the space")
    return spec, maps, DirectionSet(doc.points, hinf)


def _cmd_spectrum(args) -> int:
    if args.infile:
        spec, maps, d = _dirs_from_file(args.infile)
    else:
        if None in (args.h, args.k, args.i):
            raise ParseError("need --h, --k and --i when no --in file is given")
        hov = build_hyperoval(_spec(args))
        spec, maps = hov.spec, hov.maps
        d = directions(hov.affine, maps)
    hist = spectrum(d, mode=args.mode, budget=_budget(args), processes=args.parallel)
    conforms, offender = spectrum_conforms(hist, 1 << spec.h)
    doc = serialize.spectrum_dict(hist, spec, maps)
    doc["conforms"] = conforms
    if offender is not None:
        doc["offending_count"] = offender
    _emit(args, doc)
    return 0 if conforms else 1


def _cmd_detect(args) -> int:
    hov = build_hyperoval(_spec(args))
    d = directions(hov.affine, hov.maps)
    rep = detect_pseudoregulus(d, hov.maps, budget=_budget(args))
    ok = rep.spread_result.matches_canonical and rep.one_point_ok
    doc = {
        "schema": serialize.SCHEMA_VERSION,
        "kind": "pseudoregulus_report",
        "params": serialize.params_header(hov.spec, hov.maps),
        "long_secants": rep.structure.count,
        "exponents": sorted(set(rep.fit.exponents)),
        "labeling": rep.fit.labeling,
        "chosen_exponent": rep.fit.exponent,
        "spread_elements": len(rep.spread_result.spread.elements),
        "matches_canonical": rep.spread_result.matches_canonical,
        "one_point": rep.one_point_ok,
        "ok": ok,
    }
    _emit(args, doc)
    return 0 if ok else 1


def _cmd_build_spread(args) -> int:
    hov = build_hyperoval(_spec(args))
    d = directions(hov.affine, hov.maps)
    rep = detect_pseudoregulus(d, hov.maps, budget=_budget(args))
    doc = serialize.spread_dict(rep.spread_result.spread, hov.spec, hov.maps)
    doc["exponent"] = rep.spread_result.exponent
    doc["matches_canonical"] = rep.spread_result.matches_canonical
    _emit(args, doc)
    return 0 if rep.spread_result.matches_canonical else 1


def _cmd_bruck_bose(args) -> int:
    hov = build_hyperoval(_spec(args))
    d = directions(hov.affine, hov.maps)
    rep = detect_pseudoregulus(d, hov.maps, budget=_budget(args))
    res = rep.spread_result
    plane = build_plane(hov.maps, res.spread)
    axioms = plane_axioms_check(
        plane, mode=args.plane_mode, seed=args.seed, budget=_budget(args)
    )
    t0 = res.spread.elements[res.t0_index].rows
    tinf = res.spread.elements[res.tinf_index].rows
    hrep = hyperoval_in_plane(hov.affine, t0, tinf, plane)
    ok = axioms.ok and hrep.ok
    doc = {
        "schema": serialize.SCHEMA_VERSION,
        "kind": "bruck_bose_report",
        "params": serialize.params_header(hov.spec, hov.maps),
        "order": plane.order,
        "points": plane.n_points,
        "lines": plane.n_lines,
        "axioms_mode": axioms.mode,
        "axioms_ok": axioms.ok,
        "pairs_checked": axioms.pairs_checked,
        "hyperoval_ok": hrep.ok,
        "hyperoval_histogram": {
            str(k): v for k, v in sorted(hrep.histogram.items())
        },
        "incidence_equivalents": hrep.incidence_equivalents,
        "ok": ok,
    }
    _emit(args, doc)
    return 0 if ok else 1


def _cmd_bj_axioms(args) -> int:
    names = tuple(s.strip().upper() for s in args.axioms.split(",") if s.strip())
    for name in names:
        if name not in _AXIOM_NAMES:
            raise ParseError(f"unknown axiom {name!r}, pick from {_AXIOM_NAMES}")
    hov = build_hyperoval(_spec(args))
    d = directions(hov.affine, hov.maps)
    structure = find_long_secants(d, budget=_budget(args))
    family = build_c_planes(hov.affine, structure, hov.maps)
    reports = check_axioms(family, hov.affine, hov.maps, axioms=names,
                           budget=_budget(args))
    ok = all(r.ok for r in reports.values())
    doc = {
        "schema": serialize.SCHEMA_VERSION,
        "kind": "cplane_report",
        "params": serialize.params_header(hov.spec, hov.maps),
        "planes": len(family),
        "long_secants": structure.count,
        "axioms": {
            name: {"ok": rep.ok, "checked": rep.checked, "detail": rep.detail}
            for name, rep in sorted(reports.items())
        },
        "ok": ok,
    }
    for name, rep in reports.items():
        if rep.witness is not None:
            doc["axioms"][name]["witness"] = repr(rep.witness)
    _emit(args, doc)
    return 0 if ok else 1


def _cmd_verify_all(args) -> int:
    stages = None
    if args.stages:
        stages = tuple(s.strip() for s in args.stages.split(",") if s.strip())
    rep = run_verify_all(
        args.h,
        args.k,
        args.i,
        strict=not args.allow_nonstrict,
        mode=args.mode,
        budget=_budget(args),
        processes=args.parallel,
        stages=stages,
        plane_mode=args.plane_mode,
        seed=args.seed,
    )
    _emit(args, rep.to_json_dict())
    return 0 if rep.verdict == "pass" else 1


def _add_params(p, required=True):
    p.add_argument("--h", type=int, required=required,
                   help="subfield degree, the plane order is 2^(h*k)")
    p.add_argument("--k", type=int, required=required,
                   help="tower height, ambient space is PG(2k, 2^h)")
    p.add_argument("--i", type=int, required=required,
                   help="Frobenius exponent of the defining map t -> t^(2^i)")
    p.add_argument("--allow-nonstrict", action="store_true",
                   help="accept exponents with gcd(i, hk) > 1")


def _add_common(p):
    p.add_argument("--budget", type=int, default=None,
                   help="enumeration budget (0 removes the limit)")
    p.add_argument("--parallel", type=int, default=_default_parallel(),
                   help="worker processes for line scans")
    p.add_argument("--out", help="write the JSON document to this file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hoval",
        description="translation hyperovals: construction and verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build the point set and print it")
    _add_params(p)
    _add_common(p)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("directions", help="direction set of the affine points")
    _add_params(p)
    _add_common(p)
    p.set_defaults(func=_cmd_directions)

    p = sub.add_parser("spectrum", help="line meet counts of the direction set")
    _add_params(p, required=False)
    _add_common(p)
    p.add_argument("--in", dest="infile",
                   help="read a directions JSON file instead of constructing")
    p.add_argument("--mode", choices=("pairs", "exhaustive"), default="pairs")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("detect-pseudoregulus",
                       help="secants, transversals, exponent fit, spread")
    _add_params(p)
    _add_common(p)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("build-spread", help="print the reconstructed spread")
    _add_params(p)
    _add_common(p)
    p.set_defaults(func=_cmd_build_spread)

    p = sub.add_parser("bruck-bose-verify",
                       help="plane axioms and the hyperoval line scan")
    _add_params(p)
    _add_common(p)
    p.add_argument("--plane-mode", choices=("auto", "exhaustive", "sampled"),
                   default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bruck_bose)

    p = sub.add_parser("bj-axioms", help="C-plane incidence axioms")
    _add_params(p)
    _add_common(p)
    p.add_argument("--axioms", default="A1,A2,A3,A4",
                   help="comma separated subset of A1,A2,A3,A4")
    p.set_defaults(func=_cmd_bj_axioms)

    p = sub.add_parser("verify-all", help="run the full verification pipeline")
    _add_params(p)
    _add_common(p)
    p.add_argument("--mode", choices=("pairs", "exhaustive"), default="pairs")
    p.add_argument("--plane-mode", choices=("auto", "exhaustive", "sampled"),
                   default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stages", help="comma separated stage subset")
    p.set_defaults(func=_cmd_verify_all)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EnumerationTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except HovalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
