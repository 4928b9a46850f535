"""Command-line front end.

Exit status: 0 when every check passes, 1 when a property check fails, 2 on
unreadable or malformed input (including exceeded size bounds).
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from typing import Sequence

from . import __version__
from .complex import CubeComplex, vkey
from .errors import BoundExceeded, InputError, RaagCubeError
from .io import (
    complex_from_json,
    complex_to_json,
    cover_from_json,
    graph_from_json,
    map_from_json,
    read_json,
    subcomplex_from_json,
    subcomplex_to_json,
    write_json,
)
from .maps import CubicalMap

log = logging.getLogger("raagcube")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2

# Stable identifiers printed next to every check; README documents them.
CHECKS = {
    "G-C4": "induced 4-cycle search",
    "G-RIGID": "star-rigidity",
    "G-TYPE": "type I / type II vertex classification",
    "K-NPC": "link condition",
    "K-SPECIAL": "hyperplane specialness",
    "C-COVER": "completion covers the target",
    "C-RETRACT": "retraction restricts to the identity on the domain",
    "C-CORE": "modified completion keeps core circle lengths",
    "W-PROJ": "wall projection",
    "W-INJ": "wall-injectivity",
    "H-HOLO": "holonomy splitting",
    "V-COVER": "covering validation and monodromy",
    "V-REG": "regularization",
    "A-CALC": "parity, involution and squaring identities",
    "A-DOUBLE": "doubling parity chain",
    "A-CERT": "non-commutation certificate",
    "A-VH": "vertical/horizontal link structure",
}


class Report:
    """Collects check lines and a structured payload."""

    def __init__(self, fmt: str) -> None:
        self.fmt = fmt
        self.lines: list[str] = []
        self.data: dict = {"checks": []}
        self.failed = False

    def check(self, cid: str, ok: bool, detail: str = "") -> None:
        if cid not in CHECKS:
            raise KeyError(cid)
        self.failed |= not ok
        self.data["checks"].append({"id": cid, "ok": ok, "detail": detail})
        self.lines.append(f"[{cid}] {'PASS' if ok else 'FAIL'} {CHECKS[cid]}" + (f": {detail}" if detail else ""))

    def note(self, key: str, value, text: str | None = None) -> None:
        self.data[key] = value
        self.lines.append(text if text is not None else f"{key}: {value}")

    def emit(self, out) -> int:
        if self.fmt == "json":
            out.write(json.dumps(self.data, indent=2, default=str) + "\n")
        else:
            for line in self.lines:
                out.write(line + "\n")
        return EXIT_VIOLATION if self.failed else EXIT_OK


# -- helpers ------------------------------------------------------------------

def _load_complex(path: str) -> CubeComplex:
    return complex_from_json(read_json(path))


def _infer_map(domain: CubeComplex, target: CubeComplex, map_path: str | None) -> CubicalMap:
    """Read a map file, or guess an inclusion by shared names, or a label map to a one-vertex target."""
    if map_path:
        return map_from_json(read_json(map_path), domain, target)
    tv = set(target.vertices)
    if set(domain.vertices) <= tv and all(
        e.id in target.edges and (target.edges[e.id].src, target.edges[e.id].dst) == (e.src, e.dst)
        for e in domain.edges.values()
    ):
        return CubicalMap(domain, target, {v: v for v in domain.vertices}, {e: e for e in domain.edges})
    if len(target.vertices) == 1:
        by_label = {}
        for e in target.edges.values():
            if e.label in by_label:
                raise InputError("target labels are not unique; pass --map")
            by_label[e.label] = e.id
        emap = {}
        for e in domain.edges.values():
            if e.label not in by_label:
                raise InputError(f"edge {e.id} label {e.label!r} has no loop in the target; pass --map")
            emap[e.id] = by_label[e.label]
        return CubicalMap(domain, target, {v: target.vertices[0] for v in domain.vertices}, emap)
    raise InputError("cannot infer the map from the domain to the target; pass --map")


# -- subcommands ----------------------------------------------------------------

def cmd_graph_check(args, rep: Report) -> None:
    from .graphs import classify_vertices, find_induced_cycle, is_star_rigid

    g = graph_from_json(read_json(args.file))
    rep.note("vertices", len(g))
    cyc = find_induced_cycle(g)
    rep.check("G-C4", cyc is None, f"induced 4-cycle {list(cyc)}" if cyc else "no induced 4-cycle")
    rep.data["induced_4_cycle"] = list(cyc) if cyc else None
    rigid = is_star_rigid(g)
    rep.check("G-RIGID", bool(rigid), "star-rigid" if rigid else f"not star-rigid (star of {rigid.vertex} fixed)")
    rep.data["star_rigid"] = bool(rigid)
    typing = classify_vertices(g)
    rep.data["types"] = typing.types
    rep.check("G-TYPE", True, ", ".join(f"{v}:{t}" for v, t in sorted(typing.types.items())))


def cmd_salvetti_build(args, rep: Report) -> None:
    from .salvetti import build_salvetti

    k = build_salvetti(graph_from_json(read_json(args.graphfile)))
    rep.note("f_vector", k.cube_counts())
    _write_complex(args, rep, k)


def _write_complex(args, rep: Report, k: CubeComplex) -> None:
    data = complex_to_json(k)
    if getattr(args, "out", None):
        write_json(data, args.out)
        rep.note("written", args.out)
    else:
        rep.data["complex"] = data
        if rep.fmt != "json":
            rep.lines.append(write_json(data))


def cmd_complex_special(args, rep: Report) -> None:
    from .hyperplanes import specialness, validate_npc

    k = _load_complex(args.file)
    rep.note("f_vector", k.cube_counts())
    npc = validate_npc(k)
    rep.check("K-NPC", npc.ok, npc.reason or "links are flag")
    s = specialness(k)
    bad = [f for f in s.hyperplanes if not f.two_sided or not f.embedded or f.self_osculation == "direct"]
    detail = "directly special" if s.directly_special else ("special" if s.special else "not special")
    if bad:
        detail += f"; offending hyperplanes {[f.id for f in bad]}"
    if s.interosculating:
        detail += f"; interosculating pairs {list(s.interosculating)}"
    rep.check("K-SPECIAL", s.special, detail)
    rep.data["hyperplanes"] = [
        {"id": f.id, "label": f.label, "two_sided": f.two_sided, "embedded": f.embedded,
         "self_osculation": f.self_osculation}
        for f in s.hyperplanes
    ]
    rep.data["directly_special"] = s.directly_special


def cmd_complete(args, rep: Report) -> None:
    from .completion import canonical_completion, retraction_inclusion_is_identity
    from .maps import classify_map
    from .modified import core_circles_of, core_length_violations, modified_completion

    dom = _load_complex(args.domain)
    target = _load_complex(args.target)
    a = _infer_map(dom, target, args.map)
    res = canonical_completion(a) if args.kind == "canonical" else modified_completion(a)
    lengths = res.component_lengths()
    rep.note("components", lengths, f"component vertex counts: {lengths}")
    cls = classify_map(res.covering)
    rep.check("C-COVER", cls.covering, f"degree {cls.degree}" if cls.covering else cls.reason)
    rep.check("C-RETRACT", retraction_inclusion_is_identity(res))
    if args.kind == "modified":
        circles = sorted(len(c.vertices) for c in core_circles_of(res))
        rep.note("core_circles", circles, f"core circle lengths: {circles}")
        bad = core_length_violations(res)
        rep.check("C-CORE", not bad, f"{len(bad)} circles change length" if bad else "")
    if args.out:
        write_json(complex_to_json(res.complex), args.out)
        rep.note("written", args.out)


def cmd_wallproj(args, rep: Report) -> None:
    from .completion import is_wall_injective, wall_projection

    k = _load_complex(args.ambient)
    a = subcomplex_from_json(read_json(args.from_), k)
    b = subcomplex_from_json(read_json(args.to), k)
    w = wall_projection(k, a, b)
    rep.check("W-PROJ", True, f"{len(w.vertices)} vertices, {len(w.edges)} edges, {len(w.squares)} squares")
    rep.data["projection"] = subcomplex_to_json(w)
    if rep.fmt != "json":
        rep.lines.append(write_json(subcomplex_to_json(w)))
    rep.check("W-INJ", is_wall_injective(k, a), "source subcomplex")


def cmd_holonomy(args, rep: Report) -> None:
    from .salvetti import v_holonomy

    k = _load_complex(args.complex)
    verdicts = v_holonomy(k, args.label)
    rows = []
    for v in verdicts:
        first = min(v.component.vertices, key=vkey)
        rows.append({"at": first, "cells": len(v.component), "trivial": v.trivial})
        rep.check("H-HOLO", v.trivial, f"St({args.label})-component at {first!r} ({len(v.component)} cells)")
    rep.data["components"] = rows
    if not verdicts:
        rep.note("components", [], f"no edges labeled {args.label!r}")


def cmd_cover(args, rep: Report) -> None:
    from .covers import describe_cover, is_regular, regularize
    from .maps import classify_map, elevations

    f = cover_from_json(read_json(args.cover))
    if args.action == "regularize":
        cov = describe_cover(f)
        rep.check("V-COVER", True, f"degree {cov.degree}, regular: {is_regular(cov)}")
        reg = regularize(cov)
        factor = classify_map(reg.factor)
        ok = factor.covering and is_regular(reg.cover)
        rep.check("V-REG", ok, f"degree {reg.cover.degree}, group order {len(reg.group)}, factor degree {factor.degree}")
        rep.data["regular_degree"] = reg.cover.degree
        return
    if not args.domain:
        raise InputError("cover elevations needs --domain")
    dom = _load_complex(args.domain)
    a = _infer_map(dom, f.codomain, args.map)
    els = elevations(a, f)
    degrees = sorted(e.degree for e in els)
    rep.check("V-COVER", all(classify_map(e.to_a).covering for e in els), f"elevation degrees {degrees}")
    rep.data["elevation_degrees"] = degrees


def cmd_appendix(args, rep: Report) -> None:
    from .appendix import build_Z_complex, certify_noncommuting, check_calculation, search_instance, verify_double
    from .hyperplanes import check_vh_links

    inst = search_instance()
    rep.note("Y", [list(e) for e in inst.Y.edges])
    rep.note("sigma", str(inst.sigma), f"sigma = {inst.sigma} ({inst.convention})")
    rep.note("f2", {k: list(v) for k, v in inst.f2.emap.items()})
    if args.action == "search":
        calc = check_calculation(inst, args.length)
        rep.check("A-CALC", calc.ok, f"{calc.loops} loops, {calc.paths} paths up to length {args.length}")
        rep.check("A-DOUBLE", verify_double(inst, inst.sigma).ok, f"w = {inst.sigma}")
        z = build_Z_complex(inst)
        rep.check("A-VH", check_vh_links(z.complex, z.partition), f"f-vector {z.complex.cube_counts()}")
        return
    try:
        cert = certify_noncommuting(inst, args.m, args.n)
    except BoundExceeded as exc:
        cert = exc.certificate  # type: ignore[attr-defined]
        rep.note("capped", True, str(exc))
    entries = [
        {"m": e.m, "n": e.n, "m_used": e.m_used, "k": e.k, "l": e.l, "depth": e.depth,
         "length": e.length, "depth_reached": e.depth_reached, "final_parity": list(e.final_parity),
         "certified": e.certified}
        for e in cert.entries
    ]
    for e in cert.entries:
        rep.check("A-CERT", e.certified, f"m={e.m} n={e.n}: depth {e.depth_reached}/{e.depth}, parity {e.final_parity}")
    if args.out:
        write_json({"sigma": str(cert.sigma), "length_cap": cert.length_cap, "entries": entries}, args.out)
        rep.note("written", args.out)
    rep.data["entries"] = entries


def cmd_generate(args, rep: Report) -> None:
    from .generators import random_branched_complex

    seed = args.seed if args.gen_seed is None else args.gen_seed
    rep.note("seed", seed)
    k = random_branched_complex(random.Random(seed))
    rep.note("f_vector", k.cube_counts())
    _write_complex(args, rep, k)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="raagcube", description="Cube complexes, RAAG Salvetti complexes and completions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--format", choices=("text", "json"), default="text", help="report format")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized generation")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="graph predicates").add_subparsers(dest="action", required=True)
    gc = g.add_parser("check", help="induced 4-cycle, star-rigidity, vertex types")
    gc.add_argument("file")
    gc.set_defaults(func=cmd_graph_check)

    s = sub.add_parser("salvetti", help="Salvetti complexes").add_subparsers(dest="action", required=True)
    sb = s.add_parser("build")
    sb.add_argument("graphfile")
    sb.add_argument("--out")
    sb.set_defaults(func=cmd_salvetti_build)

    c = sub.add_parser("complex", help="cube complex checks").add_subparsers(dest="action", required=True)
    cs = c.add_parser("special")
    cs.add_argument("file")
    cs.set_defaults(func=cmd_complex_special)

    cp = sub.add_parser("complete", help="canonical or modified completion")
    cp.add_argument("kind", choices=("canonical", "modified"))
    cp.add_argument("--domain", required=True)
    cp.add_argument("--target", required=True)
    cp.add_argument("--map", help="map file; inferred when omitted")
    cp.add_argument("--out", help="write the completion complex here")
    cp.set_defaults(func=cmd_complete)

    w = sub.add_parser("wallproj", help="wall projection between subcomplexes")
    w.add_argument("--ambient", required=True)
    w.add_argument("--from", dest="from_", required=True, help="subcomplex file A")
    w.add_argument("--to", required=True, help="subcomplex file B")
    w.set_defaults(func=cmd_wallproj)

    h = sub.add_parser("holonomy", help="v-holonomy of a special complex")
    h.add_argument("--complex", required=True)
    h.add_argument("--label", required=True)
    h.set_defaults(func=cmd_holonomy)

    cv = sub.add_parser("cover", help="covering-space operations")
    cv.add_argument("action", choices=("elevations", "regularize"))
    cv.add_argument("--cover", required=True, help="cover file (base complex and permutations)")
    cv.add_argument("--domain", help="complex mapping to the base (elevations)")
    cv.add_argument("--map", help="map from the domain to the base")
    cv.set_defaults(func=cmd_cover)

    ap = sub.add_parser("appendix", help="irreducibility certificate")
    ap.add_argument("action", choices=("search", "certify"))
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--length", type=int, default=10, help="exhaustive loop length for search")
    ap.add_argument("--out", help="certificate file")
    ap.set_defaults(func=cmd_appendix)

    gen = sub.add_parser("generate", help="random directly special branched complex (uses --seed)")
    gen.add_argument("--out")
    gen.add_argument("--seed", dest="gen_seed", type=int, help="overrides the global --seed")
    gen.set_defaults(func=cmd_generate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    rep = Report(args.format)
    try:
        args.func(args, rep)
    except BoundExceeded as exc:
        print(f"error: bound exceeded: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RaagCubeError as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    return rep.emit(sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
