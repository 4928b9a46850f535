"""JSON formats for graphs, cube complexes, subcomplexes, maps and covers.

Graph: ``{"vertices": [...], "edges": [[u, v], ...]}``.

Complex: ``{"vertices": [...], "edges": [{"id", "src", "dst", "label"?,
"orient"?}], "squares": [[e1, e2, e3, e4], ...]}``.  A square lists its
boundary as signed edge ids (``-id`` for backwards traversal).  ``orient:
-1`` declares that the edge is stored reversed: its endpoints are swapped on
load and its signs in squares flipped, so files may be written either way.

Vertices are strings, integers, or lists (read back as tuples).

Map: ``{"vertex_map": [[v, w], ...] or {v: w}, "edge_map": {id: image}}``
where an image is a signed edge id, ``0`` for a collapsed edge, or a list of
signed ids for an edge sent along a path.

Cover: ``{"base": <complex>, "degree": d, "permutations": {id: [...]}}``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .complex import CubeComplex, Edge, Subcomplex
from .errors import InputError
from .graphs import SimplicialGraph
from .maps import CubicalMap


def _vertex_in(x: Any):
    if isinstance(x, list):
        return tuple(_vertex_in(y) for y in x)
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise InputError(f"unsupported vertex {x!r}")


def _vertex_out(v: Any):
    if isinstance(v, tuple):
        return [_vertex_out(x) for x in v]
    return v


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def write_json(data: Any, path: str | Path | None = None) -> str:
    text = json.dumps(data, indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text


def _require(data: Any, keys: tuple[str, ...], what: str) -> None:
    if not isinstance(data, dict):
        raise InputError(f"{what} must be a JSON object")
    for k in keys:
        if k not in data:
            raise InputError(f"{what} is missing the field {k!r}")


# -- graphs ----------------------------------------------------------------------

def graph_from_json(data: Any) -> SimplicialGraph:
    _require(data, ("vertices", "edges"), "graph")
    vertices = [str(v) for v in data["vertices"]]
    edges = []
    for e in data["edges"]:
        if not isinstance(e, list) or len(e) != 2:
            raise InputError(f"graph edge {e!r} must be a pair")
        edges.append((str(e[0]), str(e[1])))
    return SimplicialGraph.build(vertices, edges)


def graph_to_json(g: SimplicialGraph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.sorted_edges()]}


# -- complexes -------------------------------------------------------------------

def complex_from_json(data: Any) -> CubeComplex:
    _require(data, ("vertices", "edges"), "complex")
    vertices = [_vertex_in(v) for v in data["vertices"]]
    edges = []
    flips = {}
    for raw in data["edges"]:
        _require(raw, ("id", "src", "dst"), "complex edge")
        orient = raw.get("orient", 1)
        if orient not in (1, -1):
            raise InputError(f"edge {raw['id']}: orient must be 1 or -1")
        src, dst = _vertex_in(raw["src"]), _vertex_in(raw["dst"])
        if orient == -1:
            src, dst = dst, src
        eid = raw["id"]
        if not isinstance(eid, int) or isinstance(eid, bool):
            raise InputError(f"edge id {eid!r} is not an integer")
        flips[eid] = orient
        edges.append(Edge(eid, src, dst, raw.get("label")))
    squares = []
    for sq in data.get("squares", []):
        if not isinstance(sq, list) or not all(isinstance(s, int) for s in sq):
            raise InputError(f"square {sq!r} must be a list of signed edge ids")
        squares.append([s * flips.get(abs(s), 1) for s in sq])
    max_dim = data.get("max_dim", 4)
    return CubeComplex(vertices, edges, squares, max_dim=max_dim)


def complex_to_json(k: CubeComplex) -> dict:
    edges = []
    for e in k.edges.values():
        item = {"id": e.id, "src": _vertex_out(e.src), "dst": _vertex_out(e.dst)}
        if e.label is not None:
            item["label"] = e.label
        item["orient"] = 1
        edges.append(item)
    return {
        "vertices": [_vertex_out(v) for v in k.vertices],
        "edges": edges,
        "squares": [list(sq) for sq in k.squares],
    }


def subcomplex_from_json(data: Any, k: CubeComplex) -> Subcomplex:
    """``{"vertices": [...], "edges": [...]}``; squares default to every square the edges bound."""
    _require(data, ("edges",), "subcomplex")
    vertices = [_vertex_in(v) for v in data.get("vertices", [])]
    for e in data["edges"]:
        if abs(e) not in k.edges:
            raise InputError(f"subcomplex uses unknown edge {e}")
    sub = k.full_subcomplex(vertices, data["edges"])
    if "squares" in data:
        sub = Subcomplex(sub.vertices, sub.edges, frozenset(data["squares"]))
    k.check_subcomplex(sub)
    return sub


def subcomplex_to_json(sub: Subcomplex) -> dict:
    from .complex import vkey

    return {
        "vertices": [_vertex_out(v) for v in sorted(sub.vertices, key=vkey)],
        "edges": sorted(sub.edges),
        "squares": sorted(sub.squares),
    }


# -- maps ------------------------------------------------------------------------

def _image_in(x: Any):
    if isinstance(x, list):
        return tuple(int(s) for s in x)
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    raise InputError(f"unsupported edge image {x!r}")


def map_from_json(data: Any, domain: CubeComplex, codomain: CubeComplex) -> CubicalMap:
    _require(data, ("vertex_map", "edge_map"), "map")
    raw_v = data["vertex_map"]
    if isinstance(raw_v, dict):
        pairs = list(raw_v.items())
    else:
        pairs = [tuple(p) for p in raw_v]
    vmap = {}
    dom_verts = set(domain.vertices)
    for v, w in pairs:
        v = _vertex_in(v)
        if v not in dom_verts and isinstance(v, str) and v.lstrip("-").isdigit():
            v = int(v)
        vmap[v] = _vertex_in(w)
    emap = {int(k): _image_in(x) for k, x in data["edge_map"].items()}
    return CubicalMap(domain, codomain, vmap, emap)


def map_to_json(f: CubicalMap) -> dict:
    return {
        "vertex_map": [[_vertex_out(v), _vertex_out(w)] for v, w in f.vmap.items()],
        "edge_map": {str(e): (list(x) if isinstance(x, tuple) else x) for e, x in f.emap.items()},
    }


# -- covers ------------------------------------------------------------------------

def cover_from_json(data: Any) -> CubicalMap:
    from .covers import cover_from_permutations

    _require(data, ("base", "degree"), "cover")
    base = complex_from_json(data["base"])
    perms = {int(k): list(v) for k, v in data.get("permutations", {}).items()}
    return cover_from_permutations(base, perms, int(data["degree"]))
