"""Cubical maps between cube complexes, fiber products and elevations.

An edge image is a signed codomain edge, ``0`` for a collapsed edge, or a
tuple of signed edges for an edge sent along a path (such maps are cellular
but never cubical).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence, Union

from .complex import ComplexBuilder, CubeComplex, HalfEdge, Subcomplex, Vertex, rotations, start, vkey
from .errors import InputError, ValidationError

EdgeImage = Union[int, tuple]


def signed(s: int, image: EdgeImage) -> EdgeImage:
    """Image of a signed edge given the image of the underlying edge."""
    if isinstance(image, tuple):
        return image if s > 0 else tuple(-x for x in reversed(image))
    return image if s > 0 else -image


def _as_path(img: EdgeImage) -> tuple:
    if isinstance(img, tuple):
        return img
    return () if img == 0 else (img,)


def _from_path(p: Sequence[int]) -> EdgeImage:
    p = tuple(p)
    if not p:
        return 0
    return p[0] if len(p) == 1 else p


@dataclass(frozen=True)
class CubicalMap:
    domain: CubeComplex
    codomain: CubeComplex
    vmap: dict
    emap: dict

    def __post_init__(self) -> None:
        self.check_incidence()

    def check_incidence(self) -> None:
        d, c = self.domain, self.codomain
        cverts = set(c.vertices)
        for v in d.vertices:
            if v not in self.vmap:
                raise InputError(f"vertex {v!r} has no image")
            if self.vmap[v] not in cverts:
                raise InputError(f"vertex {v!r} maps outside the codomain")
        for eid, e in d.edges.items():
            if eid not in self.emap:
                raise InputError(f"edge {eid} has no image")
            img = self.emap[eid]
            a, b = self.vmap[e.src], self.vmap[e.dst]
            p = _as_path(img)
            if not p:
                if a != b:
                    raise InputError(f"collapsed edge {eid} has endpoints with different images")
                continue
            for s in p:
                if abs(s) not in c.edges:
                    raise InputError(f"edge {eid} maps to unknown edge {s}")
            if c.tail(p[0]) != a or c.head(p[-1]) != b:
                raise InputError(f"edge {eid} image does not match its endpoints")
            for x, y in zip(p, p[1:]):
                if c.head(x) != c.tail(y):
                    raise InputError(f"edge {eid} image path is broken")

    def image(self, s: int) -> EdgeImage:
        return signed(s, self.emap[abs(s)])

    def half_edge_image(self, h: HalfEdge) -> HalfEdge | None:
        img = self.emap[h[0]]
        if isinstance(img, tuple) or img == 0:
            return None
        s = img if h[1] == 0 else -img
        return start(s)

    def image_cells(self, sub: Subcomplex) -> Subcomplex:
        """Cells of the codomain hit by the cells of ``sub``."""
        vs = {self.vmap[v] for v in sub.vertices}
        es = set()
        for e in sub.edges:
            es.update(abs(s) for s in _as_path(self.emap[e]))
        sq_lookup = square_lookup(self.codomain)
        qs = set()
        for q in sub.squares:
            img = tuple(self.image(s) for s in self.domain.squares[q])
            if all(isinstance(x, int) and x != 0 for x in img) and img in sq_lookup:
                qs.add(sq_lookup[img])
        return Subcomplex(frozenset(vs), frozenset(es), frozenset(qs))


def square_lookup(k: CubeComplex) -> dict[tuple, int]:
    out = {}
    for qi, sq in enumerate(k.squares):
        for r in rotations(sq):
            out.setdefault(r, qi)
    return out


def same_complex(a: CubeComplex, b: CubeComplex) -> bool:
    return a is b or (a.vertices == b.vertices and a.edges == b.edges and a.squares == b.squares)


def identity_map(k: CubeComplex) -> CubicalMap:
    return CubicalMap(k, k, {v: v for v in k.vertices}, {e: e for e in k.edges})


def compose(f: CubicalMap, g: CubicalMap) -> CubicalMap:
    """The composite ``g o f``."""
    if not same_complex(f.codomain, g.domain):
        raise InputError("maps are not composable")
    emap = {}
    for eid, img in f.emap.items():
        out: list[int] = []
        for s in _as_path(img):
            out.extend(_as_path(g.image(s)))
        emap[eid] = _from_path(out)
    return CubicalMap(f.domain, g.codomain, {v: g.vmap[w] for v, w in f.vmap.items()}, emap)


@dataclass(frozen=True)
class MapClass:
    cubical: bool
    local_isometry: bool
    covering: bool
    degree: int | None
    reason: str = ""


def fibers(f: CubicalMap) -> dict:
    out: dict = {v: [] for v in f.codomain.vertices}
    for v in f.domain.vertices:
        out[f.vmap[v]].append(v)
    return out


def _cubical_reason(f: CubicalMap) -> str:
    for eid, img in f.emap.items():
        if isinstance(img, tuple):
            return f"edge {eid} is sent to a path"
    lookup = square_lookup(f.codomain)
    for qi, sq in enumerate(f.domain.squares):
        img = [f.image(s) for s in sq]
        zeros = [x == 0 for x in img]
        if all(zeros):
            continue
        if not any(zeros):
            if tuple(img) not in lookup:
                return f"square {qi} is not sent to a square"
            continue
        if zeros in ([True, False, True, False], [False, True, False, True]):
            i = zeros.index(False)
            if img[i] == -img[i + 2]:
                continue
        return f"square {qi} does not factor through a face projection"
    return ""


def classify_map(f: CubicalMap) -> MapClass:
    """Cubical, local-isometry and covering verdicts for ``f``."""
    reason = _cubical_reason(f)
    if reason:
        return MapClass(False, False, False, None, reason)
    d, c = f.domain, f.codomain
    cover = True
    for eid, img in f.emap.items():
        if img == 0:
            return MapClass(True, False, False, None, f"edge {eid} is collapsed")
    for v in d.vertices:
        hs = d.half_edges[v]
        imgs = [f.half_edge_image(h) for h in hs]
        if len(set(imgs)) != len(imgs):
            return MapClass(True, False, False, None, f"link of {v!r} is folded")
        back = dict(zip(imgs, hs))
        target = c.half_edges[f.vmap[v]]
        for a, b, _, _ in c.corners[f.vmap[v]]:
            if a in back and b in back and not d.joined(back[a], back[b]):
                return MapClass(True, False, False, None, f"missing square corner at {v!r}")
        if Counter(imgs) != Counter(target):
            cover = False
    if not cover:
        return MapClass(True, True, False, None, "link map is not onto")
    degree = None
    fib = fibers(f)
    sizes = set()
    for comp in c.components():
        first = min(comp.vertices, key=vkey)
        sizes.add(len(fib[first]))
    if len(sizes) == 1:
        degree = sizes.pop()
    return MapClass(True, True, True, degree)


def lift_table(g: CubicalMap) -> dict[tuple[Vertex, int], int]:
    """``(b, s) -> t``: the lift of the codomain signed edge ``s`` starting at ``b``."""
    table = {}
    for eid, e in g.domain.edges.items():
        img = g.emap[eid]
        if not isinstance(img, int) or img == 0:
            continue
        table[(e.src, img)] = eid
        table[(e.dst, -img)] = -eid
    return table


@dataclass(frozen=True)
class FiberProduct:
    complex: CubeComplex
    to_a: CubicalMap
    to_b: CubicalMap
    edge_key: dict = field(repr=False)


def fiber_product(f: CubicalMap, g: CubicalMap) -> FiberProduct:
    """Pull back the covering ``g: B -> C`` along ``f: A -> C``.

    Vertices are pairs ``(a, b)`` with equal images.  The edge over the edge
    ``alpha`` of ``A`` starting at ``(src alpha, b)`` is keyed ``(alpha, b)``.
    """
    if not same_complex(f.codomain, g.codomain):
        raise InputError("maps have different codomains")
    a_cx, b_cx = f.domain, g.domain
    table = lift_table(g)
    over = fibers(g)
    builder = ComplexBuilder()
    for a in a_cx.vertices:
        for b in over[f.vmap[a]]:
            builder.vertex((a, b))
    fwd: dict[int, dict] = {}
    back: dict[int, dict] = {}
    to_b_edges = {}
    to_a_edges = {}
    for eid, e in a_cx.edges.items():
        path = _as_path(f.emap[eid])
        fwd[eid], back[eid] = {}, {}
        for b in over[f.vmap[e.src]]:
            cur = b
            lifted = []
            for s in path:
                t = table.get((cur, s))
                if t is None:
                    raise ValidationError(f"edge {s} does not lift at {cur!r}; the second map is not a covering")
                lifted.append(t)
                cur = b_cx.head(t)
            new = builder.edge((e.src, b), (e.dst, cur), e.label, key=(eid, b))
            fwd[eid][b] = cur
            back[eid][cur] = b
            to_a_edges[new] = eid
            to_b_edges[new] = _from_path(lifted)
    for sq in a_cx.squares:
        for b in over[f.vmap[a_cx.tail(sq[0])]]:
            cur = b
            sides = []
            for s in sq:
                if s > 0:
                    sides.append(builder.edge_ids[(s, cur)])
                    cur = fwd[s][cur]
                else:
                    prev = back[-s][cur]
                    sides.append(-builder.edge_ids[(-s, prev)])
                    cur = prev
            if cur != b:
                raise ValidationError("a square of the domain does not lift to a closed square")
            builder.square(sides)
    p = builder.build(max_dim=a_cx.max_dim)
    to_a = CubicalMap(p, a_cx, {v: v[0] for v in p.vertices}, to_a_edges)
    to_b = CubicalMap(p, b_cx, {v: v[1] for v in p.vertices}, to_b_edges)
    return FiberProduct(p, to_a, to_b, dict(builder.edge_ids))


def restrict_map(f: CubicalMap, sub: Subcomplex) -> CubicalMap:
    """Restriction of ``f`` to a subcomplex of its domain."""
    dom = f.domain.restrict(sub)
    return CubicalMap(
        dom,
        f.codomain,
        {v: f.vmap[v] for v in dom.vertices},
        {e: f.emap[e] for e in dom.edges},
    )


@dataclass(frozen=True)
class Elevation:
    complex: CubeComplex
    to_a: CubicalMap
    to_cover: CubicalMap
    degree: int | None


def elevations(a: CubicalMap, cover_map: CubicalMap) -> list[Elevation]:
    """Connected components of the pull-back of ``cover_map`` along ``a``."""
    fp = fiber_product(a, cover_map)
    out = []
    for comp in fp.complex.components():
        ta = restrict_map(fp.to_a, comp)
        tc = restrict_map(fp.to_b, comp)
        out.append(Elevation(ta.domain, ta, tc, classify_map(ta).degree))
    return out


def based_elevation(a: CubicalMap, cover_map: CubicalMap, base: Vertex, lift: Vertex) -> Elevation:
    if base not in a.domain.vertices:
        raise InputError(f"base point {base!r} is not in the domain")
    if cover_map.vmap.get(lift) != a.vmap[base]:
        raise InputError(f"{lift!r} does not lie over the image of the base point")
    for el in elevations(a, cover_map):
        if (base, lift) in el.complex.vertices:
            return el
    raise ValidationError("based elevation not found")
