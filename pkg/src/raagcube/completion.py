"""Canonical completions and retractions, wall projections, wall-injectivity.

For a one-vertex target (a circle, a wedge of circles, or a Salvetti
complex) each loop ``l`` of the target induces a partial permutation of the
vertices of ``A``.  Completing every maximal chain of that partial
permutation to a cycle by one extra edge gives a covering of the 1-skeleton;
the squares of the target are then lifted at every vertex.  A general special
target is handled by pulling back the completion over the Salvetti complex of
its crossing graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complex import CubeComplex, Edge, Subcomplex
from .errors import PreconditionError, ValidationError
from .hyperplanes import hyperplane_of_edge, hyperplanes, intersection_graph, specialness
from .maps import CubicalMap, classify_map, compose, fiber_product, identity_map
from .salvetti import build_salvetti, salvetti_edge


@dataclass(frozen=True)
class CompletionResult:
    complex: CubeComplex
    covering: CubicalMap
    inclusion: CubicalMap
    retraction: CubicalMap
    components: tuple[Subcomplex, ...]
    main_component: Subcomplex | None = None
    core_edges: frozenset = frozenset()
    stages: dict = field(default_factory=dict, repr=False)

    def component_lengths(self) -> list[int]:
        """Vertex counts of the components, ascending."""
        return sorted(len(c.vertices) for c in self.components)


def _check_one_vertex(x: CubeComplex) -> None:
    if len(x.vertices) != 1:
        raise PreconditionError("target must have a single vertex")


def _chains(a: CubicalMap, loop: int):
    """Successor structure of the partial permutation induced by ``loop``.

    Returns ``succ`` mapping a vertex to ``(next vertex, signed A-edge)``.
    """
    succ: dict = {}
    pred: dict = {}
    dom = a.domain
    for eid, e in dom.edges.items():
        img = a.emap[eid]
        if not isinstance(img, int) or img == 0:
            raise PreconditionError(f"edge {eid} is not sent to a single edge")
        if abs(img) != loop:
            continue
        if img > 0:
            x, y, s = e.src, e.dst, eid
        else:
            x, y, s = e.dst, e.src, -eid
        if x in succ or y in pred:
            raise PreconditionError(f"map is not locally injective at {x!r} along loop {loop}")
        succ[x] = (y, s)
        pred[y] = (x, s)
    return succ, pred


def complete_one_vertex(a: CubicalMap) -> CompletionResult:
    """Canonical completion over a one-vertex target (circle, wedge or Salvetti)."""
    x = a.codomain
    _check_one_vertex(x)
    dom = a.domain
    base = x.vertices[0]
    for eid, img in a.emap.items():
        if not isinstance(img, int) or img == 0:
            raise PreconditionError(f"edge {eid} is not sent to a single edge")
    next_id = max(dom.edges, default=0) + 1
    edges = []
    cover_e = {}
    retract_e = {}
    step: dict = {}  # (vertex, signed loop) -> (signed total edge, vertex)
    for eid, e in dom.edges.items():
        edges.append(Edge(eid, e.src, e.dst, x.edges[abs(a.emap[eid])].label))
        cover_e[eid] = a.emap[eid]
        retract_e[eid] = eid
    for loop in x.edges:
        succ, pred = _chains(a, loop)
        for v, (w, s) in succ.items():
            sign = 1 if s > 0 else -1
            step[(v, loop)] = (sign * abs(s), w)
            step[(w, -loop)] = (-sign * abs(s), v)
        for v in dom.vertices:
            if v in pred:
                continue
            chain = []
            cur = v
            while cur in succ:
                nxt, s = succ[cur]
                chain.append(s)
                cur = nxt
            # chain runs v -> ... -> cur; close it with cur -> v
            eid = next_id
            next_id += 1
            edges.append(Edge(eid, cur, v, x.edges[loop].label))
            cover_e[eid] = loop
            back = tuple(-s for s in reversed(chain))
            retract_e[eid] = 0 if not back else (back[0] if len(back) == 1 else back)
            step[(cur, loop)] = (eid, v)
            step[(v, -loop)] = (-eid, cur)
    squares = []
    for sq in x.squares:
        for v in dom.vertices:
            cur = v
            sides = []
            for s in sq:
                t, cur = step[(cur, s)]
                sides.append(t)
            if cur != v:
                raise ValidationError("a square of the target does not lift; the map is not a local isometry")
            squares.append(tuple(sides))
    total = CubeComplex(dom.vertices, edges, squares, max_dim=max(x.max_dim, dom.max_dim))
    covering = CubicalMap(total, x, {v: base for v in total.vertices}, cover_e)
    verdict = classify_map(covering)
    if not verdict.covering:
        raise ValidationError(f"completion is not a covering: {verdict.reason}")
    inclusion = CubicalMap(dom, total, {v: v for v in dom.vertices}, {e: e for e in dom.edges})
    retraction = CubicalMap(total, dom, {v: v for v in total.vertices}, retract_e)
    comps = tuple(total.components())
    return CompletionResult(total, covering, inclusion, retraction, comps, _main(comps, dom.vertices))


def _main(comps, verts) -> Subcomplex | None:
    if not verts:
        return None
    first = verts[0]
    for c in comps:
        if first in c.vertices:
            return c
    return None


def complete_circle(a: CubicalMap) -> CompletionResult:
    """Case of a one-edge circle: close every path and point into a circle."""
    x = a.codomain
    if len(x.vertices) != 1 or len(x.edges) != 1:
        raise PreconditionError("target must be a circle with one edge")
    return complete_one_vertex(a)


def complete_wedge(a: CubicalMap) -> CompletionResult:
    """Case of a wedge of circles: complete each circle, glue along vertices."""
    x = a.codomain
    if len(x.vertices) != 1 or x.squares:
        raise PreconditionError("target must be a wedge of circles")
    if a.domain.squares:
        raise PreconditionError("domain must be a graph")
    return complete_one_vertex(a)


def complete_salvetti(a: CubicalMap) -> CompletionResult:
    """Case of a Salvetti complex: complete the 1-skeleton, then lift squares."""
    _check_one_vertex(a.codomain)
    return complete_one_vertex(a)


def to_crossing_salvetti(x: CubeComplex) -> CubicalMap:
    """The local isometry of a special complex to the Salvetti complex of its crossing graph."""
    hs = hyperplanes(x)
    g = intersection_graph(x, hs)
    r = build_salvetti(g)
    of = hyperplane_of_edge(hs)
    emap = {}
    for eid in x.edges:
        h = of[eid]
        emap[eid] = h.orientation[eid] * salvetti_edge(g, str(h.id))
    return CubicalMap(x, r, {v: r.vertices[0] for v in x.vertices}, emap)


def pulled_back_completion(
    a: CubicalMap, to_r: CubicalMap, car: CompletionResult, core: frozenset = frozenset()
) -> CompletionResult:
    """Pull ``car`` (a completion of ``A -> R``) back along ``to_r: X -> R``.

    The copy of ``A`` is ``alpha -> (a(alpha), alpha)``; the retraction is the
    retraction of ``car`` after projecting.  Edges lying over an edge of
    ``core`` (edge ids of ``car.complex``) are marked as core edges.
    """
    fp = fiber_product(to_r, car.covering)
    p = fp.complex
    vmap = {v: (a.vmap[v], v) for v in a.domain.vertices}
    emap = {}
    for eid, e in a.domain.edges.items():
        s = a.emap[eid]
        if s > 0:
            emap[eid] = fp.edge_key[(s, e.src)]
        else:
            emap[eid] = -fp.edge_key[(-s, e.dst)]
    inclusion = CubicalMap(a.domain, p, vmap, emap)
    retraction = compose(fp.to_b, car.retraction)
    comps = tuple(p.components())
    main = _main(comps, [vmap[v] for v in a.domain.vertices])
    core_p = frozenset(eid for eid, img in fp.to_b.emap.items() if abs(img) in core)
    return CompletionResult(
        p,
        fp.to_a,
        inclusion,
        retraction,
        comps,
        main,
        core_p,
        {"over_salvetti": car, "to_salvetti": to_r, "to_completion": fp.to_b},
    )


def complete_general(a: CubicalMap) -> CompletionResult:
    """Canonical completion for a local isometry into a compact special complex."""
    x = a.codomain
    if not specialness(x).special:
        raise PreconditionError("target is not special")
    to_r = to_crossing_salvetti(x)
    car = complete_salvetti(compose(a, to_r))
    return pulled_back_completion(a, to_r, car)


def canonical_completion(a: CubicalMap) -> CompletionResult:
    """Dispatch to the one-vertex construction or the general pull-back."""
    if len(a.codomain.vertices) == 1 and _is_salvetti_like(a.codomain):
        return complete_one_vertex(a)
    return complete_general(a)


def _is_salvetti_like(x: CubeComplex) -> bool:
    return all(sq[0] == -sq[2] and sq[1] == -sq[3] for sq in x.squares)


# -- wall projection -------------------------------------------------------------

def wall_projection(x: CubeComplex, a: Subcomplex, b: Subcomplex) -> Subcomplex:
    """``b``'s vertices together with the cubes of ``b`` whose edges are all parallel into ``a``."""
    x.check_subcomplex(a)
    x.check_subcomplex(b)
    of = hyperplane_of_edge(hyperplanes(x))
    walls = {of[e].id for e in a.edges}
    es = frozenset(e for e in b.edges if of[e].id in walls)
    qs = frozenset(q for q in b.squares if all(abs(s) in es for s in x.squares[q]))
    return Subcomplex(b.vertices, es, qs)


def is_wall_injective(x: CubeComplex, a: Subcomplex) -> bool:
    """Distinct hyperplanes of ``a`` lie in distinct hyperplanes of ``x``."""
    x.check_subcomplex(a)
    inner = hyperplanes(x.restrict(a))
    of = hyperplane_of_edge(hyperplanes(x))
    images = [of[min(h.edges)].id for h in inner]
    return len(set(images)) == len(images)


def preimage(f: CubicalMap, sub: Subcomplex) -> Subcomplex:
    """Cells of the domain of ``f`` whose images lie in ``sub`` (for a covering)."""
    vs = frozenset(v for v in f.domain.vertices if f.vmap[v] in sub.vertices)
    es = frozenset(e for e, img in f.emap.items() if isinstance(img, int) and abs(img) in sub.edges)
    qs = frozenset(
        q for q, sq in enumerate(f.domain.squares) if all(abs(s) in es for s in sq)
    )
    return Subcomplex(vs, es, qs)


def retraction_inclusion_is_identity(res: CompletionResult) -> bool:
    comp = compose(res.inclusion, res.retraction)
    ident = identity_map(res.inclusion.domain)
    return comp.vmap == ident.vmap and comp.emap == ident.emap


def wall_projection_violations(res: CompletionResult, x: CubeComplex, a: Subcomplex, d: Subcomplex) -> list[str]:
    """Cells of the preimage of ``d`` whose retraction image leaves ``wpj(d -> a)``.

    ``res`` must complete a map whose domain is ``x.restrict(a)``.  An empty
    list means the containment holds.
    """
    from .maps import square_lookup

    allowed = wall_projection(x, d, a)
    lookup = square_lookup(x)
    hat = preimage(res.covering, d)
    bad = []
    for v in hat.vertices:
        if res.retraction.vmap[v] not in allowed.vertices:
            bad.append(f"vertex {v!r}")
    for e in hat.edges:
        img = res.retraction.emap[e]
        path = img if isinstance(img, tuple) else (() if img == 0 else (img,))
        if any(abs(s) not in allowed.edges for s in path):
            bad.append(f"edge {e}")
    for q in hat.squares:
        img = tuple(res.retraction.image(s) for s in res.complex.squares[q])
        if any(isinstance(s, tuple) for s in img) or 0 in img:
            continue
        if lookup.get(img) not in allowed.squares:
            bad.append(f"square {q}")
    return bad
