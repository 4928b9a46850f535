"""Equivalence classes of core hyperplanes and the modified completion.

Core hyperplanes dual to the core of one single-label component are
equivalent; every other hyperplane is alone in its class.  Orienting each
class so that core circles read coherently gives a map of the complex onto
the Salvetti complex of the class crossing graph, and the modified completion
is the pull-back of the canonical completion over that Salvetti complex.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .complex import CubeComplex, Subcomplex
from .errors import PreconditionError, ValidationError
from .graphs import SimplicialGraph
from .hyperplanes import (
    DIRECT,
    Hyperplane,
    hyperplane_of_edge,
    hyperplanes,
    interosculates,
    osculation_kind,
    specialness,
)
from .maps import CubicalMap, compose, identity_map
from .completion import CompletionResult, complete_salvetti, pulled_back_completion
from .salvetti import build_salvetti, core_cycles, salvetti_edge


@dataclass(frozen=True)
class HyperplaneClass:
    name: str
    members: tuple[int, ...]
    core: bool
    label: str | None
    self_osculation: str = "none"


@dataclass(frozen=True)
class ClassStructure:
    classes: tuple[HyperplaneClass, ...]
    graph: SimplicialGraph
    class_of: dict
    flip: dict
    core_edges: frozenset
    interosculating: tuple = ()
    hyperplanes: tuple = field(default=(), repr=False)

    def by_name(self, name: str) -> HyperplaneClass:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)

    def edge_sign(self, eid: int) -> int:
        """Direction of an edge relative to its class orientation."""
        h = self._of[eid]
        return self.flip[h.id] * h.orientation[eid]

    @property
    def _of(self) -> dict:
        return hyperplane_of_edge(list(self.hyperplanes))

    @property
    def core_classes(self) -> frozenset:
        return frozenset(c.name for c in self.classes if c.core)


class _UF:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.rel = {x: 1 for x in items}

    def find(self, x):
        sign = 1
        while self.parent[x] != x:
            sign *= self.rel[x]
            x = self.parent[x]
        return x, sign

    def union(self, a, b, rel) -> bool:
        """Impose value(b) = rel * value(a); False on contradiction."""
        ra, sa = self.find(a)
        rb, sb = self.find(b)
        if ra == rb:
            return sa * rel == sb
        if rb < ra:
            ra, rb, sa, sb = rb, ra, sb, sa
        self.parent[rb] = ra
        self.rel[rb] = sa * rel * sb
        return True


def hyperplane_classes(k: CubeComplex) -> ClassStructure:
    if not specialness(k).special:
        raise PreconditionError("hyperplane classes need a special complex")
    cycles = core_cycles(k)
    core = frozenset(abs(s) for _, walk in cycles for s in walk)
    if not core:
        raise PreconditionError("no core edges: every single-label component is a tree")
    hs = hyperplanes(k)
    of = hyperplane_of_edge(hs)
    for h in hs:
        kinds = {e in core for e in h.edges}
        if len(kinds) > 1:
            raise PreconditionError(f"hyperplane {h.id} is dual to both core and non-core edges")
    ids = [h.id for h in hs]
    members = _UF(ids)
    orient = _UF(ids)
    for label, walk in cycles:
        first = walk[0]
        h0 = of[abs(first)]
        d0 = (1 if first > 0 else -1) * h0.orientation[abs(first)]
        for s in walk[1:]:
            h = of[abs(s)]
            d = (1 if s > 0 else -1) * h.orientation[abs(s)]
            members.union(h0.id, h.id, 1)
            # flip(h) * d must equal flip(h0) * d0
            if not orient.union(h0.id, h.id, d0 * d):
                raise PreconditionError(f"core circle of label {label} cannot be oriented coherently")
    flip = {h: orient.find(h)[1] for h in ids}
    groups: dict = defaultdict(list)
    for h in ids:
        groups[members.find(h)[0]].append(h)
    classes = []
    class_of = {}
    by_id = {h.id: h for h in hs}
    for root in sorted(groups, key=lambda r: min(groups[r])):
        mem = tuple(sorted(groups[root]))
        name = f"h{mem[0]}"
        is_core = next(iter(by_id[mem[0]].edges)) in core
        labels = {by_id[m].label for m in mem}
        edges = frozenset().union(*(by_id[m].edges for m in mem))
        kind, _ = osculation_kind(k, edges, _class_outgoing(by_id, of, flip))
        classes.append(HyperplaneClass(name, mem, is_core, labels.pop() if len(labels) == 1 else None, kind))
        for m in mem:
            class_of[m] = name
    crossing = set()
    for sq in k.squares:
        a, b = class_of[of[abs(sq[0])].id], class_of[of[abs(sq[1])].id]
        if a != b:
            crossing.add(tuple(sorted((a, b))))
    graph = SimplicialGraph.build([c.name for c in classes], crossing)
    inter = []
    for c1 in classes:
        for c2 in classes:
            if c1.name < c2.name:
                e1 = frozenset().union(*(by_id[m].edges for m in c1.members))
                e2 = frozenset().union(*(by_id[m].edges for m in c2.members))
                if interosculates(k, e1, e2):
                    inter.append((c1.name, c2.name))
    return ClassStructure(tuple(classes), graph, class_of, flip, core, tuple(inter), tuple(hs))


def _class_outgoing(by_id: dict[int, Hyperplane], of: dict, flip: dict):
    def outgoing(h):
        eid, end = h
        hp = of[eid]
        sign = flip[hp.id] * hp.orientation[eid]
        return (sign == 1) == (end == 0)

    return outgoing


def class_map(k: CubeComplex, cs: ClassStructure) -> CubicalMap:
    """The map ``K -> S(Gamma_K)`` sending an oriented edge to its class loop."""
    s = build_salvetti(cs.graph)
    of = hyperplane_of_edge(list(cs.hyperplanes))
    emap = {}
    for eid in k.edges:
        h = of[eid]
        sign = cs.flip[h.id] * h.orientation[eid]
        emap[eid] = sign * salvetti_edge(cs.graph, cs.class_of[h.id])
    return CubicalMap(k, s, {v: s.vertices[0] for v in k.vertices}, emap)


def modified_completion(a: CubicalMap, cs: ClassStructure | None = None) -> CompletionResult:
    """Pull back the canonical completion over the Salvetti complex of classes."""
    k = a.codomain
    rep = specialness(k)
    if not rep.directly_special:
        raise PreconditionError("target is not directly special")
    cs = hyperplane_classes(k) if cs is None else cs
    bad = [c.name for c in cs.classes if c.self_osculation == DIRECT]
    if bad or cs.interosculating:
        raise PreconditionError(f"class structure is not special: {bad or list(cs.interosculating)}")
    to_s = class_map(k, cs)
    cas = complete_salvetti(compose(a, to_s))
    core_loops = frozenset(salvetti_edge(cs.graph, name) for name in cs.core_classes)
    cas_core = frozenset(e for e, img in cas.covering.emap.items() if abs(img) in core_loops)
    cas = CompletionResult(
        cas.complex, cas.covering, cas.inclusion, cas.retraction, cas.components, cas.main_component, cas_core
    )
    res = pulled_back_completion(a, to_s, cas, cas_core)
    res.stages["classes"] = cs
    return res


def pair_of_edge(res: CompletionResult, eid: int) -> tuple[int, int]:
    """The pair (edge of K, signed edge of the intermediate completion) behind an edge."""
    return res.covering.emap[eid], res.stages["to_completion"].emap[eid]


@dataclass(frozen=True)
class SelfCompletion:
    completion: CompletionResult
    embedding: CubicalMap
    class_map: dict


def class_injectivity(a: CubicalMap, cs_a: ClassStructure, cs_k: ClassStructure) -> dict:
    """Map classes of ``A`` to classes of ``K``; raise on collisions."""
    of_a = hyperplane_of_edge(list(cs_a.hyperplanes))
    of_k = hyperplane_of_edge(list(cs_k.hyperplanes))
    image: dict = {}
    for eid in a.domain.edges:
        ca = cs_a.class_of[of_a[eid].id]
        ck = cs_k.class_of[of_k[abs(a.emap[eid])].id]
        image.setdefault(ca, set()).add(ck)
    for ca, cks in image.items():
        if len(cks) != 1:
            raise PreconditionError(f"class {ca} meets several classes {sorted(cks)}")
    flat = {ca: next(iter(cks)) for ca, cks in image.items()}
    inverse: dict = defaultdict(list)
    for ca, ck in flat.items():
        inverse[ck].append(ca)
    collisions = {ck: sorted(cas) for ck, cas in inverse.items() if len(cas) > 1}
    if collisions:
        raise PreconditionError(f"classes collide under the inclusion: {collisions}")
    return flat


def modified_self_completion(a: CubicalMap) -> SelfCompletion:
    """Build the modified completion of ``A`` over itself and embed it over ``K``."""
    dom = a.domain
    if not dom.edges:
        return _trivial_self_completion(a)
    cs_k = hyperplane_classes(a.codomain)
    cs_a = hyperplane_classes(dom)
    cmap = class_injectivity(a, cs_a, cs_k)
    own = modified_completion(identity_map(dom), cs_a)
    big = modified_completion(a, cs_k)
    p_small, p_big = own.complex, big.complex
    # edges of the big completion keyed by (K edge, vertex of the intermediate completion at its source)
    key_big = {}
    for eid in p_big.edges:
        kedge = big.covering.emap[eid]
        key_big[(kedge, p_big.edges[eid].src[1])] = (eid, 1)
        key_big[(-kedge, p_big.edges[eid].dst[1])] = (eid, -1)
    vmap = {}
    for v in p_small.vertices:
        x, c = v
        vmap[v] = (a.vmap[x], c)
    emap = {}
    for eid, e in p_small.edges.items():
        alpha = own.covering.emap[eid]
        beta = a.emap[alpha]
        hit = key_big.get((beta, e.src[1]))
        if hit is None:
            raise ValidationError(f"edge {eid} has no counterpart over {beta}")
        emap[eid] = hit[0] * hit[1]
    phi = CubicalMap(p_small, p_big, vmap, emap)
    _validate_embedding(a, own, big, phi)
    return SelfCompletion(own, phi, cmap)


def _trivial_self_completion(a: CubicalMap) -> SelfCompletion:
    """An edgeless ``A`` completes to itself; it sits in the completion over ``K`` via the inclusion."""
    dom = a.domain
    ident = identity_map(dom)
    own = CompletionResult(dom, ident, ident, ident, tuple(dom.components()), None)
    big = modified_completion(a)
    phi = CubicalMap(dom, big.complex, dict(big.inclusion.vmap), {})
    _validate_embedding(a, own, big, phi)
    return SelfCompletion(own, phi, {})


def _validate_embedding(a: CubicalMap, own: CompletionResult, big: CompletionResult, phi: CubicalMap) -> None:
    # injective onto the preimage of A
    if len(set(phi.vmap.values())) != len(phi.vmap):
        raise ValidationError("embedding is not injective on vertices")
    if len({abs(x) for x in phi.emap.values()}) != len(phi.emap):
        raise ValidationError("embedding is not injective on edges")
    image_a_edges = {abs(a.emap[e]) for e in a.domain.edges}
    image_a_verts = {a.vmap[v] for v in a.domain.vertices}
    pre_v = {v for v in big.complex.vertices if big.covering.vmap[v] in image_a_verts}
    pre_e = {e for e, img in big.covering.emap.items() if abs(img) in image_a_edges}
    if set(phi.vmap.values()) != pre_v or {abs(x) for x in phi.emap.values()} != pre_e:
        raise ValidationError("embedding is not onto the preimage of A")
    # the square over K commutes
    for v in own.complex.vertices:
        if big.covering.vmap[phi.vmap[v]] != a.vmap[own.covering.vmap[v]]:
            raise ValidationError(f"covering square fails at vertex {v!r}")
    for eid in own.complex.edges:
        lhs = big.covering.image(phi.emap[eid])
        rhs = a.image(own.covering.emap[eid])
        if lhs != rhs:
            raise ValidationError(f"covering square fails at edge {eid}")
    # the retraction triangle commutes
    for v in own.complex.vertices:
        if big.retraction.vmap[phi.vmap[v]] != own.retraction.vmap[v]:
            raise ValidationError(f"retraction triangle fails at vertex {v!r}")
    for eid in own.complex.edges:
        if big.retraction.image(phi.emap[eid]) != own.retraction.emap[eid]:
            raise ValidationError(f"retraction triangle fails at edge {eid}")


def core_circles_of(res: CompletionResult) -> list[Subcomplex]:
    """Single-label components of the core edges of a completion that contain an edge."""
    k = res.complex
    by_label: dict = defaultdict(list)
    for e in res.core_edges:
        by_label[k.edges[e].label].append(e)
    out = []
    for label in sorted(by_label, key=str):
        out.extend(c for c in k.components(by_label[label]) if c.edges)
    return out


def core_length_violations(res: CompletionResult) -> list[Subcomplex]:
    """Core circles whose length differs from the length of their image circle."""
    bad = []
    for c in core_circles_of(res):
        image = res.covering.image_cells(c)
        if len(image.vertices) != len(c.vertices):
            bad.append(c)
    return bad


def retraction_fixed_violations(res: CompletionResult) -> list[int]:
    """Core edges whose retraction image is an edge other than the edge itself.

    An edge of the modified completion is a pair (edge of K, edge ``b`` of the
    intermediate completion); it is fixed when the retraction sends it to ``b``,
    which carries the id of the edge of ``A`` it copies.
    """
    over = res.stages["to_completion"]
    bad = []
    for e in sorted(res.core_edges):
        img = res.retraction.emap[e]
        if isinstance(img, int) and img != 0 and img != over.emap[e]:
            bad.append(e)
    return bad


def circle_isomorphism_violations(res: CompletionResult) -> list[Subcomplex]:
    """Core circles that the retraction neither collapses nor maps isomorphically."""
    r = res.retraction
    bad = []
    for c in core_circles_of(res):
        imgs = [r.emap[e] for e in c.edges]
        if all(img == 0 for img in imgs) and len({r.vmap[v] for v in c.vertices}) == 1:
            continue
        single = all(isinstance(img, int) and img != 0 for img in imgs)
        if (
            not single
            or len({abs(img) for img in imgs}) != len(imgs)
            or len({r.vmap[v] for v in c.vertices}) != len(c.vertices)
        ):
            bad.append(c)
    return bad


def core_edge_violations(res: CompletionResult, a: CubicalMap) -> list[int]:
    """Edges retracting onto a core edge of ``A`` without being core edges themselves.

    An edge of ``A`` counts as core when its image in ``K`` is a core edge.
    """
    cs = res.stages["classes"]
    core_a = {eid for eid in a.domain.edges if abs(a.emap[eid]) in cs.core_edges}
    bad = []
    for e, img in sorted(res.retraction.emap.items()):
        if isinstance(img, int) and abs(img) in core_a and e not in res.core_edges:
            bad.append(e)
    return bad
