"""Hyperplanes, the link condition, and the specialness diagnostics."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .complex import CubeComplex, HalfEdge, Subcomplex, Vertex
from .errors import BoundExceeded, InputError, PreconditionError
from .graphs import SimplicialGraph

NONE = "none"
DIRECT = "direct"
INDIRECT = "indirect"
NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class Hyperplane:
    id: int
    edges: frozenset[int]
    orientation: dict[int, int] = field(compare=False, repr=False)
    two_sided: bool = True
    embedded: bool = True
    label: str | None = None

    def outgoing(self, h: HalfEdge) -> bool:
        """Whether the half-edge points out of its vertex across the hyperplane."""
        eid, end = h
        return (self.orientation.get(eid, 1) == 1) == (end == 0)


class _SignedUnionFind:
    """Union-find on edges tracking the relative orientation to the root."""

    def __init__(self, items: Iterable[int]) -> None:
        self.parent = {x: x for x in items}
        self.rel = {x: 1 for x in items}
        self.conflict: set[int] = set()

    def find(self, x: int) -> tuple[int, int]:
        sign = 1
        path = []
        while self.parent[x] != x:
            path.append(x)
            sign *= self.rel[x]
            x = self.parent[x]
        root = x
        # path compression with recomputed signs
        acc = sign
        for y in path:
            s = self.rel[y]
            self.parent[y] = root
            self.rel[y] = acc
            acc *= s
        return root, sign

    def union(self, a: int, b: int, rel: int) -> None:
        """Impose orientation(b) = rel * orientation(a)."""
        ra, sa = self.find(a)
        rb, sb = self.find(b)
        if ra == rb:
            if sa * rel != sb:
                self.conflict.add(ra)
            return
        if rb < ra:
            ra, rb, sa, sb = rb, ra, sb, sa
        self.parent[rb] = ra
        self.rel[rb] = sa * rel * sb
        if rb in self.conflict:
            self.conflict.discard(rb)
            self.conflict.add(ra)


def hyperplanes(k: CubeComplex) -> list[Hyperplane]:
    """Parallelism classes of edges, ordered by smallest member edge id."""
    uf = _SignedUnionFind(k.edges)
    for sq in k.squares:
        for i in (0, 1):
            a, b = sq[i], sq[i + 2]
            # traversing a and the reverse of b crosses the hyperplane the same way
            uf.union(abs(a), abs(b), -(1 if a > 0 else -1) * (1 if b > 0 else -1))
    groups: dict[int, list[int]] = defaultdict(list)
    signs: dict[int, int] = {}
    for e in k.edges:
        root, sign = uf.find(e)
        groups[root].append(e)
        signs[e] = sign
    conflicted = {uf.find(r)[0] for r in uf.conflict}
    cls_of = {e: root for root, es in groups.items() for e in es}
    bad_embedding = set()
    for sq in k.squares:
        for i in range(4):
            if cls_of[abs(sq[i])] == cls_of[abs(sq[(i + 1) % 4])]:
                bad_embedding.add(cls_of[abs(sq[i])])
    out = []
    for root, es in groups.items():
        labels = {k.edges[e].label for e in es}
        hid = min(es)
        base = signs[hid]
        orient = {e: signs[e] * base for e in es}
        out.append(
            Hyperplane(
                id=hid,
                edges=frozenset(es),
                orientation=orient,
                two_sided=root not in conflicted,
                embedded=root not in bad_embedding,
                label=labels.pop() if len(labels) == 1 else None,
            )
        )
    out.sort(key=lambda h: h.id)
    return out


def hyperplane_of_edge(hs: list[Hyperplane]) -> dict[int, Hyperplane]:
    return {e: h for h in hs for e in h.edges}


def crossing_pairs(k: CubeComplex, hs: list[Hyperplane] | None = None) -> set[tuple[int, int]]:
    """Pairs of hyperplane ids that cross in some square."""
    hs = hyperplanes(k) if hs is None else hs
    of = hyperplane_of_edge(hs)
    out = set()
    for sq in k.squares:
        a, b = of[abs(sq[0])].id, of[abs(sq[1])].id
        if a != b:
            out.add((min(a, b), max(a, b)))
    return out


def intersection_graph(k: CubeComplex, hs: list[Hyperplane] | None = None) -> SimplicialGraph:
    """Graph with one vertex per hyperplane (named by id) and crossing edges."""
    hs = hyperplanes(k) if hs is None else hs
    return SimplicialGraph.build(
        [str(h.id) for h in hs],
        [(str(a), str(b)) for a, b in crossing_pairs(k, hs)],
    )


# -- link condition ----------------------------------------------------------

@dataclass(frozen=True)
class NPCVerdict:
    ok: bool
    vertex: Vertex | None = None
    reason: str = ""
    link: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def validate_npc(k: CubeComplex, max_dim: int | None = None) -> NPCVerdict:
    """Gromov link condition for the flag-filled complex.

    Each link must be a simplicial graph (no corner from a half-edge to
    itself, no two corners on the same pair) and every clique of the link
    must be filled by a cube.
    """
    bound = k.max_dim if max_dim is None else max_dim
    for v in k.vertices:
        hs, corners = k.link_graph(v)
        seen = set()
        for a, b in corners:
            if a == b:
                return NPCVerdict(False, v, f"square corner folds half-edge {a} onto itself", tuple(corners))
            key = frozenset((a, b))
            if key in seen:
                return NPCVerdict(False, v, f"two squares share the corner {sorted(key)}", tuple(corners))
            seen.add(key)
        size = 3
        while True:
            found = False
            for clique in k.link_cliques(v, size):
                found = True
                if size > bound:
                    raise BoundExceeded(f"link clique of size {size} exceeds cube dimension bound {bound}")
                if k.close_cube(v, clique) is None:
                    return NPCVerdict(
                        False, v, f"link clique {list(clique)} is not filled by a cube", tuple(corners)
                    )
            if not found:
                break
            size += 1
    return NPCVerdict(True)


# -- specialness ----------------------------------------------------------------

@dataclass(frozen=True)
class HyperplaneFlags:
    id: int
    label: str | None
    two_sided: bool
    embedded: bool
    self_osculation: str
    witness: Vertex | None = None


@dataclass(frozen=True)
class SpecialnessReport:
    hyperplanes: tuple[HyperplaneFlags, ...]
    interosculating: tuple[tuple[int, int], ...]
    special: bool
    directly_special: bool

    def flags(self, hid: int) -> HyperplaneFlags:
        for f in self.hyperplanes:
            if f.id == hid:
                return f
        raise KeyError(hid)


def osculation_kind(k: CubeComplex, edges: frozenset[int], outgoing) -> tuple[str, Vertex | None]:
    """Self-osculation of a family of edges, given an outgoing-test on half-edges.

    More than one half-edge of the family at a vertex means osculation.  It is
    direct when two of them are both outgoing or both incoming.
    """
    kind, where = NONE, None
    for v in k.vertices:
        hs = [h for h in k.half_edges[v] if h[0] in edges]
        if len(hs) < 2:
            continue
        outs = sum(1 for h in hs if outgoing(h))
        ins = len(hs) - outs
        if outs >= 2 or ins >= 2:
            return DIRECT, v
        if kind == NONE:
            kind, where = INDIRECT, v
    return kind, where


def interosculates(k: CubeComplex, e1: frozenset[int], e2: frozenset[int]) -> bool:
    """Two edge families cross somewhere and also meet without a corner somewhere."""
    crossing = osculating = False
    for v in k.vertices:
        h1 = [h for h in k.half_edges[v] if h[0] in e1]
        h2 = [h for h in k.half_edges[v] if h[0] in e2]
        for a in h1:
            for b in h2:
                if k.joined(a, b):
                    crossing = True
                else:
                    osculating = True
        if crossing and osculating:
            return True
    return False


def specialness(k: CubeComplex) -> SpecialnessReport:
    hs = hyperplanes(k)
    flags = []
    for h in hs:
        if not h.two_sided:
            flags.append(HyperplaneFlags(h.id, h.label, False, h.embedded, NOT_APPLICABLE))
            continue
        kind, where = osculation_kind(k, h.edges, h.outgoing)
        flags.append(HyperplaneFlags(h.id, h.label, True, h.embedded, kind, where))
    inter = []
    # only pairs of hyperplanes that meet at a common vertex can interosculate
    at_vertex: dict = defaultdict(set)
    of = hyperplane_of_edge(hs)
    for v in k.vertices:
        for eid, _ in k.half_edges[v]:
            at_vertex[v].add(of[eid].id)
    candidates = set()
    for ids in at_vertex.values():
        candidates.update(combinations(sorted(ids), 2))
    by_id = {h.id: h for h in hs}
    for a, b in sorted(candidates):
        if interosculates(k, by_id[a].edges, by_id[b].edges):
            inter.append((a, b))
    special = (
        all(f.two_sided and f.embedded and f.self_osculation != DIRECT for f in flags)
        and not inter
    )
    directly = special and all(f.self_osculation == NONE for f in flags)
    return SpecialnessReport(tuple(flags), tuple(inter), special, directly)


def is_special(k: CubeComplex) -> bool:
    return specialness(k).special


def is_directly_special(k: CubeComplex) -> bool:
    return specialness(k).directly_special


# -- labeled subcomplexes --------------------------------------------------------

def label_graph(k: CubeComplex) -> SimplicialGraph:
    """Labels of ``k`` with an edge whenever two labels span a square."""
    pairs = set()
    for sq in k.squares:
        a, b = k.label(sq[0]), k.label(sq[1])
        if a is not None and b is not None and a != b:
            pairs.add((a, b))
    return SimplicialGraph.build(sorted(k.labels), pairs)


def gamma_components(k: CubeComplex, sub: SimplicialGraph, graph: SimplicialGraph | None = None) -> list[Subcomplex]:
    """Maximal connected subcomplexes labeled in ``sub`` realizing all of its labels."""
    if not k.is_labeled and k.edges:
        raise PreconditionError("gamma components need a labeled complex")
    if graph is not None and not graph.is_induced_subgraph(sub):
        raise InputError("sub is not an induced subgraph of the labeling graph")
    wanted = set(sub.vertices)
    edges = [e.id for e in k.edges.values() if e.label in wanted]
    out = []
    for comp in k.components(edges):
        seen = {k.edges[e].label for e in comp.edges}
        if seen == wanted:
            out.append(comp)
    return out


def is_locally_convex(k: CubeComplex, sub: Subcomplex) -> bool:
    """Every square corner at a vertex of ``sub`` spanned by ``sub``-edges lies in ``sub``.

    Under flag filling, higher cubes are determined by their squares, so the
    square-level condition is the full condition.
    """
    k.check_subcomplex(sub)
    for v in sub.vertices:
        for ha, hb, qi, _ in k.corners[v]:
            if ha[0] in sub.edges and hb[0] in sub.edges and qi not in sub.squares:
                return False
    return True


def salvetti_link_signature(g: SimplicialGraph) -> tuple[set, set]:
    """Link of the base vertex of the Salvetti complex in terms of (label, out?)."""
    nodes = {(v, d) for v in g.vertices for d in (True, False)}
    edges = set()
    for u, w in g.sorted_edges():
        for du in (True, False):
            for dw in (True, False):
                edges.add(frozenset({(u, du), (w, dw)}))
    return nodes, edges


def check_locally_salvetti(k: CubeComplex, g: SimplicialGraph) -> bool:
    """Every vertex link maps isomorphically onto the Salvetti base link.

    The comparison map sends a half-edge to its label and direction.
    """
    if not k.is_labeled and k.edges:
        raise PreconditionError("locally Salvetti check needs a labeled complex")
    nodes, edges = salvetti_link_signature(g)
    for v in k.vertices:
        hs, corners = k.link_graph(v)
        imgs = [(k.label(h[0]), h[1] == 0) for h in hs]
        if len(set(imgs)) != len(imgs) or set(imgs) != nodes:
            return False
        cimg = [frozenset({(k.label(a[0]), a[1] == 0), (k.label(b[0]), b[1] == 0)}) for a, b in corners]
        if len(set(cimg)) != len(cimg) or set(cimg) != edges:
            return False
    return True


def vh_partition(k: CubeComplex) -> dict[int, int]:
    """Two-colour edges so that adjacent sides of every square differ.

    Colour 0 is vertical, 1 horizontal.  Edges in no square get colour 0.
    Raises when no such colouring exists.
    """
    colour: dict[int, int] = {}
    adj: dict[int, set] = defaultdict(set)
    for sq in k.squares:
        for i in range(4):
            a, b = abs(sq[i]), abs(sq[(i + 1) % 4])
            adj[a].add(b)
            adj[b].add(a)
    for e in k.edges:
        if e in colour:
            continue
        colour[e] = 0
        stack = [e]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    raise PreconditionError("squares do not admit a vertical/horizontal edge partition")
    return colour


def check_vh_links(k: CubeComplex, partition: dict[int, int] | None = None) -> bool:
    """Every link is the complete bipartite graph between vertical and horizontal half-edges."""
    if k.squares and len(k.cube_counts(3)) > 3:
        raise PreconditionError("VH check applies to square complexes only")
    try:
        colour = vh_partition(k) if partition is None else partition
    except PreconditionError:
        return False
    for v in k.vertices:
        hs, corners = k.link_graph(v)
        vert = [h for h in hs if colour[h[0]] == 0]
        horiz = [h for h in hs if colour[h[0]] == 1]
        if not vert or not horiz:
            return False
        got = []
        for a, b in corners:
            if colour[a[0]] == colour[b[0]]:
                return False
            got.append(frozenset((a, b)))
        if len(set(got)) != len(got):
            return False
        if set(got) != {frozenset((a, b)) for a in vert for b in horiz}:
            return False
    return True
