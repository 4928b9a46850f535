"""Finite oriented, optionally labeled cube complexes.

Only the 2-skeleton is stored.  Higher cubes are implicit: a k-cube exists at
a vertex wherever k half-edges are pairwise joined by square corners and the
squares close up consistently (see :func:`close_cube`).

Conventions used throughout the package:

* Edges carry positive integer ids.  A *signed* edge ``s`` is traversed from
  ``src`` to ``dst`` when ``s > 0`` and backwards when ``s < 0``.
* A square is a 4-tuple of signed edges ``(s0, s1, s2, s3)`` in cyclic order,
  so that ``head(s_i) == tail(s_{i+1})``.  The opposite sides ``s0``/``s2``
  and ``s1``/``s3`` are parallel.
* A half-edge is ``(eid, end)`` with ``end == 0`` at the source and
  ``end == 1`` at the target of the edge.  A loop contributes two half-edges
  at its vertex.
* Corner ``c`` of a square sits at ``tail(s_c)`` and joins the half-edges
  ``start(s_c)`` and ``finish(s_{c-1})``.  The link of a vertex is the graph on
  its half-edges whose edges are these corners.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import BoundExceeded, InputError

Vertex = Hashable
HalfEdge = tuple[int, int]
Square = tuple[int, int, int, int]

DEFAULT_CUBE_DIMENSION = 4


def vkey(v: object) -> tuple:
    """Total order on the vertex identifiers used in this package."""
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vkey(x) for x in v))
    return (3, repr(v))


def start(s: int) -> HalfEdge:
    """Half-edge at the tail of the signed edge ``s``."""
    return (abs(s), 0 if s > 0 else 1)


def finish(s: int) -> HalfEdge:
    """Half-edge at the head of the signed edge ``s``."""
    return (abs(s), 1 if s > 0 else 0)


def rotations(sq: Sequence[int]) -> list[Square]:
    """The eight boundary readings of a square (rotations and reversals)."""
    sq = tuple(sq)
    rev = tuple(-s for s in reversed(sq))
    out = []
    for base in (sq, rev):
        for i in range(4):
            out.append(base[i:] + base[:i])
    return out


@dataclass(frozen=True)
class Edge:
    id: int
    src: Vertex
    dst: Vertex
    label: str | None = None

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst


@dataclass(frozen=True)
class Subcomplex:
    """Cells of a subcomplex: vertex ids, edge ids and square indices."""

    vertices: frozenset
    edges: frozenset = frozenset()
    squares: frozenset = frozenset()

    def __len__(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.squares)

    def union(self, other: "Subcomplex") -> "Subcomplex":
        return Subcomplex(
            self.vertices | other.vertices,
            self.edges | other.edges,
            self.squares | other.squares,
        )


class CubeComplex:
    """A finite cube complex given by its oriented 2-skeleton."""

    def __init__(
        self,
        vertices: Iterable[Vertex],
        edges: Iterable[Edge],
        squares: Iterable[Sequence[int]] = (),
        *,
        max_dim: int = DEFAULT_CUBE_DIMENSION,
    ) -> None:
        self.vertices: tuple = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex")
        vset = set(self.vertices)
        emap: dict[int, Edge] = {}
        for e in edges:
            if not isinstance(e.id, int) or e.id <= 0:
                raise InputError(f"edge id must be a positive integer, got {e.id!r}")
            if e.id in emap:
                raise InputError(f"duplicate edge id {e.id}")
            if e.src not in vset or e.dst not in vset:
                raise InputError(f"edge {e.id} has an undeclared endpoint")
            emap[e.id] = e
        self.edges: dict[int, Edge] = dict(sorted(emap.items()))
        sqs = []
        for sq in squares:
            sq = tuple(int(s) for s in sq)
            if len(sq) != 4:
                raise InputError(f"square {sq} does not have four sides")
            for s in sq:
                if s == 0 or abs(s) not in self.edges:
                    raise InputError(f"square {sq} uses unknown edge {s}")
            for i in range(4):
                if self.head(sq[i]) != self.tail(sq[(i + 1) % 4]):
                    raise InputError(f"square {sq} boundary does not close at side {i}")
            for i in (0, 1):
                la, lb = self.edges[abs(sq[i])].label, self.edges[abs(sq[i + 2])].label
                if la != lb:
                    raise InputError(f"square {sq} has opposite sides labeled {la!r} and {lb!r}")
            sqs.append(sq)
        self.squares: tuple[Square, ...] = tuple(sqs)
        self.max_dim = max_dim

    # -- basic incidence ----------------------------------------------------

    def tail(self, s: int) -> Vertex:
        e = self.edges[abs(s)]
        return e.src if s > 0 else e.dst

    def head(self, s: int) -> Vertex:
        e = self.edges[abs(s)]
        return e.dst if s > 0 else e.src

    def vertex_of(self, h: HalfEdge) -> Vertex:
        e = self.edges[h[0]]
        return e.src if h[1] == 0 else e.dst

    def far_vertex(self, h: HalfEdge) -> Vertex:
        e = self.edges[h[0]]
        return e.dst if h[1] == 0 else e.src

    def label(self, eid: int) -> str | None:
        return self.edges[abs(eid)].label

    @property
    def is_labeled(self) -> bool:
        return bool(self.edges) and all(e.label is not None for e in self.edges.values())

    @cached_property
    def labels(self) -> frozenset:
        return frozenset(e.label for e in self.edges.values() if e.label is not None)

    @cached_property
    def half_edges(self) -> dict[Vertex, tuple[HalfEdge, ...]]:
        out: dict[Vertex, list[HalfEdge]] = {v: [] for v in self.vertices}
        for e in self.edges.values():
            out[e.src].append((e.id, 0))
            out[e.dst].append((e.id, 1))
        return {v: tuple(hs) for v, hs in out.items()}

    @cached_property
    def corners(self) -> dict[Vertex, tuple[tuple[HalfEdge, HalfEdge, int, int], ...]]:
        """Per vertex: ``(h_a, h_b, square index, corner index)``."""
        out: dict[Vertex, list] = {v: [] for v in self.vertices}
        for qi, sq in enumerate(self.squares):
            for c in range(4):
                out[self.tail(sq[c])].append((start(sq[c]), finish(sq[c - 1]), qi, c))
        return {v: tuple(cs) for v, cs in out.items()}

    @cached_property
    def corner_index(self) -> dict[tuple[HalfEdge, HalfEdge], list[tuple[int, int, bool]]]:
        """Map an ordered pair of half-edges to ``(square, corner, is_forward)``.

        ``is_forward`` is True when the pair is ``(h_a, h_b)`` in corner order.
        """
        out: dict = defaultdict(list)
        for v, cs in self.corners.items():
            for ha, hb, qi, c in cs:
                out[(ha, hb)].append((qi, c, True))
                out[(hb, ha)].append((qi, c, False))
        return dict(out)

    def joined(self, h1: HalfEdge, h2: HalfEdge) -> bool:
        return (h1, h2) in self.corner_index

    def link_graph(self, v: Vertex) -> tuple[tuple[HalfEdge, ...], list[tuple[HalfEdge, HalfEdge]]]:
        """Half-edges at ``v`` and the corner list (with multiplicity)."""
        return self.half_edges[v], [(a, b) for a, b, _, _ in self.corners[v]]

    def degree(self, v: Vertex) -> int:
        return len(self.half_edges[v])

    def transport(self, across: HalfEdge, other: HalfEdge) -> HalfEdge | None:
        """Parallel copy of ``other`` at the far end of ``across``.

        Uses the unique square whose corner joins the two half-edges; returns
        None when there is no such square or more than one.
        """
        hits = self.corner_index.get((across, other), [])
        if len(hits) != 1:
            return None
        qi, c, forward = hits[0]
        sq = self.squares[qi]
        if forward:
            return start(sq[(c + 1) % 4])
        return finish(sq[(c + 2) % 4])

    # -- cubes --------------------------------------------------------------

    def close_cube(self, v: Vertex, hs: Sequence[HalfEdge]) -> dict[int, Vertex] | None:
        """Vertices of the cube spanned by half-edges ``hs`` at ``v``.

        Returns a map from direction bitmask to vertex, or None when the
        squares do not close up into a cube.
        """
        k = len(hs)
        verts: dict[int, Vertex] = {0: v}
        out: dict[int, dict[int, HalfEdge]] = {0: {i: hs[i] for i in range(k)}}
        for mask in sorted(range(1 << k), key=lambda m: bin(m).count("1")):
            if mask not in verts:
                return None
            here = out[mask]
            for i in range(k):
                if mask >> i & 1:
                    continue
                nxt = mask | (1 << i)
                far = self.far_vertex(here[i])
                moved = {}
                for j in here:
                    if j == i:
                        continue
                    t = self.transport(here[i], here[j])
                    if t is None:
                        return None
                    moved[j] = t
                if nxt in verts:
                    if verts[nxt] != far or out[nxt] != moved:
                        return None
                else:
                    if any(self.vertex_of(h) != far for h in moved.values()):
                        return None
                    verts[nxt] = far
                    out[nxt] = moved
        return verts

    def link_cliques(self, v: Vertex, size: int) -> Iterator[tuple[HalfEdge, ...]]:
        hs = sorted(set(self.half_edges[v]))
        adj = {h: set() for h in hs}
        for a, b, _, _ in self.corners[v]:
            if a != b:
                adj[a].add(b)
                adj[b].add(a)

        def grow(cur: list, cands: list) -> Iterator[tuple]:
            if len(cur) == size:
                yield tuple(cur)
                return
            for i, h in enumerate(cands):
                yield from grow(cur + [h], [x for x in cands[i + 1:] if x in adj[h]])

        yield from grow([], hs)

    def cube_counts(self, max_dim: int | None = None) -> list[int]:
        """Number of k-cubes for k = 0, 1, 2, ... (the f-vector)."""
        bound = self.max_dim if max_dim is None else max_dim
        counts = [len(self.vertices), len(self.edges), len(self.squares)]
        if not self.squares:
            return counts[: 2 if self.edges else 1]
        k = 3
        while True:
            corners = 0
            for v in self.vertices:
                for clique in self.link_cliques(v, k):
                    if self.close_cube(v, clique) is not None:
                        corners += 1
            if corners == 0:
                break
            if k > bound:
                raise BoundExceeded(f"cube of dimension {k} exceeds the bound {bound}")
            counts.append(corners // (1 << k))
            k += 1
        return counts

    @property
    def dimension(self) -> int:
        return len(self.cube_counts()) - 1

    # -- subcomplexes and components ----------------------------------------

    def whole(self) -> Subcomplex:
        return Subcomplex(frozenset(self.vertices), frozenset(self.edges), frozenset(range(len(self.squares))))

    def full_subcomplex(self, vertices: Iterable[Vertex], edges: Iterable[int]) -> Subcomplex:
        """Subcomplex with the given cells plus every square bounded by them."""
        es = frozenset(abs(e) for e in edges)
        vs = set(vertices)
        for e in es:
            vs.add(self.edges[e].src)
            vs.add(self.edges[e].dst)
        sqs = frozenset(i for i, sq in enumerate(self.squares) if all(abs(s) in es for s in sq))
        return Subcomplex(frozenset(vs), es, sqs)

    def check_subcomplex(self, sub: Subcomplex) -> None:
        vs = set(self.vertices)
        if not sub.vertices <= vs:
            raise InputError("subcomplex has vertices outside the complex")
        for e in sub.edges:
            if e not in self.edges:
                raise InputError(f"subcomplex uses unknown edge {e}")
            if self.edges[e].src not in sub.vertices or self.edges[e].dst not in sub.vertices:
                raise InputError(f"subcomplex edge {e} is missing an endpoint")
        for q in sub.squares:
            if not 0 <= q < len(self.squares):
                raise InputError(f"subcomplex uses unknown square {q}")
            if any(abs(s) not in sub.edges for s in self.squares[q]):
                raise InputError(f"subcomplex square {q} is missing a side")

    def restrict(self, sub: Subcomplex) -> "CubeComplex":
        self.check_subcomplex(sub)
        return CubeComplex(
            [v for v in self.vertices if v in sub.vertices],
            [e for e in self.edges.values() if e.id in sub.edges],
            [self.squares[q] for q in sorted(sub.squares)],
            max_dim=self.max_dim,
        )

    def components(self, edges: Iterable[int] | None = None) -> list[Subcomplex]:
        """Connected components, optionally of the subgraph on ``edges``.

        When ``edges`` is given every vertex still appears (possibly alone).
        Components are returned as full subcomplexes, ordered by first vertex.
        """
        es = list(self.edges) if edges is None else sorted({abs(e) for e in edges})
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for eid in es:
            e = self.edges[eid]
            a, b = find(e.src), find(e.dst)
            if a != b:
                parent[a] = b
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        comp_edges: dict = defaultdict(list)
        for eid in es:
            comp_edges[find(self.edges[eid].src)].append(eid)
        return [self.full_subcomplex(vs, comp_edges[root]) for root, vs in groups.items()]

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    # -- transformations ----------------------------------------------------

    def relabeled(self, mapping: Mapping[str, str]) -> "CubeComplex":
        return CubeComplex(
            self.vertices,
            [Edge(e.id, e.src, e.dst, mapping.get(e.label, e.label)) for e in self.edges.values()],
            self.squares,
            max_dim=self.max_dim,
        )

    def with_vertex_names(self, mapping: Mapping[Vertex, Vertex]) -> "CubeComplex":
        return CubeComplex(
            [mapping[v] for v in self.vertices],
            [Edge(e.id, mapping[e.src], mapping[e.dst], e.label) for e in self.edges.values()],
            self.squares,
            max_dim=self.max_dim,
        )

    def __repr__(self) -> str:
        return f"CubeComplex(V={len(self.vertices)}, E={len(self.edges)}, Q={len(self.squares)})"


class ComplexBuilder:
    """Incremental construction with automatic edge ids."""

    def __init__(self) -> None:
        self.vertices: list = []
        self._vset: set = set()
        self.edges: list[Edge] = []
        self.squares: list[Square] = []
        self.edge_ids: dict = {}

    def vertex(self, v: Vertex) -> Vertex:
        if v not in self._vset:
            self._vset.add(v)
            self.vertices.append(v)
        return v

    def edge(self, src: Vertex, dst: Vertex, label: str | None = None, key: Hashable = None) -> int:
        self.vertex(src)
        self.vertex(dst)
        eid = len(self.edges) + 1
        self.edges.append(Edge(eid, src, dst, label))
        if key is not None:
            if key in self.edge_ids:
                raise InputError(f"duplicate edge key {key!r}")
            self.edge_ids[key] = eid
        return eid

    def square(self, sides: Sequence[int]) -> None:
        self.squares.append(tuple(sides))

    def build(self, max_dim: int = DEFAULT_CUBE_DIMENSION) -> CubeComplex:
        return CubeComplex(self.vertices, self.edges, self.squares, max_dim=max_dim)


# -- standard small complexes ---------------------------------------------

def circle(n: int, label: str | None = None, prefix: str = "") -> CubeComplex:
    """Oriented circle with ``n`` edges ``i -> i+1``; vertices ``prefix+i``."""
    if n < 1:
        raise InputError("a circle needs at least one edge")
    b = ComplexBuilder()
    names = [f"{prefix}{i}" if prefix else i for i in range(n)]
    for i in range(n):
        b.edge(names[i], names[(i + 1) % n], label)
    return b.build()


def path(n: int, label: str | None = None) -> CubeComplex:
    b = ComplexBuilder()
    b.vertex(0)
    for i in range(n):
        b.edge(i, i + 1, label)
    return b.build()


def wedge_of_circles(labels: Sequence[str]) -> CubeComplex:
    return CubeComplex([0], [Edge(i + 1, 0, 0, l) for i, l in enumerate(labels)])


def disjoint_union(parts: Sequence[CubeComplex]) -> tuple[CubeComplex, list[dict[int, int]]]:
    """Disjoint union; vertices become ``(i, v)``.  Returns edge-id maps per part."""
    b = ComplexBuilder()
    maps = []
    for i, k in enumerate(parts):
        for v in k.vertices:
            b.vertex((i, v))
        emap = {}
        for e in k.edges.values():
            emap[e.id] = b.edge((i, e.src), (i, e.dst), e.label)
        for sq in k.squares:
            b.square([emap[abs(s)] * (1 if s > 0 else -1) for s in sq])
        maps.append(emap)
    return b.build(), maps


@dataclass(frozen=True)
class Product:
    """Cube-complex product with bookkeeping of where each edge came from.

    ``edge_origin[eid] = (factor index, factor edge id, other coordinates)``.
    """

    complex: CubeComplex
    edge_origin: dict


def product(*factors: CubeComplex) -> Product:
    """Product of cube complexes; vertices are flattened tuples of coordinates."""
    if not factors:
        return Product(CubeComplex([()], []), {})
    b = ComplexBuilder()
    dims = len(factors)
    # vertices
    verts: list[tuple] = [()]
    for k in factors:
        verts = [t + (v,) for t in verts for v in k.vertices]
    for t in verts:
        b.vertex(t)
    origin = {}
    # edges: one coordinate moves along an edge, the others sit at vertices
    ekey = {}
    for i, k in enumerate(factors):
        for t in verts:
            if t[i] != k.vertices[0]:
                continue
            for e in k.edges.values():
                src = t[:i] + (e.src,) + t[i + 1:]
                dst = t[:i] + (e.dst,) + t[i + 1:]
                rest = t[:i] + t[i + 1:]
                eid = b.edge(src, dst, e.label)
                ekey[(i, e.id, rest)] = eid
                origin[eid] = (i, e.id, rest)

    def sgn(s: int, eid: int) -> int:
        return eid if s > 0 else -eid

    # squares inside one factor, times vertices of the others
    for i, k in enumerate(factors):
        others = [t[:i] + t[i + 1:] for t in verts if t[i] == k.vertices[0]]
        for rest in others:
            for sq in k.squares:
                b.square([sgn(s, ekey[(i, abs(s), rest)]) for s in sq])
    # squares that are products of two edges from different factors
    for i, j in combinations(range(dims), 2):
        ki, kj = factors[i], factors[j]
        for t in verts:
            if t[i] != ki.vertices[0] or t[j] != kj.vertices[0]:
                continue
            for e in ki.edges.values():
                for f in kj.edges.values():
                    def at(pos_i, pos_j):
                        u = list(t)
                        u[i], u[j] = pos_i, pos_j
                        return u

                    def key_e(pos_j):
                        u = at(e.src, pos_j)
                        return ekey[(i, e.id, tuple(u[:i] + u[i + 1:]))]

                    def key_f(pos_i):
                        u = at(pos_i, f.src)
                        return ekey[(j, f.id, tuple(u[:j] + u[j + 1:]))]

                    b.square([key_e(f.src), key_f(e.dst), -key_e(f.dst), -key_f(e.src)])
    k = b.build(max_dim=max(DEFAULT_CUBE_DIMENSION, 2 * dims))
    if dims == 1:
        k = k.with_vertex_names({t: t[0] for t in verts})
        origin = {eid: (0, fe, ()) for eid, (_, fe, _) in origin.items()}
    return Product(k, origin)
