"""Finite simplicial graphs and the graph-level predicates used as hypotheses.

Vertices are strings; every ordered output uses lexicographic vertex order so
results are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import BoundExceeded, InputError

DEFAULT_AUTOMORPHISM_BOUND = 10


@dataclass(frozen=True)
class SimplicialGraph:
    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]
    _adj: Mapping[str, frozenset[str]] = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        verts = tuple(sorted(set(self.vertices)))
        if len(verts) != len(self.vertices):
            raise InputError("duplicate vertex in graph")
        adj: dict[str, set[str]] = {v: set() for v in verts}
        for e in self.edges:
            if len(e) != 2:
                raise InputError(f"loop or malformed edge {sorted(e)}")
            u, v = sorted(e)
            if u not in adj or v not in adj:
                raise InputError(f"edge {u}-{v} uses an undeclared vertex")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "_adj", {v: frozenset(n) for v, n in adj.items()})

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable[Iterable] = ()) -> "SimplicialGraph":
        verts = [str(v) for v in vertices]
        es = set()
        for e in edges:
            pair = frozenset(str(x) for x in e)
            if len(pair) != 2:
                raise InputError(f"loop or malformed edge {list(e)}")
            es.add(pair)
        return cls(tuple(verts), frozenset(es))

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: str) -> frozenset[str]:
        self._check(v)
        return self._adj[v]

    def adjacent(self, u: str, v: str) -> bool:
        return v in self._adj.get(u, ())

    def degree(self, v: str) -> int:
        return len(self.neighbors(v))

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def induced(self, vertices: Iterable[str]) -> "SimplicialGraph":
        vs = set(vertices)
        for v in vs:
            self._check(v)
        return SimplicialGraph(tuple(vs), frozenset(e for e in self.edges if e <= vs))

    def is_induced_subgraph(self, sub: "SimplicialGraph") -> bool:
        if not set(sub.vertices) <= set(self.vertices):
            return False
        return sub.edges == self.induced(sub.vertices).edges

    def complement(self) -> "SimplicialGraph":
        es = frozenset(
            frozenset(p) for p in combinations(self.vertices, 2) if not self.adjacent(*p)
        )
        return SimplicialGraph(self.vertices, es)

    def is_clique(self, vertices: Iterable[str]) -> bool:
        vs = list(vertices)
        return all(self.adjacent(u, v) for u, v in combinations(vs, 2))

    def relabel(self, mapping: Mapping[str, str]) -> "SimplicialGraph":
        return SimplicialGraph.build(
            (mapping[v] for v in self.vertices),
            ((mapping[u], mapping[v]) for u, v in self.sorted_edges()),
        )

    def _check(self, v: str) -> None:
        if v not in self._adj:
            raise InputError(f"unknown vertex {v!r}")


# -- standard graphs -------------------------------------------------------

def complete_graph(n: int, prefix: str = "") -> SimplicialGraph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return SimplicialGraph.build(vs, combinations(vs, 2))


def path_graph(n: int) -> SimplicialGraph:
    vs = [str(i) for i in range(1, n + 1)]
    return SimplicialGraph.build(vs, zip(vs, vs[1:]))


def cycle_graph(n: int) -> SimplicialGraph:
    vs = [str(i) for i in range(1, n + 1)]
    return SimplicialGraph.build(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def star_graph(leaves: int) -> SimplicialGraph:
    """K_{1,leaves} with centre ``c``."""
    vs = ["c"] + [f"x{i}" for i in range(1, leaves + 1)]
    return SimplicialGraph.build(vs, [("c", x) for x in vs[1:]])


def petersen_graph() -> SimplicialGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimplicialGraph.build(range(10), outer + spokes + inner)


def named_graphs() -> dict[str, SimplicialGraph]:
    """The fixed test family used by the acceptance suite."""
    return {
        "K1": complete_graph(1),
        "K2": complete_graph(2),
        "K3": complete_graph(3),
        "P3": path_graph(3),
        "P4": path_graph(4),
        "C4": cycle_graph(4),
        "C5": cycle_graph(5),
        "C6": cycle_graph(6),
        "K1,3": star_graph(3),
        "K4": complete_graph(4),
        "Petersen": petersen_graph(),
    }


# -- links and stars -------------------------------------------------------

def link(g: SimplicialGraph, v: str) -> SimplicialGraph:
    return g.induced(g.neighbors(v))


def star(g: SimplicialGraph, v: str) -> SimplicialGraph:
    return g.induced(g.neighbors(v) | {v})


def link_of(g: SimplicialGraph, vertices: Iterable[str]) -> SimplicialGraph:
    """Induced subgraph on vertices adjacent to every vertex of ``vertices``."""
    vs = set(vertices)
    common = [w for w in g.vertices if w not in vs and all(g.adjacent(w, x) for x in vs)]
    return g.induced(common)


def star_of(g: SimplicialGraph, vertices: Iterable[str]) -> SimplicialGraph:
    vs = set(vertices)
    return g.induced(vs | set(link_of(g, vs).vertices))


# -- induced 4-cycles ------------------------------------------------------

def find_induced_cycle(g: SimplicialGraph, length: int = 4) -> tuple[str, str, str, str] | None:
    """Return four vertices inducing a 4-cycle, in cyclic order, or None.

    Exhaustive: every induced 4-cycle a-b-c-d has a non-adjacent diagonal pair
    (a, c) with two non-adjacent common neighbours b, d.
    """
    if length != 4:
        raise InputError("only induced 4-cycles are supported")
    for a, c in combinations(g.vertices, 2):
        if g.adjacent(a, c):
            continue
        common = sorted(g.neighbors(a) & g.neighbors(c))
        for b, d in combinations(common, 2):
            if not g.adjacent(b, d):
                return (a, b, c, d)
    return None


# -- automorphisms ---------------------------------------------------------

Permutation = dict  # vertex -> vertex


def _automorphism_search(g: SimplicialGraph, fixed: Mapping[str, str] | None = None) -> Iterator[dict]:
    order = list(g.vertices)
    if fixed:
        order = [v for v in order if v in fixed] + [v for v in order if v not in fixed]
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def extend(i: int) -> Iterator[dict]:
        if i == len(order):
            yield dict(assignment)
            return
        v = order[i]
        candidates = [fixed[v]] if fixed and v in fixed else g.vertices
        for w in candidates:
            if w in used or g.degree(w) != g.degree(v):
                continue
            if any(g.adjacent(v, u) != g.adjacent(w, assignment[u]) for u in order[:i]):
                continue
            assignment[v] = w
            used.add(w)
            yield from extend(i + 1)
            used.discard(w)
            del assignment[v]

    yield from extend(0)


def automorphisms(g: SimplicialGraph, bound: int = DEFAULT_AUTOMORPHISM_BOUND) -> list[dict]:
    """All adjacency-preserving vertex permutations, identity first."""
    if len(g) > bound:
        raise BoundExceeded(f"automorphism enumeration limited to {bound} vertices, got {len(g)}")
    identity = {v: v for v in g.vertices}
    rest = [p for p in _automorphism_search(g) if p != identity]
    rest.sort(key=lambda p: tuple(p[v] for v in g.vertices))
    return [identity] + rest


@dataclass(frozen=True)
class StarRigidity:
    rigid: bool
    automorphism: dict | None = None
    vertex: str | None = None

    def __bool__(self) -> bool:
        return self.rigid


def is_star_rigid(g: SimplicialGraph, bound: int = DEFAULT_AUTOMORPHISM_BOUND) -> StarRigidity:
    """Only the identity may fix a closed star pointwise."""
    if len(g) > bound:
        raise BoundExceeded(f"automorphism enumeration limited to {bound} vertices, got {len(g)}")
    for v in g.vertices:
        closed = g.neighbors(v) | {v}
        for p in _automorphism_search(g, fixed={w: w for w in closed}):
            if any(p[w] != w for w in g.vertices):
                return StarRigidity(False, p, v)
    return StarRigidity(True)


# -- cliques, flag complex, joins ------------------------------------------

def cliques(g: SimplicialGraph) -> list[frozenset[str]]:
    """All cliques including the empty one, ordered by size then lexicographically."""
    out: list[frozenset[str]] = []

    def grow(current: list[str], candidates: list[str]) -> None:
        out.append(frozenset(current))
        for i, v in enumerate(candidates):
            grow(current + [v], [w for w in candidates[i + 1:] if g.adjacent(v, w)])

    grow([], list(g.vertices))
    out.sort(key=lambda c: (len(c), sorted(c)))
    return out


def clique_vector(g: SimplicialGraph) -> list[int]:
    counts: dict[int, int] = {}
    for c in cliques(g):
        counts[len(c)] = counts.get(len(c), 0) + 1
    return [counts[k] for k in range(max(counts) + 1)]


def flag_complex(g: SimplicialGraph) -> dict[int, list[frozenset[str]]]:
    """Simplices of the flag complex keyed by dimension (k-simplex = (k+1)-clique)."""
    cx: dict[int, list[frozenset[str]]] = {}
    for c in cliques(g):
        if c:
            cx.setdefault(len(c) - 1, []).append(c)
    return cx


def join_decomposition(g: SimplicialGraph) -> list[SimplicialGraph]:
    """Maximal join factors: components of the complement graph."""
    comp = g.complement()
    seen: set[str] = set()
    factors = []
    for v in g.vertices:
        if v in seen:
            continue
        stack, block = [v], {v}
        while stack:
            x = stack.pop()
            for y in comp.neighbors(x):
                if y not in block:
                    block.add(y)
                    stack.append(y)
        seen |= block
        factors.append(g.induced(block))
    return factors


# -- vertex typing ---------------------------------------------------------

TYPE_I = "I"
TYPE_II = "II"


@dataclass(frozen=True)
class VertexTyping:
    types: dict[str, str]
    classes: tuple[frozenset[str], ...]
    class_links: dict[frozenset[str], frozenset[str]]
    blocks: dict[frozenset[str], frozenset[str]]

    def type_of(self, v: str) -> str:
        return self.types[v]

    def class_of(self, v: str) -> frozenset[str]:
        for c in self.classes:
            if v in c:
                return c
        raise InputError(f"{v!r} is not of type I")


def classify_vertices(g: SimplicialGraph) -> VertexTyping:
    """Type I: some w != v, not adjacent to v, has lk(v) inside St(w)."""
    types = {}
    for v in g.vertices:
        lk = g.neighbors(v)
        type_one = any(
            w != v and not g.adjacent(v, w) and lk <= (g.neighbors(w) | {w})
            for w in g.vertices
        )
        types[v] = TYPE_I if type_one else TYPE_II
    type_one = [v for v in g.vertices if types[v] == TYPE_I]
    sub = g.induced(type_one)
    classes = []
    seen: set[str] = set()
    for v in type_one:
        if v in seen:
            continue
        stack, block = [v], {v}
        while stack:
            x = stack.pop()
            for y in sub.neighbors(x):
                if y not in block:
                    block.add(y)
                    stack.append(y)
        seen |= block
        classes.append(frozenset(block))
    class_links = {}
    blocks: dict[frozenset[str], set[str]] = {}
    for c in classes:
        closed = set().union(*(g.neighbors(x) | {x} for x in c))
        lk = frozenset(closed - c)
        class_links[c] = lk
        blocks.setdefault(lk, set()).update(c)
    return VertexTyping(
        types=types,
        classes=tuple(classes),
        class_links=class_links,
        blocks={k: frozenset(v) for k, v in blocks.items()},
    )
