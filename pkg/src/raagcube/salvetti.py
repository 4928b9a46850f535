"""Salvetti complexes, standard tori, branched circles and tori, holonomy."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .canon import canonical_form
from .complex import ComplexBuilder, CubeComplex, Edge, Subcomplex, product, vkey
from .errors import BoundExceeded, InputError, PreconditionError
from .graphs import SimplicialGraph, link, star
from .hyperplanes import gamma_components, label_graph, specialness
from .maps import CubicalMap

BASE = "o"
DEFAULT_VALENCE_BOUND = 8
HOLONOMY_CELL_BOUND = 200


def build_salvetti(g: SimplicialGraph) -> CubeComplex:
    """One vertex, one loop per vertex of ``g``, one commutator square per edge."""
    ids = {v: i + 1 for i, v in enumerate(g.vertices)}
    edges = [Edge(ids[v], BASE, BASE, v) for v in g.vertices]
    squares = [(ids[u], ids[w], -ids[u], -ids[w]) for u, w in g.sorted_edges()]
    return CubeComplex([BASE], edges, squares, max_dim=max(4, len(g)))


def salvetti_edge(g: SimplicialGraph, v: str) -> int:
    """Edge id of the loop labeled ``v`` in :func:`build_salvetti`."""
    return g.vertices.index(v) + 1


def standard_torus(g: SimplicialGraph, delta: Iterable[str]) -> Subcomplex:
    delta = set(delta)
    for v in delta:
        if v not in g:
            raise InputError(f"unknown vertex {v!r}")
    if not g.is_clique(delta):
        raise InputError(f"{sorted(delta)} is not a clique")
    s = build_salvetti(g)
    return s.full_subcomplex([BASE], [salvetti_edge(g, v) for v in delta])


def label_map(k: CubeComplex, g: SimplicialGraph) -> CubicalMap:
    """The map of a labeled complex to the Salvetti complex of ``g`` by labels."""
    s = build_salvetti(g)
    for e in k.edges.values():
        if e.label not in g:
            raise InputError(f"edge {e.id} label {e.label!r} is not a vertex of the graph")
    return CubicalMap(k, s, {v: BASE for v in k.vertices}, {e.id: salvetti_edge(g, e.label) for e in k.edges.values()})


# -- branched circles and tori ------------------------------------------------

@dataclass(frozen=True)
class BranchedCircle:
    """Oriented core cycle with pendant tip edges.

    ``tips[i]`` is the number of tip edges at core vertex ``i``.  Core edges
    run ``c{i} -> c{i+1}`` (or backwards when ``orientation == -1``); tip
    edges run from the core vertex to the tip vertex ``t{i}_{j}``.
    """

    core_length: int
    tips: tuple[int, ...] = ()
    label: str = "v"
    orientation: int = 1
    valence_bound: int = field(default=DEFAULT_VALENCE_BOUND, compare=False)

    def __post_init__(self) -> None:
        if self.core_length < 1:
            raise InputError("core length must be at least 1")
        tips = tuple(self.tips) if self.tips else (0,) * self.core_length
        if len(tips) != self.core_length or any(t < 0 for t in tips):
            raise InputError("tips must give a non-negative count per core vertex")
        if self.orientation not in (1, -1):
            raise InputError("orientation must be 1 or -1")
        object.__setattr__(self, "tips", tips)
        if max(2 + t for t in tips) > self.valence_bound:
            raise InputError(f"vertex valence exceeds the bound {self.valence_bound}")

    @property
    def cells(self) -> int:
        n_tips = sum(self.tips)
        return 2 * self.core_length + 2 * n_tips

    def complex(self) -> CubeComplex:
        b = ComplexBuilder()
        n = self.core_length
        for i in range(n):
            b.vertex(f"c{i}")
        for i in range(n):
            a, z = f"c{i}", f"c{(i + 1) % n}"
            if self.orientation == 1:
                b.edge(a, z, self.label)
            else:
                b.edge(z, a, self.label)
        for i, count in enumerate(self.tips):
            for j in range(count):
                b.edge(f"c{i}", f"t{i}_{j}", self.label)
        return b.build()


@dataclass(frozen=True)
class BranchedTorus:
    factors: tuple[BranchedCircle, ...]
    complex: CubeComplex = field(compare=False, repr=False)
    edge_origin: dict = field(compare=False, repr=False)

    @property
    def core(self) -> Subcomplex:
        """The product of the cores."""
        cores = []
        for f in self.factors:
            cores.append({f"c{i}" for i in range(f.core_length)})
        k = self.complex

        def coords(v):
            return (v,) if len(cores) == 1 else v

        verts = [v for v in k.vertices if all(x in c for x, c in zip(coords(v), cores))]
        vs = set(verts)
        es = [e.id for e in k.edges.values() if e.src in vs and e.dst in vs]
        return k.full_subcomplex(verts, es)


def branched_torus(factors: Sequence[BranchedCircle]) -> BranchedTorus:
    labels = [f.label for f in factors]
    if len(set(labels)) != len(labels):
        raise InputError("factors of a branched torus need distinct labels")
    prod = product(*[f.complex() for f in factors])
    return BranchedTorus(tuple(factors), prod.complex, prod.edge_origin)


# -- core edges ---------------------------------------------------------------

def _single(label: str) -> SimplicialGraph:
    return SimplicialGraph.build([label])


def core_cycles(k: CubeComplex) -> list[tuple[str, tuple[int, ...]]]:
    """Core cycle of every single-label component, as a closed signed edge walk.

    Raises when some single-label component is not a cycle with trees attached.
    """
    out = []
    for label in sorted(k.labels):
        for comp in gamma_components(k, _single(label)):
            nv, ne = len(comp.vertices), len(comp.edges)
            if ne != nv:
                raise PreconditionError(
                    f"{label}-component at {min(comp.vertices, key=vkey)!r} is not a branched circle"
                )
            live = set(comp.edges)
            deg = {v: 0 for v in comp.vertices}
            for e in live:
                deg[k.edges[e].src] += 1
                deg[k.edges[e].dst] += 1
            leaves = [v for v, d in deg.items() if d == 1]
            while leaves:
                v = leaves.pop()
                for eid, _ in k.half_edges[v]:
                    if eid in live:
                        live.discard(eid)
                        e = k.edges[eid]
                        other = e.dst if e.src == v else e.src
                        deg[v] -= 1
                        deg[other] -= 1
                        if deg[other] == 1:
                            leaves.append(other)
            cyc_verts = [v for v, d in deg.items() if d > 0]
            if any(deg[v] != 2 for v in cyc_verts) or not live:
                raise PreconditionError(f"{label}-component is not a branched circle")
            start_v = min(cyc_verts, key=vkey)
            walk = []
            used = set()
            cur = start_v
            while True:
                step = None
                for eid, end in sorted(k.half_edges[cur]):
                    if eid in live and eid not in used:
                        step = eid if end == 0 else -eid
                        break
                if step is None:
                    break
                used.add(abs(step))
                walk.append(step)
                cur = k.head(step)
                if cur == start_v and len(used) == len(live):
                    break
            out.append((label, tuple(walk)))
    return out


def core_edges(k: CubeComplex) -> frozenset[int]:
    return frozenset(abs(s) for _, walk in core_cycles(k) for s in walk)


# -- holonomy -----------------------------------------------------------------

@dataclass(frozen=True)
class HolonomyVerdict:
    component: Subcomplex
    trivial: bool
    circle_factor: Subcomplex | None = None
    link_factor: Subcomplex | None = None
    isomorphism: dict | None = None
    pairs_tried: int = 0


def v_holonomy(k: CubeComplex, v: str, graph: SimplicialGraph | None = None) -> list[HolonomyVerdict]:
    """Split every ``St(v)``-component as (``v``-component) x (``lk(v)``-component) if possible."""
    from .canon import find_isomorphism

    if not specialness(k).special:
        raise PreconditionError("holonomy is defined for special complexes")
    g = label_graph(k) if graph is None else graph
    if v not in g:
        raise InputError(f"unknown label {v!r}")
    st, lk = star(g, v), link(g, v)
    out = []
    for comp in gamma_components(k, st):
        if not any(k.edges[e].label == v for e in comp.edges):
            continue
        if len(comp) > HOLONOMY_CELL_BOUND:
            raise BoundExceeded(f"St({v})-component has {len(comp)} cells, above {HOLONOMY_CELL_BOUND}")
        L = k.restrict(comp)
        cs = _distinct(L, gamma_components(L, _single(v)))
        fs = _distinct(L, gamma_components(L, lk))
        tried = 0
        found = None
        for c in cs:
            for f in fs:
                if len(c.vertices) * len(f.vertices) != len(L.vertices):
                    continue
                tried += 1
                prod = product(L.restrict(c), L.restrict(f)).complex
                iso = find_isomorphism(prod, L)
                if iso is not None:
                    found = (c, f, iso[0])
                    break
            if found:
                break
        if found:
            out.append(HolonomyVerdict(comp, True, found[0], found[1], found[2], tried))
        else:
            out.append(HolonomyVerdict(comp, False, pairs_tried=tried))
    return out


def _distinct(k: CubeComplex, subs: list[Subcomplex]) -> list[Subcomplex]:
    seen = set()
    out = []
    for s in subs:
        form = canonical_form(k.restrict(s))
        if form not in seen:
            seen.add(form)
            out.append(s)
    return out


def has_trivial_holonomy(k: CubeComplex, graph: SimplicialGraph | None = None) -> bool:
    g = label_graph(k) if graph is None else graph
    return all(verdict.trivial for v in sorted(k.labels) for verdict in v_holonomy(k, v, g))


def ell_branched_torus_cover(delta: Iterable[str], ell: int) -> CubicalMap:
    """Product of ``ell``-circles, one per label in ``delta``, covering ``S(delta)``."""
    from .complex import circle

    if ell < 1:
        raise InputError("ell must be positive")
    labels = sorted(set(delta))
    g = SimplicialGraph.build(labels, combinations(labels, 2))
    target = build_salvetti(g)
    if not labels:
        dom = CubeComplex([()], [])
    else:
        dom = product(*[circle(ell, lab) for lab in labels]).complex
    return CubicalMap(
        dom,
        target,
        {x: BASE for x in dom.vertices},
        {e.id: salvetti_edge(g, e.label) for e in dom.edges.values()},
    )
