"""Seeded random branched complexes and (K, A, D) instances for property checks."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .complex import ComplexBuilder, CubeComplex, Subcomplex
from .graphs import SimplicialGraph
from .hyperplanes import gamma_components, is_directly_special, is_locally_convex
from .salvetti import BranchedCircle, branched_torus

DEFAULT_CELL_BOUND = 60

# u and v commute; w is isolated
LABEL_GRAPH = SimplicialGraph.build(["u", "v", "w"], [("u", "v")])


def random_branched_circle(rng: random.Random, label: str, max_core: int = 3) -> BranchedCircle:
    n = rng.randint(2, max_core)
    tips = tuple(rng.randint(0, 1) for _ in range(n))
    return BranchedCircle(n, tips, label, rng.choice((1, -1)))


def _with_w_circle(k: CubeComplex, at) -> CubeComplex:
    """Attach a length-2 circle labeled ``w`` at the vertex ``at``."""
    b = ComplexBuilder()
    for v in k.vertices:
        b.vertex(v)
    ids = {}
    for e in sorted(k.edges.values(), key=lambda e: e.id):
        ids[e.id] = b.edge(e.src, e.dst, e.label)
    b.edge(at, "w1", "w")
    b.edge("w1", at, "w")
    for sq in k.squares:
        b.square([ids[abs(s)] * (1 if s > 0 else -1) for s in sq])
    return b.build(max_dim=k.max_dim)


def random_branched_complex(rng: random.Random, cell_bound: int = DEFAULT_CELL_BOUND) -> CubeComplex:
    """A directly special branched complex with at most ``cell_bound`` cells.

    The shape is a branched torus over ``u, v``, a single branched circle, or
    a branched torus with a ``w``-circle wedged on at a core vertex.
    """
    while True:
        shape = rng.choice(("torus", "circle", "wedge"))
        if shape == "circle":
            k = random_branched_circle(rng, rng.choice("uv")).complex()
        else:
            bt = branched_torus([random_branched_circle(rng, "u"), random_branched_circle(rng, "v")])
            k = bt.complex
            if shape == "wedge":
                k = _with_w_circle(k, ("c0", "c0"))
        if len(k.vertices) + len(k.edges) + len(k.squares) <= cell_bound:
            return k


def induced_subgraphs(g: SimplicialGraph) -> list[SimplicialGraph]:
    out = []
    for r in range(1, len(g) + 1):
        for vs in combinations(g.vertices, r):
            out.append(g.induced(vs))
    return out


@dataclass(frozen=True)
class WallInstance:
    k: CubeComplex
    a: Subcomplex
    d: Subcomplex
    a_labels: tuple[str, ...]
    d_labels: tuple[str, ...]


def _pick_component(rng: random.Random, k: CubeComplex, graph: SimplicialGraph) -> tuple[Subcomplex, SimplicialGraph] | None:
    present = set(k.labels)
    subs = [s for s in induced_subgraphs(graph) if set(s.vertices) <= present]
    rng.shuffle(subs)
    for sub in subs:
        comps = gamma_components(k, sub, graph)
        comps = [c for c in comps if is_locally_convex(k, c)]
        if comps:
            return rng.choice(comps), sub
    return None


def random_wall_instance(rng: random.Random, cell_bound: int = DEFAULT_CELL_BOUND) -> WallInstance:
    """A directly special ``K`` with locally convex label components ``A`` and ``D``."""
    while True:
        k = random_branched_complex(rng, cell_bound)
        if not is_directly_special(k):
            continue
        picked_a = _pick_component(rng, k, LABEL_GRAPH)
        picked_d = _pick_component(rng, k, LABEL_GRAPH)
        if picked_a is None or picked_d is None:
            continue
        (a, ga), (d, gd) = picked_a, picked_d
        return WallInstance(k, a, d, ga.vertices, gd.vertices)
