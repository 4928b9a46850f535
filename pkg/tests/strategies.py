"""Hypothesis strategies for graphs, branched complexes and words."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from raagcube.complex import CubeComplex, Edge, rotations
from raagcube.graphs import SimplicialGraph
from raagcube.salvetti import BranchedCircle, branched_torus


@st.composite
def graphs(draw, min_vertices: int = 0, max_vertices: int = 7):
    n = draw(st.integers(min_vertices, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    pairs = [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimplicialGraph.build(vs, [p for p, keep in zip(pairs, mask) if keep])


@st.composite
def branched_circles(draw, label: str = "v", max_core: int = 4):
    n = draw(st.integers(2, max_core))
    tips = tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    orient = draw(st.sampled_from((1, -1)))
    return BranchedCircle(n, tips, label, orient)


@st.composite
def branched_tori(draw, max_core: int = 3):
    f1 = draw(branched_circles("u", max_core))
    f2 = draw(branched_circles("v", max_core))
    return branched_torus([f1, f2])


seeds = st.integers(0, 2**31 - 1)


def rng_from(seed: int) -> random.Random:
    return random.Random(seed)


def shuffled(k: CubeComplex, rng: random.Random) -> CubeComplex:
    """Same complex with vertices renamed, edge ids permuted and squares re-read."""
    names = list(range(len(k.vertices)))
    rng.shuffle(names)
    vmap = {v: f"x{n}" for v, n in zip(k.vertices, names)}
    ids = list(range(1, len(k.edges) + 1))
    rng.shuffle(ids)
    emap = dict(zip(k.edges, ids))
    edges = [Edge(emap[e.id], vmap[e.src], vmap[e.dst], e.label) for e in k.edges.values()]
    squares = []
    for sq in k.squares:
        moved = tuple(emap[abs(s)] * (1 if s > 0 else -1) for s in sq)
        squares.append(rng.choice(rotations(moved)))
    rng.shuffle(squares)
    verts = [vmap[v] for v in k.vertices]
    rng.shuffle(verts)
    return CubeComplex(verts, edges, squares, max_dim=k.max_dim)
