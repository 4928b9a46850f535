"""Canonical forms of cube complexes up to label- and orientation-preserving isomorphism.

Each connected component is encoded by a breadth-first numbering from a
start vertex.  Colour refinement restricts the start vertices and the order in
which new neighbours are numbered; remaining ties are branched on and the
lexicographically smallest code wins.  Squares are compared after the
1-skeleton, as cyclic words in canonical edge indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product as iproduct
from typing import Hashable

from .complex import CubeComplex, Subcomplex, rotations
from .errors import BoundExceeded

DEFAULT_BRANCH_BOUND = 50_000


def _lab(label) -> str:
    return "" if label is None else str(label)


def refine_colours(k: CubeComplex) -> dict[Hashable, int]:
    """Stable colour refinement on vertices using edge labels and directions."""
    colour = {v: 0 for v in k.vertices}
    rounds = 0
    while True:
        sigs = {}
        for v in k.vertices:
            sig = sorted(
                (_lab(k.edges[eid].label), end, colour[k.far_vertex((eid, end))])
                for eid, end in k.half_edges[v]
            )
            sigs[v] = (colour[v], tuple(sig))
        palette = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        new = {v: palette[sigs[v]] for v in k.vertices}
        rounds += 1
        if len(set(new.values())) == len(set(colour.values())) and rounds > 1:
            return new
        colour = new


@dataclass(frozen=True)
class ComponentForm:
    code: tuple
    vertex_order: tuple
    edge_order: tuple


@dataclass(frozen=True)
class CanonicalForm:
    code: tuple
    components: tuple[ComponentForm, ...]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CanonicalForm) and self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)


class _Search:
    def __init__(self, k: CubeComplex, comp: Subcomplex, colour: dict, bound: int) -> None:
        self.k = k
        self.comp = comp
        self.colour = colour
        self.bound = bound
        self.leaves = 0
        self.best_skel: list | None = None
        self.best: tuple | None = None
        self.best_orders: tuple | None = None

    def run(self) -> ComponentForm:
        k, colour = self.k, self.colour
        verts = [v for v in k.vertices if v in self.comp.vertices]
        lowest = min(colour[v] for v in verts)
        for s in verts:
            if colour[s] == lowest:
                self._extend([s], {s: 0}, 0, [])
        code, vorder, eorder = self.best
        return ComponentForm(code, vorder, eorder)

    def _vertex_code(self, x, num) -> tuple:
        k = self.k
        items = sorted(
            (_lab(k.edges[eid].label), end, num[k.far_vertex((eid, end))])
            for eid, end in k.half_edges[x]
        )
        return (self.colour[x], tuple(items))

    def _extend(self, order, num, i, code) -> None:
        if self.best_skel is not None:
            n = len(code)
            if code > self.best_skel[:n]:
                return
        if i == len(order):
            self._leaf(order, num, code)
            return
        k = self.k
        x = order[i]
        fresh: dict = {}
        for eid, end in k.half_edges[x]:
            y = k.far_vertex((eid, end))
            if y not in num:
                fresh.setdefault(y, []).append((_lab(k.edges[eid].label), end))
        keyed = sorted(((self.colour[y], tuple(sorted(sig))), y) for y, sig in fresh.items())
        groups: list[list] = []
        for key, y in keyed:
            if groups and groups[-1][0] == key:
                groups[-1][1].append(y)
            else:
                groups.append([key, [y]])
        choices = [list(permutations(g[1])) if len(g[1]) > 1 else [tuple(g[1])] for g in groups]
        for combo in iproduct(*choices):
            new_order = list(order)
            new_num = dict(num)
            for part in combo:
                for y in part:
                    new_num[y] = len(new_order)
                    new_order.append(y)
            self._extend(new_order, new_num, i + 1, code + [self._vertex_code(x, new_num)])

    def _leaf(self, order, num, code) -> None:
        self.leaves += 1
        if self.leaves > self.bound:
            raise BoundExceeded(f"canonical form search exceeded {self.bound} branches")
        k = self.k
        if self.best_skel is not None and code > self.best_skel:
            return
        edges = sorted(self.comp.edges)
        keyed: dict = {}
        for eid in edges:
            e = k.edges[eid]
            keyed.setdefault((num[e.src], num[e.dst], _lab(e.label)), []).append(eid)
        keys = sorted(keyed)
        squares = [k.squares[q] for q in sorted(self.comp.squares)]
        multi = [key for key in keys if len(keyed[key]) > 1]
        if squares and multi:
            options = [list(permutations(keyed[key])) for key in multi]
        else:
            options = []
        best_local = None
        for combo in iproduct(*options) if options else [()]:
            assign = dict(keyed)
            for key, perm in zip(multi, combo):
                assign[key] = list(perm)
            eorder = [eid for key in keys for eid in assign[key]]
            index = {eid: i + 1 for i, eid in enumerate(eorder)}
            sq_code = sorted(
                min(tuple(index[abs(s)] * (1 if s > 0 else -1) for s in r) for r in rotations(sq))
                for sq in squares
            )
            cand = ((tuple(code), tuple(keys), tuple(sq_code)), tuple(order), tuple(eorder))
            if best_local is None or cand[0] < best_local[0]:
                best_local = cand
        if self.best is None or best_local[0] < self.best[0]:
            self.best = best_local
            self.best_skel = list(code)


def canonical_form(k: CubeComplex, bound: int = DEFAULT_BRANCH_BOUND) -> CanonicalForm:
    colour = refine_colours(k)
    comps = []
    for comp in k.components():
        comps.append(_Search(k, comp, colour, bound).run())
    comps.sort(key=lambda c: c.code)
    return CanonicalForm(tuple(c.code for c in comps), tuple(comps))


def find_isomorphism(a: CubeComplex, b: CubeComplex) -> tuple[dict, dict] | None:
    """Label- and orientation-preserving isomorphism ``a -> b`` as (vertex map, edge map)."""
    if (len(a.vertices), len(a.edges), len(a.squares)) != (len(b.vertices), len(b.edges), len(b.squares)):
        return None
    fa, fb = canonical_form(a), canonical_form(b)
    if fa != fb:
        return None
    vmap, emap = {}, {}
    for ca, cb in zip(fa.components, fb.components):
        vmap.update(zip(ca.vertex_order, cb.vertex_order))
        emap.update(zip(ca.edge_order, cb.edge_order))
    return vmap, emap


def is_isomorphic(a: CubeComplex, b: CubeComplex) -> bool:
    return find_isomorphism(a, b) is not None
