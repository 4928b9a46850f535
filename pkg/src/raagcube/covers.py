"""Finite covers given by permutations: monodromy, regularization, deck groups."""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .complex import ComplexBuilder, CubeComplex, Vertex, vkey
from .errors import BoundExceeded, InputError, PreconditionError, ValidationError
from .maps import CubicalMap, classify_map, fibers, lift_table

DEFAULT_MAX_DEGREE = 24
DEFAULT_MAX_GROUP_ORDER = 40_320

Perm = tuple[int, ...]


def max_degree() -> int:
    """Cover-degree bound, overridable through ``RAAGCUBE_MAX_DEGREE``."""
    raw = os.environ.get("RAAGCUBE_MAX_DEGREE")
    if raw is None:
        return DEFAULT_MAX_DEGREE
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputError(f"RAAGCUBE_MAX_DEGREE must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InputError("RAAGCUBE_MAX_DEGREE must be positive")
    return value


def compose_perm(g: Perm, p: Perm) -> Perm:
    """Right action: first ``g`` then ``p``."""
    return tuple(p[x] for x in g)


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def generate_group(gens: Sequence[Perm], degree: int, max_order: int = DEFAULT_MAX_GROUP_ORDER) -> list[Perm]:
    identity = tuple(range(degree))
    seen = {identity}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for p in gens:
            h = compose_perm(g, p)
            if h not in seen:
                seen.add(h)
                if len(seen) > max_order:
                    raise BoundExceeded(f"monodromy group order exceeds {max_order}")
                queue.append(h)
    return sorted(seen)


@dataclass(frozen=True)
class CoverDescriptor:
    """A connected finite cover with its monodromy data.

    ``fiber`` lists the points over ``base`` in index order.  ``transport``
    gives, for every base edge, the permutation of fiber indices obtained by
    crossing it, in coordinates that identify every fiber with ``fiber`` along
    a breadth-first spanning tree; tree edges act trivially.
    """

    map: CubicalMap
    degree: int
    base: Vertex
    fiber: tuple
    tree_edges: frozenset
    transport: dict = field(repr=False)
    positions: dict = field(repr=False)

    @property
    def monodromy(self) -> dict[int, Perm]:
        """Permutations of the generator edges (those outside the tree)."""
        return {e: p for e, p in self.transport.items() if e not in self.tree_edges}

    @property
    def total(self) -> CubeComplex:
        return self.map.domain

    @property
    def base_complex(self) -> CubeComplex:
        return self.map.codomain


def spanning_tree(k: CubeComplex, root: Vertex) -> tuple[dict, list[tuple[Vertex, int, Vertex]]]:
    """BFS tree: parent pointers and the traversal steps ``(x, signed edge, y)``."""
    seen = {root}
    steps = []
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for eid, end in sorted(k.half_edges[x]):
            y = k.far_vertex((eid, end))
            if y in seen:
                continue
            seen.add(y)
            steps.append((x, eid if end == 0 else -eid, y))
            queue.append(y)
    if len(seen) != len(k.vertices):
        raise PreconditionError("the base complex is not connected")
    return seen, steps


def describe_cover(f: CubicalMap, degree_bound: int | None = None) -> CoverDescriptor:
    """Validate ``f`` as a connected covering and compute its monodromy."""
    bound = max_degree() if degree_bound is None else degree_bound
    cls = classify_map(f)
    if not cls.covering or cls.degree is None:
        raise ValidationError(f"not a covering map: {cls.reason}")
    base_cx = f.codomain
    if not f.domain.is_connected():
        raise PreconditionError("the covering space is not connected")
    if cls.degree > bound:
        raise BoundExceeded(f"cover degree {cls.degree} exceeds the bound {bound}")
    root = min(base_cx.vertices, key=vkey)
    _, steps = spanning_tree(base_cx, root)
    table = lift_table(f)
    fiber = tuple(sorted(fibers(f)[root], key=vkey))
    pos: dict = {root: list(fiber)}
    tree = set()
    for x, s, y in steps:
        tree.add(abs(s))
        pos[y] = [f.domain.head(table[(p, s)]) for p in pos[x]]
    index = {y: {p: i for i, p in enumerate(ps)} for y, ps in pos.items()}
    transport = {}
    for eid, e in base_cx.edges.items():
        transport[eid] = tuple(index[e.dst][f.domain.head(table[(p, eid)])] for p in pos[e.src])
    return CoverDescriptor(
        map=f,
        degree=cls.degree,
        base=root,
        fiber=fiber,
        tree_edges=frozenset(tree),
        transport=transport,
        positions={y: tuple(ps) for y, ps in pos.items()},
    )


def cover_from_permutations(base: CubeComplex, perms: Mapping[int, Sequence[int]], degree: int) -> CubicalMap:
    """Cover with vertices ``(x, i)``; edge ``e`` goes from ``(src, i)`` to ``(dst, perm_e[i])``.

    Edges missing from ``perms`` get the identity.  Raises when a square does
    not lift to a closed square.
    """
    if degree < 1:
        raise InputError("degree must be positive")
    full = {}
    for eid in base.edges:
        p = tuple(perms.get(eid, range(degree)))
        if sorted(p) != list(range(degree)):
            raise InputError(f"permutation for edge {eid} is not a permutation of 0..{degree - 1}")
        full[eid] = p
    for eid in perms:
        if eid not in base.edges:
            raise InputError(f"unknown edge {eid}")
    return _cover_from_action(base, full, list(range(degree)), lambda p, i: p[i])


def _cover_from_action(base: CubeComplex, action: Mapping[int, object], sheets: list, step) -> CubicalMap:
    b = ComplexBuilder()
    for x in base.vertices:
        for i in sheets:
            b.vertex((x, i))
    emap = {}
    fwd = {}
    bwd = {}
    for eid, e in base.edges.items():
        fwd[eid], bwd[eid] = {}, {}
        for i in sheets:
            j = step(action[eid], i)
            new = b.edge((e.src, i), (e.dst, j), e.label, key=(eid, i))
            emap[new] = eid
            fwd[eid][i] = j
            bwd[eid][j] = i
    for sq in base.squares:
        for i in sheets:
            cur = i
            sides = []
            for s in sq:
                if s > 0:
                    sides.append(b.edge_ids[(s, cur)])
                    cur = fwd[s][cur]
                else:
                    prev = bwd[-s][cur]
                    sides.append(-b.edge_ids[(-s, prev)])
                    cur = prev
            if cur != i:
                raise ValidationError("square relator acts nontrivially; not a cover of the square complex")
            b.square(sides)
    total = b.build(max_dim=base.max_dim)
    return CubicalMap(total, base, {v: v[0] for v in total.vertices}, emap)


def monodromy(cover: CoverDescriptor) -> dict[int, Perm]:
    return cover.monodromy


def monodromy_group(cover: CoverDescriptor, max_order: int = DEFAULT_MAX_GROUP_ORDER) -> list[Perm]:
    return generate_group(list(cover.monodromy.values()), cover.degree, max_order)


@dataclass(frozen=True)
class Regularization:
    cover: CoverDescriptor
    factor: CubicalMap
    group: tuple[Perm, ...]


def regularize(cover: CoverDescriptor, max_order: int = DEFAULT_MAX_GROUP_ORDER) -> Regularization:
    """Smallest regular cover factoring through ``cover``.

    Its sheets are the elements ``g`` of the monodromy group; crossing edge
    ``e`` sends ``g`` to ``g`` followed by the transport of ``e``.  The
    factoring map sends ``(x, g)`` to the sheet ``g(0)`` of the original cover.
    """
    if cover.degree > max_degree():
        raise BoundExceeded(f"cover degree {cover.degree} exceeds the bound {max_degree()}")
    group = monodromy_group(cover, max_order)
    base = cover.base_complex
    reg_map = _cover_from_action(base, cover.transport, group, lambda p, g: compose_perm(g, p))
    reg = describe_cover(reg_map, degree_bound=len(group))
    table = lift_table(cover.map)
    vmap = {}
    for x, g in reg_map.domain.vertices:
        vmap[(x, g)] = cover.positions[x][g[0]]
    emap = {}
    for eid, e in reg_map.domain.edges.items():
        x, g = e.src
        emap[eid] = table[(vmap[(x, g)], reg_map.emap[eid])]
    factor = CubicalMap(reg_map.domain, cover.total, vmap, emap)
    return Regularization(reg, factor, tuple(group))


def deck_transformations(cover: CoverDescriptor) -> list[dict]:
    """All deck transformations, found by lifting from the base fiber.

    A candidate is determined by where it sends the first fiber point; it is
    kept when the lift closes up consistently.
    """
    f = cover.map
    total = f.domain
    table = lift_table(f)
    src = cover.fiber[0]
    out = []
    for dst in cover.fiber:
        phi = {src: dst}
        queue = deque([src])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for eid, end in total.half_edges[x]:
                s = eid if end == 0 else -eid
                img = f.image(s)
                y = total.head(s)
                t = table.get((phi[x], img))
                if t is None:
                    ok = False
                    break
                target = total.head(t)
                if y in phi:
                    if phi[y] != target:
                        ok = False
                        break
                else:
                    phi[y] = target
                    queue.append(y)
        if ok and len(set(phi.values())) == len(phi) == len(total.vertices):
            out.append(phi)
    return out


def is_regular(cover: CoverDescriptor) -> bool:
    return len(deck_transformations(cover)) == cover.degree


def regularize_many(covers: Sequence[CoverDescriptor], max_order: int = DEFAULT_MAX_GROUP_ORDER) -> Regularization:
    """Smallest regular cover factoring through each of several covers of one base.

    The covers are combined into their disjoint union action, whose monodromy
    group is the intersection of the normal cores.
    """
    if not covers:
        raise InputError("need at least one cover")
    base = covers[0].base_complex
    offsets = []
    total = 0
    for c in covers:
        if c.base_complex is not base and c.base_complex.edges != base.edges:
            raise InputError("covers have different bases")
        offsets.append(total)
        total += c.degree
    transport = {}
    for eid in base.edges:
        perm = []
        for c, off in zip(covers, offsets):
            perm.extend(off + x for x in c.transport[eid])
        transport[eid] = tuple(perm)
    gens = [transport[e] for e in base.edges]
    group = generate_group(gens, total, max_order)
    reg_map = _cover_from_action(base, transport, group, lambda p, g: compose_perm(g, p))
    reg = describe_cover(reg_map, degree_bound=len(group))
    return Regularization(reg, reg_map, tuple(group))
