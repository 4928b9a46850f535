"""Labeled-graph covers, parity counts, lifting operators and a non-commutation certificate.

The setting is a two-vertex graph ``Y`` with edges labeled ``a, b, c`` and
two degree-2 coverings ``f1, f2: X -> Y``.  For an edge path ``w`` at ``v``
the operator ``phi1`` lifts ``w`` through ``f1`` from the base lift ``v`` and
pushes the lift back down by ``f2``; ``phi2`` does the same from the other
lift ``v'``.  Iterating ``phi1`` on powers of a vertical loop and tracking the
parity of ``b`` and ``c`` letters shows that the loop does not virtually
commute with the horizontal loop ``e_v`` of the square complex built from the
two coverings.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterable, Iterator, Sequence

from .complex import ComplexBuilder, CubeComplex
from .errors import BoundExceeded, InputError, PreconditionError, RaagCubeError, ValidationError

ALPHABET = ("a", "b", "c")
DEFAULT_LENGTH_CAP = 2**20

Letter = tuple[str, int]


class InstanceNotFound(RaagCubeError):
    """The search space holds no instance meeting the constraints."""


# -- words -----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*([A-Za-z])\s*(\^-1|⁻¹|\^\{-1\}|')?")


@dataclass(frozen=True)
class Word:
    """A sequence of signed letters such as ``b a^-1``."""

    letters: tuple[Letter, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Read ``"ba"``, ``"b a^-1"``, ``"a⁻¹ c"`` or ``"a'"`` (prime for inverse)."""
        out = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise InputError(f"cannot parse word at {text[pos:]!r}")
            out.append((m.group(1), -1 if m.group(2) else 1))
            pos = m.end()
        return cls(tuple(out))

    def __str__(self) -> str:
        return " ".join(x if s > 0 else f"{x}^-1" for x, s in self.letters) or "1"

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k)

    def inverse(self) -> "Word":
        return Word(tuple((x, -s) for x, s in reversed(self.letters)))

    def reduced(self) -> "Word":
        out: list[Letter] = []
        for x, s in self.letters:
            if out and out[-1] == (x, -s):
                out.pop()
            else:
                out.append((x, s))
        return Word(tuple(out))


def parity(w: Iterable[Letter], alphabet: Sequence[str] = ALPHABET) -> tuple[int, ...]:
    """Signed letter counts, one per letter of ``alphabet``."""
    index = {x: i for i, x in enumerate(alphabet)}
    counts = [0] * len(alphabet)
    for x, s in w:
        if x not in index:
            raise InputError(f"letter {x!r} is outside the alphabet {tuple(alphabet)}")
        counts[index[x]] += s
    return tuple(counts)


# -- labeled graphs and their maps ----------------------------------------------

@dataclass(frozen=True)
class LabeledGraph:
    """Directed multigraph with labeled edges ``(name, src, dst, label)`` and a base point."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str, str], ...]
    base: str
    alphabet: tuple[str, ...] = ALPHABET

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        names = [e[0] for e in self.edges]
        if len(set(names)) != len(names):
            raise InputError("edge names repeat")
        for name, src, dst, label in self.edges:
            if src not in vs or dst not in vs:
                raise InputError(f"edge {name} has an unknown endpoint")
            if label not in self.alphabet:
                raise InputError(f"edge {name} label {label!r} is outside the alphabet")
        if vs and self.base not in vs:
            raise InputError(f"base point {self.base!r} is not a vertex")

    def edge(self, name: str) -> tuple[str, str, str, str]:
        for e in self.edges:
            if e[0] == name:
                return e
        raise InputError(f"unknown edge {name!r}")

    def degree(self, v: str) -> int:
        return sum((e[1] == v) + (e[2] == v) for e in self.edges)

    def by_label(self) -> dict[str, tuple[str, str, str, str]]:
        """Edge per label; requires each label to be used once."""
        out = {}
        for e in self.edges:
            if e[3] in out:
                raise PreconditionError(f"label {e[3]!r} labels several edges")
            out[e[3]] = e
        return out

    def follow(self, start: str, w: Iterable[Letter]) -> str:
        """End vertex of the path spelled by ``w`` from ``start`` (labels must be unique)."""
        table = self.by_label()
        cur = start
        for x, s in w:
            if x not in table:
                raise InputError(f"no edge labeled {x!r}")
            _, src, dst, _ = table[x]
            if s > 0:
                if cur != src:
                    raise InputError(f"letter {x} does not start at {cur}")
                cur = dst
            else:
                if cur != dst:
                    raise InputError(f"letter {x}^-1 does not start at {cur}")
                cur = src
        return cur


@dataclass(frozen=True)
class GraphMap:
    """Map of labeled graphs; ``emap[name] = (target edge, sign)``."""

    domain: LabeledGraph
    codomain: LabeledGraph
    vmap: dict
    emap: dict

    def incidence_ok(self) -> bool:
        for name, src, dst, _ in self.domain.edges:
            tname, s = self.emap[name]
            _, tsrc, tdst, _ = self.codomain.edge(tname)
            if s < 0:
                tsrc, tdst = tdst, tsrc
            if (self.vmap[src], self.vmap[dst]) != (tsrc, tdst):
                return False
        return True

    def is_covering(self) -> bool:
        if not self.incidence_ok():
            return False
        for x in self.domain.vertices:
            images = []
            for name, src, dst, _ in self.domain.edges:
                tname, s = self.emap[name]
                if src == x:
                    images.append((tname, s > 0))
                if dst == x:
                    images.append((tname, s < 0))
            y = self.vmap[x]
            target = []
            for name, src, dst, _ in self.codomain.edges:
                if src == y:
                    target.append((name, True))
                if dst == y:
                    target.append((name, False))
            if sorted(images) != sorted(target):
                return False
        return True

    def lift_table(self) -> dict:
        """``(x, label, sign) -> (domain edge, sign, end vertex)``."""
        table = {}
        for name, src, dst, _ in self.domain.edges:
            tname, s = self.emap[name]
            label = self.codomain.edge(tname)[3]
            table[(src, label, s)] = (name, 1, dst)
            table[(dst, label, -s)] = (name, -1, src)
        return table


# -- the instance -----------------------------------------------------------------

@dataclass(frozen=True)
class ApplianceInstance:
    """``Y``, the cover ``X``, two coverings, the involution and the vertical loop.

    ``lifts`` are the two preimages of the base point under ``f1``; the first
    is the base point of ``X``.  ``horizontal`` names the vertex of ``X`` whose
    horizontal edge is the loop ``e_v``.
    """

    Y: LabeledGraph
    X: LabeledGraph
    f1: GraphMap
    f2: GraphMap
    iota: dict
    sigma: Word
    lifts: tuple[str, str]
    convention: str = "left-to-right"
    horizontal: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def iota_word(self, w: Iterable[Letter]) -> Word:
        out = []
        for x, s in w:
            y, t = self.iota[x]
            out.append((y, s * t))
        return Word(tuple(out))


def _lift(cover: GraphMap, start: str, w: Iterable[Letter]) -> tuple[list[tuple[str, int]], str]:
    table = cover.lift_table()
    cur = start
    path = []
    for x, s in w:
        step = table.get((cur, x, s))
        if step is None:
            raise InputError(f"letter {x}{'' if s > 0 else '^-1'} does not lift at {cur}")
        name, t, cur = step
        path.append((name, t))
    return path, cur


def _push(f: GraphMap, path: Iterable[tuple[str, int]]) -> Word:
    out = []
    for name, t in path:
        tname, s = f.emap[name]
        out.append((f.codomain.edge(tname)[3], s * t))
    return Word(tuple(out))


def lift_closes(inst: ApplianceInstance, w: Word) -> bool:
    """Whether the ``f1``-lift of ``w`` from the base lift is closed."""
    _, end = _lift(inst.f1, inst.lifts[0], w)
    return end == inst.lifts[0]


def in_G1_parity(w: Iterable[Letter]) -> bool:
    _, nb, nc = parity(w)
    return (nb + nc) % 2 == 0


def in_G1(w: Word, inst: ApplianceInstance) -> bool:
    """Membership of the loop ``w`` in the subgroup of the first covering.

    Computed from the parity of ``b`` and ``c`` letters and independently from
    the closure of the lift; a disagreement means the instance is invalid.
    """
    v = inst.Y.base
    if inst.Y.follow(v, w) != v:
        raise PreconditionError(f"{w} is not a closed loop at {v}")
    by_parity = in_G1_parity(w)
    by_lift = lift_closes(inst, w)
    if by_parity != by_lift:
        raise ValidationError(f"parity and lift disagree on {w}: {by_parity} vs {by_lift}")
    return by_lift


def phi_raw(w: Word, which: int, inst: ApplianceInstance) -> Word:
    if which not in (1, 2):
        raise InputError("which must be 1 or 2")
    path, _ = _lift(inst.f1, inst.lifts[which - 1], w)
    return _push(inst.f2, path)


def phi(w: Word, which: int, inst: ApplianceInstance) -> Word:
    """``f2``-image of the ``f1``-lift of ``w`` from ``v`` (``which=1``) or ``v'`` (``which=2``).

    Also checks that the second lift is the involution applied to the first.
    """
    p1 = phi_raw(w, 1, inst)
    p2 = phi_raw(w, 2, inst)
    if p2 != inst.iota_word(p1):
        raise ValidationError(f"phi2 differs from iota o phi1 on {w}")
    return p1 if which == 1 else p2


# -- enumeration helpers -------------------------------------------------------------

def paths_at(g: LabeledGraph, start: str, max_length: int, reduced: bool = True) -> Iterator[Word]:
    """All (reduced) edge paths from ``start`` of length at most ``max_length``."""
    table = g.by_label()
    letters = [(x, s) for x in sorted(table) for s in (1, -1)]

    def grow(word: tuple, cur: str):
        yield Word(word)
        if len(word) == max_length:
            return
        for x, s in letters:
            if reduced and word and word[-1] == (x, -s):
                continue
            _, src, dst, _ = table[x]
            if s > 0 and src == cur:
                yield from grow(word + ((x, s),), dst)
            elif s < 0 and dst == cur:
                yield from grow(word + ((x, s),), src)

    yield from grow((), start)


def loops_at(g: LabeledGraph, start: str, max_length: int) -> Iterator[Word]:
    for w in paths_at(g, start, max_length):
        if g.follow(start, w) == start:
            yield w


@dataclass(frozen=True)
class CalculationReport:
    loops: int
    paths: int
    membership: bool
    involution: bool
    squaring: bool
    first_failure: str = ""

    @property
    def ok(self) -> bool:
        return self.membership and self.involution and self.squaring


def check_calculation(inst: ApplianceInstance, max_length: int = 10) -> CalculationReport:
    """Exhaustively check the three identities on loops and paths up to ``max_length``.

    Membership: parity rule equals lift closure.  Involution: ``phi2 = iota o
    phi1``.  Squaring: ``phi1(w^2) = phi1(w) phi2(w)`` for loops outside the
    subgroup.
    """
    v = inst.Y.base
    n_loops = n_paths = 0
    membership = involution = squaring = True
    failure = ""
    for w in paths_at(inst.Y, v, max_length):
        n_paths += 1
        p1, p2 = phi_raw(w, 1, inst), phi_raw(w, 2, inst)
        if involution and p2 != inst.iota_word(p1):
            involution = False
            failure = failure or f"involution fails on {w}"
        if inst.Y.follow(v, w) != v:
            continue
        n_loops += 1
        closes = lift_closes(inst, w)
        if membership and closes != in_G1_parity(w):
            membership = False
            failure = failure or f"membership fails on {w}"
        if not closes and squaring and phi_raw(w**2, 1, inst) != p1 + p2:
            squaring = False
            failure = failure or f"squaring fails on {w}"
    return CalculationReport(n_loops, n_paths, membership, involution, squaring, failure)


# -- the doubling lemma ---------------------------------------------------------------

@dataclass(frozen=True)
class DoubleCheck:
    word: Word
    steps: tuple[tuple[str, bool], ...]
    first_failure: int | None

    @property
    def ok(self) -> bool:
        return self.first_failure is None

    def __bool__(self) -> bool:
        return self.ok


DOUBLE_STEPS = (
    "b+c of phi1(w^2) has the parity of its a-count (even length)",
    "a-count of phi1(w^2) equals that of phi1(w) phi2(w)",
    "a-count of phi2(w) equals that of iota(phi1(w))",
    "a-count of iota(phi1(w)) is minus the c-count of phi1(w)",
    "a - c and a + c of phi1(w) have equal parity",
    "a + c of phi1(w) has the parity of b + c of w",
    "b + c of w is odd",
    "phi1(w^2) lifts to an open path",
)


def verify_double(inst: ApplianceInstance, w: Word) -> DoubleCheck:
    """Replay the parity chain showing ``phi1(w^2)`` leaves the subgroup when ``w`` does."""
    v = inst.Y.base
    if inst.Y.follow(v, w) != v:
        raise PreconditionError(f"{w} is not a closed loop at {v}")
    if lift_closes(inst, w):
        raise PreconditionError(f"{w} lies in the subgroup of the first covering")
    p1 = phi_raw(w, 1, inst)
    p2 = phi_raw(w, 2, inst)
    sq = phi_raw(w**2, 1, inst)
    a_sq, b_sq, c_sq = parity(sq)
    a1, b1, c1 = parity(p1)
    a2, _, _ = parity(p2)
    ai, _, _ = parity(inst.iota_word(p1))
    _, bw, cw = parity(w)
    checks = [
        (b_sq + c_sq - a_sq) % 2 == 0,
        a_sq == a1 + a2,
        a2 == ai,
        ai == -c1,
        (a1 - c1 - (a1 + c1)) % 2 == 0,
        (a1 + c1 - (bw + cw)) % 2 == 0,
        (bw + cw) % 2 == 1,
        not lift_closes(inst, sq) if inst.Y.follow(v, sq) == v else False,
    ]
    steps = tuple(zip(DOUBLE_STEPS, checks))
    first = next((i for i, ok in enumerate(checks) if not ok), None)
    return DoubleCheck(w, steps, first)


# -- the certificate --------------------------------------------------------------

class _Phi1Transducer:
    """Streams ``phi1`` letter by letter, remembering only the current lift vertex."""

    def __init__(self, inst: ApplianceInstance) -> None:
        self.table = inst.f1.lift_table()
        self.f2 = inst.f2
        self.labels = {name: inst.Y.edge(target)[3] for name, (target, _) in inst.f2.emap.items()}
        self.state = inst.lifts[0]

    def feed(self, letter: Letter) -> Letter:
        x, s = letter
        name, t, self.state = self.table[(self.state, x, s)]
        _, sign = self.f2.emap[name]
        return self.labels[name], sign * t


@dataclass(frozen=True)
class IterateRecord:
    depth: int
    parity: tuple[int, int, int]
    closed: bool


@dataclass(frozen=True)
class CertificateEntry:
    m: int
    n: int
    m_used: int
    k: int
    l: int
    depth: int
    length: int
    iterates: tuple[IterateRecord, ...]
    certified: bool
    depth_reached: int

    @property
    def final_parity(self) -> tuple[int, int, int]:
        return self.iterates[-1].parity if self.iterates else (0, 0, 0)


@dataclass(frozen=True)
class Certificate:
    sigma: Word
    entries: tuple[CertificateEntry, ...]
    length_cap: int

    @property
    def complete(self) -> bool:
        return all(e.certified for e in self.entries)


def _split_power_of_two(m: int) -> tuple[int, int]:
    l = 0
    while m % 2 == 0:
        m //= 2
        l += 1
    return m, l


def iterate_phi1(inst: ApplianceInstance, word: Iterable[Letter], depth: int) -> list[IterateRecord]:
    """Stream ``word`` through ``depth`` copies of ``phi1``; record every iterate's parity."""
    layers = [_Phi1Transducer(inst) for _ in range(depth)]
    counts = [[0, 0, 0] for _ in range(depth + 1)]
    index = {x: i for i, x in enumerate(ALPHABET)}
    ends = [inst.Y.base] * (depth + 1)
    table = inst.Y.by_label()
    for letter in word:
        for j in range(depth + 1):
            if j:
                letter = layers[j - 1].feed(letter)
            x, s = letter
            counts[j][index[x]] += s
            _, src, dst, _ = table[x]
            ends[j] = dst if s > 0 else src
    return [IterateRecord(j, tuple(counts[j]), ends[j] == inst.Y.base) for j in range(depth + 1)]


def _repeat(w: Word, times: int) -> Iterator[Letter]:
    for _ in range(times):
        yield from w.letters


def certify_noncommuting(
    inst: ApplianceInstance, m_max: int, n_max: int, length_cap: int = DEFAULT_LENGTH_CAP
) -> Certificate:
    """Certify that ``sigma^m`` and ``e_v^n`` never commute for ``1 <= m <= m_max, 1 <= n <= n_max``.

    With ``m = k 2^l`` (``k`` odd) and ``N = 2 n l``, commuting would force
    ``phi1^N((sigma^k)^(2^N)) = sigma^(2^(N-l) m)``, a loop in the subgroup;
    the certificate shows the left side lies outside.  An odd ``m`` is
    replaced by ``2m``, since powers of commuting elements commute.

    Raises :class:`BoundExceeded` when a word would exceed ``length_cap``; the
    exception carries the partial certificate with the depth reached.
    """
    if m_max < 0 or n_max < 0:
        raise InputError("bounds must be non-negative")
    sigma = inst.sigma
    entries = []
    capped = False
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            m_used = m if m % 2 == 0 else 2 * m
            k, l = _split_power_of_two(m_used)
            depth = 2 * n * l
            base = sigma**k
            length = len(base) * 2**depth
            reached = depth
            while len(base) * 2**reached > length_cap:
                reached -= 1
            records = iterate_phi1(inst, _repeat(base, 2**reached), reached) if reached >= 0 else []
            last = records[-1] if records else None
            ok = (
                reached == depth
                and last is not None
                and last.closed
                and (last.parity[1] + last.parity[2]) % 2 == 1
                and (2 ** (depth - l) * m_used) % 2 == 0
            )
            capped = capped or reached < depth
            entries.append(CertificateEntry(m, n, m_used, k, l, depth, length, tuple(records), ok, reached))
    cert = Certificate(sigma, tuple(entries), length_cap)
    if capped:
        err = BoundExceeded(f"word length cap {length_cap} reached before the certificate was complete")
        err.certificate = cert  # type: ignore[attr-defined]
        raise err
    return cert


def replay_entry(inst: ApplianceInstance, entry: CertificateEntry) -> bool:
    """Recompute every stored iterate with explicit words and compare parities."""
    word = (inst.sigma**entry.k) ** (2**entry.depth_reached)
    for rec in entry.iterates:
        if rec.depth:
            word = phi_raw(word, 1, inst)
        if parity(word) != rec.parity:
            return False
        if (inst.Y.follow(inst.Y.base, word) == inst.Y.base) != rec.closed:
            return False
    return True


# -- search ------------------------------------------------------------------

@dataclass(frozen=True)
class SearchConstraints:
    edge_count: int = 3
    sigma: str = "ba"
    check_length: int = 6
    require_distinct: bool = True


_YV = ("u", "v")


def _candidate_Y(edge_count: int) -> Iterator[LabeledGraph]:
    if edge_count != len(ALPHABET):
        return
    ends = list(iproduct(_YV, _YV))
    for choice in iproduct(ends, repeat=edge_count):
        edges = tuple((x, s, d, x) for x, (s, d) in zip(ALPHABET, choice))
        g = LabeledGraph(_YV, edges, "v")
        if all(g.degree(y) == 3 for y in _YV):
            yield g


def _involutions(y: LabeledGraph) -> Iterator[dict]:
    """Automorphisms fixing the vertices and ``b``, exchanging ``a`` and ``c`` with reversed directions."""
    table = y.by_label()
    for sa, sc, sb in iproduct((1, -1), repeat=3):
        iota = {"a": ("c", sa), "c": ("a", sc), "b": ("b", sb)}
        ok = True
        for x, (z, s) in iota.items():
            _, src, dst, _ = table[x]
            _, zs, zd, _ = table[z]
            if s < 0:
                zs, zd = zd, zs
            if (src, dst) != (zs, zd):
                ok = False
        # an involution: applying twice is the identity
        for x, (z, s) in iota.items():
            z2, s2 = iota[z]
            if z2 != x or s * s2 != 1:
                ok = False
        if ok and sb == 1 and sa == sc == -1:
            yield iota


def _first_cover(y: LabeledGraph, bits: Sequence[int]) -> tuple[LabeledGraph, GraphMap]:
    verts = []
    for name in _YV:
        verts += [name, name + "'"]
    sheet = {0: "", 1: "'"}
    edges = []
    emap = {}
    for (x, src, dst, _), bit in zip(y.edges, bits):
        for i in (0, 1):
            name = f"{x}{i}"
            edges.append((name, src + sheet[i], dst + sheet[i ^ bit], x))
            emap[name] = (x, 1)
    xg = LabeledGraph(tuple(verts), tuple(edges), "v")
    vmap = {vx: vx.rstrip("'") for vx in verts}
    return xg, GraphMap(xg, y, vmap, emap)


def _second_covers(y: LabeledGraph, xg: LabeledGraph, vmap: dict) -> Iterator[GraphMap]:
    options = []
    for _, src, dst, _ in xg.edges:
        ends = (vmap[src], vmap[dst])
        opts = []
        for tname, tsrc, tdst, _ in y.edges:
            if ends == (tsrc, tdst):
                opts.append((tname, 1))
            if ends == (tdst, tsrc):
                opts.append((tname, -1))
        options.append(opts)
    names = [e[0] for e in xg.edges]
    for combo in iproduct(*options):
        f = GraphMap(xg, y, vmap, dict(zip(names, combo)))
        if f.is_covering():
            yield f


def _sigma_word(text: str, convention: str) -> Word:
    w = Word.parse(text)
    return w if convention == "left-to-right" else Word(tuple(reversed(w.letters)))


def search_instance(constraints: SearchConstraints | None = None) -> ApplianceInstance:
    """First instance, in a fixed enumeration order, meeting the constraints.

    The enumeration runs over three-edge graphs ``Y`` on ``u, v`` that are
    3-regular, both readings of ``sigma``, involutions fixing ``b`` and
    exchanging ``a`` with ``c``, the eight degree-2 covers ``f1`` (which edges
    swap sheets), and every covering ``f2`` of the same graph ``X`` sending
    both lifts of ``v`` to ``v``.  An instance is kept when ``sigma`` is a loop
    outside the first subgroup and the three identities hold on all paths up
    to ``check_length``.
    """
    c = constraints or SearchConstraints()
    tried = 0
    for y in _candidate_Y(c.edge_count):
        for convention in ("left-to-right", "right-to-left"):
            sigma = _sigma_word(c.sigma, convention)
            try:
                if y.follow("v", sigma) != "v":
                    continue
            except InputError:
                continue
            for iota in _involutions(y):
                for bits in iproduct((0, 1), repeat=len(y.edges)):
                    xg, f1 = _first_cover(y, bits)
                    fiber_v = ("v", "v'")
                    vmap2 = {"v": "v", "v'": "v", "u": "u", "u'": "u"}
                    for f2 in _second_covers(y, xg, vmap2):
                        tried += 1
                        if c.require_distinct and f2.emap == f1.emap:
                            continue
                        inst = ApplianceInstance(
                            y, xg, f1, f2, iota, sigma, fiber_v, convention, "v",
                            {"f1_swaps": tuple(x for x, b in zip(ALPHABET, bits) if b), "candidates_tried": tried},
                        )
                        if lift_closes(inst, sigma):
                            continue
                        if check_calculation(inst, c.check_length).ok:
                            return inst
    raise InstanceNotFound(f"no instance meets the constraints {c}")


# -- the square complex --------------------------------------------------------------

@dataclass(frozen=True)
class ZComplex:
    complex: CubeComplex
    partition: dict
    horizontal_loops: dict
    vertical_edges: dict


def build_Z_complex(inst: ApplianceInstance) -> ZComplex:
    """The square complex made of ``X x [0,1]`` and ``Y x [0,1]`` glued along ``f1`` and ``f2``.

    The complex is unlabeled: a square over an edge of ``X`` has the
    ``f1``-image and the ``f2``-image as opposite sides, which carry different
    labels in general.  Vertices are ``(y, i)`` for the two ends ``i = 0, 1``.  Vertical edges are
    the edges of ``Y`` at each end; each vertex ``x`` of ``X`` gives a
    horizontal edge ``(f1 x, 0) -> (f2 x, 1)`` and each vertex of ``Y`` gives
    ``(y, 0) -> (y, 1)``.
    """
    if not inst.X.vertices or not inst.Y.vertices:
        raise InputError("empty instance")
    for f in (inst.f1, inst.f2):
        if not f.is_covering():
            raise ValidationError("instance maps are not coverings")
    b = ComplexBuilder()
    vertical = {}
    for i in (0, 1):
        for name, src, dst, label in inst.Y.edges:
            vertical[(name, i)] = b.edge((src, i), (dst, i), key=("v", name, i))
    horizontal = {}
    for x in inst.X.vertices:
        horizontal[x] = b.edge((inst.f1.vmap[x], 0), (inst.f2.vmap[x], 1), key=("hx", x))
    for y in inst.Y.vertices:
        horizontal[("Y", y)] = b.edge((y, 0), (y, 1), key=("hy", y))
    for name, src, dst, _ in inst.X.edges:
        n1, s1 = inst.f1.emap[name]
        n2, s2 = inst.f2.emap[name]
        b.square([s1 * vertical[(n1, 0)], horizontal[dst], -s2 * vertical[(n2, 1)], -horizontal[src]])
    for name, src, dst, _ in inst.Y.edges:
        b.square([vertical[(name, 0)], horizontal[("Y", dst)], -vertical[(name, 1)], -horizontal[("Y", src)]])
    k = b.build(max_dim=2)
    part = {e: 0 for e in vertical.values()}
    part.update({e: 1 for e in horizontal.values()})
    return ZComplex(k, part, horizontal, vertical)


def trivial_double_cover_instance(y: LabeledGraph) -> ApplianceInstance:
    """Two disjoint copies of ``Y`` with ``f1 = f2`` the projection."""
    xg, f1 = _first_cover(y, (0,) * len(y.edges))
    iota = next(_involutions(y), {x: (x, 1) for x in ALPHABET})
    return ApplianceInstance(y, xg, f1, f1, iota, Word.parse("ba"), ("v", "v'"), horizontal="v")


# -- T3 to T4 ------------------------------------------------------------------

def t3_to_t4_modification(g: LabeledGraph) -> LabeledGraph:
    """Replace each vertex by an ``a``-labeled 3-cycle and each edge by a ``b``-bigon.

    The new vertices are ``(x, i)``, one per half-edge at ``x``.  The doubled
    edge over ``e`` is a directed 2-cycle, so consecutive ``b``-edges are
    oriented consistently.
    """
    for x in g.vertices:
        if g.degree(x) != 3:
            raise PreconditionError(f"vertex {x!r} has valence {g.degree(x)}, not 3")
    half: dict[str, list[str]] = {x: [] for x in g.vertices}
    ends = {}
    for name, src, dst, _ in g.edges:
        hs = f"{src}|{name}+"
        hd = f"{dst}|{name}-"
        half[src].append(hs)
        half[dst].append(hd)
        ends[name] = (hs, hd)
    edges = []
    verts = []
    for x in g.vertices:
        hs = half[x]
        verts += hs
        for i in range(3):
            edges.append((f"a:{x}:{i}", hs[i], hs[(i + 1) % 3], "a"))
    for name, (hs, hd) in ends.items():
        edges.append((f"b:{name}:0", hs, hd, "b"))
        edges.append((f"b:{name}:1", hd, hs, "b"))
    return LabeledGraph(tuple(verts), tuple(edges), verts[0] if verts else "", ("a", "b"))


def theta_graph() -> LabeledGraph:
    """Two vertices joined by three edges: the smallest 3-valent graph."""
    return LabeledGraph(("p", "q"), tuple((f"e{i}", "p", "q", "a") for i in range(3)), "p")


def k4_graph() -> LabeledGraph:
    vs = ("0", "1", "2", "3")
    edges = tuple((f"e{i}{j}", vs[i], vs[j], "a") for i in range(4) for j in range(i + 1, 4))
    return LabeledGraph(vs, edges, "0")


def multigraph_automorphisms(g: LabeledGraph) -> int:
    """Automorphisms of the underlying undirected multigraph, counted on edges (brute force)."""
    from itertools import permutations

    edges = [(e[0], frozenset((e[1], e[2]))) for e in g.edges]
    count = 0
    for perm in permutations(g.vertices):
        vm = dict(zip(g.vertices, perm))
        # multiplicities must match; then the parallel edges can be permuted freely
        groups: dict = {}
        for _, ends in edges:
            groups[ends] = groups.get(ends, 0) + 1
        image: dict = {}
        for ends, mult in groups.items():
            image[frozenset(vm[x] for x in ends)] = mult
        if image == groups:
            ways = 1
            for mult in groups.values():
                for i in range(2, mult + 1):
                    ways *= i
            count += ways
    return count


def labeled_automorphism_count(g: LabeledGraph, oriented: Sequence[str] = ("b",)) -> int:
    """Label-preserving automorphisms of a modified graph, counted on vertices.

    Edges with labels in ``oriented`` must keep their direction; other labels
    are treated as undirected.  Counted with networkx's isomorphism matcher.
    """
    import networkx as nx
    from networkx.algorithms import isomorphism as iso

    d = nx.DiGraph()
    d.add_nodes_from(g.vertices)
    for _, src, dst, label in g.edges:
        pairs = [(src, dst)] if label in oriented else [(src, dst), (dst, src)]
        for p, q in pairs:
            if d.has_edge(p, q):
                d[p][q]["labels"] = tuple(sorted(d[p][q]["labels"] + (label,)))
            else:
                d.add_edge(p, q, labels=(label,))
    matcher = iso.DiGraphMatcher(d, d, edge_match=lambda x, y: x["labels"] == y["labels"])
    return sum(1 for _ in matcher.isomorphisms_iter())
