"""Acceptance criteria 1-10.  Run with ``pytest tests/test_acceptance.py -s`` to see the verdict lines."""
import random
import time
from contextlib import contextmanager
from itertools import combinations

import pytest

from oracles import circle_self_completion_sizes, has_induced_4_cycle, star_rigid
from raagcube.appendix import (
    build_Z_complex,
    certify_noncommuting,
    check_calculation,
    lift_closes,
    loops_at,
    search_instance,
    verify_double,
)
from raagcube.canon import is_isomorphic
from raagcube.complex import circle, path, product, wedge_of_circles
from raagcube.completion import complete_circle, complete_general, complete_salvetti, wall_projection_violations
from raagcube.covers import cover_from_permutations, describe_cover, is_regular, regularize
from raagcube.generators import random_branched_complex, random_wall_instance
from raagcube.graphs import SimplicialGraph, find_induced_cycle, is_star_rigid, named_graphs
from raagcube.hyperplanes import INDIRECT, check_vh_links, is_directly_special, specialness, validate_npc
from raagcube.maps import CubicalMap, classify_map, identity_map, restrict_map
from raagcube.modified import core_length_violations, modified_completion, retraction_fixed_violations
from raagcube.salvetti import build_salvetti, ell_branched_torus_cover


@contextmanager
def criterion(name, budget=None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
    except BaseException:
        print(f"\ncriterion {name}: FAIL")
        raise
    print(f"\ncriterion {name}: PASS ({elapsed:.2f}s)")


def onto_loops(dom, target):
    """Send every edge of ``dom`` to the loop of ``target`` with the same label."""
    by_label = {e.label: e.id for e in target.edges.values()}
    return CubicalMap(dom, target, {v: target.vertices[0] for v in dom.vertices},
                      {e.id: by_label[e.label] for e in dom.edges.values()})


def inclusion(k, sub):
    return restrict_map(identity_map(k), sub)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_criterion_1_completion_size_law(n):
    with criterion(f"1 (n={n})", budget=1.0):
        res = complete_general(identity_map(circle(n, "v")))
        assert res.component_lengths() == [n, n * (n - 1)]
        assert res.component_lengths() == circle_self_completion_sizes(n)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_criterion_2_modified_completion_keeps_core_length(n):
    with criterion(f"2 (n={n})", budget=1.0):
        res = modified_completion(identity_map(circle(n, "v")))
        over_core = [c for c in res.components if c.edges & res.core_edges]
        assert over_core
        assert all(len(c.vertices) == n and len(c.edges) == n for c in over_core)
        assert core_length_violations(res) == []


def test_criterion_3_retraction_fixes_core_edges():
    with criterion(3):
        checked = violations = 0
        for seed in range(20):
            k = random_branched_complex(random.Random(seed))
            inst = random_wall_instance(random.Random(seed))
            for dom in (k, inst.k):
                assert len(dom.vertices) + len(dom.edges) + len(dom.squares) <= 60
                assert is_directly_special(dom)
            for res in (modified_completion(identity_map(k)), modified_completion(inclusion(inst.k, inst.a))):
                violations += len(retraction_fixed_violations(res))
                checked += sum(1 for e in res.core_edges
                               if isinstance(res.retraction.emap[e], int) and res.retraction.emap[e] != 0)
        assert checked > 0
        assert violations == 0


def test_criterion_4_wall_projection_containment():
    with criterion(4, budget=10.0):
        bad = 0
        for seed in range(50):
            inst = random_wall_instance(random.Random(1000 + seed))
            a = inclusion(inst.k, inst.a)
            bad += len(wall_projection_violations(complete_general(a), inst.k, inst.a, inst.d))
            bad += len(wall_projection_violations(modified_completion(a), inst.k, inst.a, inst.d))
        assert bad == 0


def test_criterion_5_specialness_ground_truth():
    with criterion(5):
        names = named_graphs()
        assert len(names) == 11
        for name, g in names.items():
            assert specialness(build_salvetti(g)).special, name
        rep = specialness(circle(1))
        assert rep.special and not rep.directly_special
        assert len(rep.hyperplanes) == 1 and rep.flags(1).self_osculation == INDIRECT


def random_graph(rng):
    n = rng.randint(0, 8)
    p = rng.random()
    vs = [f"v{i}" for i in range(n)]
    return SimplicialGraph.build(vs, [(a, b) for a, b in combinations(vs, 2) if rng.random() < p])


def test_criterion_6_graph_predicates_match_oracles():
    with criterion(6, budget=60.0):
        rng = random.Random(20240601)
        disagreements = 0
        for _ in range(1000):
            g = random_graph(rng)
            disagreements += (find_induced_cycle(g) is not None) != has_induced_4_cycle(g)
            disagreements += bool(is_star_rigid(g)) != star_rigid(g)
        assert disagreements == 0


PRODUCT_CASES = [
    # (B1, X1, B2, X2): each factor completes a graph into a circle
    (circle(2, "a"), circle(1, "a"), circle(2, "b"), circle(1, "b")),
    (circle(3, "a"), circle(1, "a"), path(2, "b"), circle(1, "b")),
    (path(3, "a"), circle(1, "a"), circle(1, "b"), circle(1, "b")),
]


@pytest.mark.parametrize("case", range(len(PRODUCT_CASES)))
def test_criterion_7_product_completion(case):
    b1, x1, b2, x2 = PRODUCT_CASES[case]
    with criterion(f"7 (case {case})"):
        b = product(b1, b2).complex
        x = product(x1, x2).complex
        joint = complete_salvetti(onto_loops(b, x))
        separate = product(complete_circle(onto_loops(b1, x1)).complex,
                           complete_circle(onto_loops(b2, x2)).complex).complex
        assert is_isomorphic(joint.complex, separate)


def test_criterion_7_general_product():
    with criterion("7 (general)"):
        b1, b2 = circle(3, "a"), circle(2, "b")
        joint = complete_general(identity_map(product(b1, b2).complex))
        separate = product(complete_general(identity_map(b1)).complex,
                           complete_general(identity_map(b2)).complex).complex
        assert is_isomorphic(joint.complex, separate)


def test_criterion_8_ell_covers():
    with criterion(8):
        labels = "abc"
        for size in (1, 2, 3):
            for delta in combinations(labels, size):
                for ell in (1, 2, 3, 4):
                    cls = classify_map(ell_branched_torus_cover(delta, ell))
                    assert cls.covering, (delta, ell, cls.reason)
                    assert cls.degree == ell ** size


@pytest.fixture(scope="module")
def appendix_instance():
    return search_instance()


def test_criterion_9_appendix_certificate(appendix_instance):
    with criterion(9, budget=300.0):
        inst = appendix_instance
        rep = check_calculation(inst, 10)
        assert rep.ok, rep.first_failure
        assert verify_double(inst, inst.sigma).ok
        outside = [w for w in loops_at(inst.Y, inst.Y.base, 8) if not lift_closes(inst, w)]
        assert outside and all(verify_double(inst, w).ok for w in outside)
        cert = certify_noncommuting(inst, 4, 4)
        assert cert.complete and len(cert.entries) == 16
        assert all(e.certified for e in cert.entries)
        z = build_Z_complex(inst)
        assert check_vh_links(z.complex, z.partition)
        assert validate_npc(z.complex)


def test_criterion_10_regularization():
    with criterion(10):
        wedge = wedge_of_circles("ab")
        cover = describe_cover(cover_from_permutations(wedge, {1: (1, 2, 0), 2: (1, 0, 2)}, 3))
        assert cover.degree == 3 and not is_regular(cover)
        reg = regularize(cover)
        assert reg.cover.degree == 6 and is_regular(reg.cover)
        cls = classify_map(reg.factor)
        assert cls.covering and cls.degree == 2
        assert is_isomorphic(reg.factor.codomain, cover.total)
