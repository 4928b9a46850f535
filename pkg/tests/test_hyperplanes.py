import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import parallel_classes
from raagcube.complex import CubeComplex, Edge, circle, disjoint_union, product, wedge_of_circles
from raagcube.errors import BoundExceeded, InputError, PreconditionError
from raagcube.generators import random_branched_complex
from raagcube.graphs import SimplicialGraph, complete_graph, cycle_graph, named_graphs
from raagcube.hyperplanes import (
    DIRECT,
    INDIRECT,
    NONE,
    NOT_APPLICABLE,
    check_locally_salvetti,
    check_vh_links,
    crossing_pairs,
    gamma_components,
    hyperplane_of_edge,
    hyperplanes,
    intersection_graph,
    is_directly_special,
    is_locally_convex,
    is_special,
    label_graph,
    specialness,
    validate_npc,
)
from raagcube.salvetti import build_salvetti, salvetti_edge, standard_torus
from strategies import branched_tori, graphs, rng_from, seeds


def two_squares_on_a_corner():
    # both squares contain the path p -> q -> r
    edges = [
        Edge(1, "p", "q"), Edge(2, "q", "r"),
        Edge(3, "s", "r"), Edge(4, "p", "s"),
        Edge(5, "t", "r"), Edge(6, "p", "t"),
    ]
    return CubeComplex("pqrst", edges, [(1, 2, -3, -4), (1, 2, -5, -6)])


def mobius_band():
    # opposite sides read as the same edge in the same direction
    return CubeComplex("pq", [Edge(1, "p", "q"), Edge(2, "q", "p"), Edge(3, "q", "p")], [(1, 2, 1, 3)])


def folded_square():
    return CubeComplex([0], [Edge(1, 0, 0)], [(1, 1, -1, -1)])


def pinched_torus():
    # a square p, q, p, s: the two hyperplanes cross at p and also meet there without a corner
    edges = [Edge(1, "p", "q", "a"), Edge(2, "p", "s", "b"), Edge(3, "q", "p", "b"), Edge(4, "s", "p", "a")]
    return CubeComplex("pqs", edges, [(1, 3, -4, -2)])


def generated(seed):
    return random_branched_complex(rng_from(seed))


class TestNPC:
    def test_torus(self):
        assert validate_npc(build_salvetti(complete_graph(2)))

    def test_two_squares_on_consecutive_edges(self):
        verdict = validate_npc(two_squares_on_a_corner())
        assert not verdict
        assert verdict.vertex == "q" and verdict.link

    def test_wedge(self):
        assert validate_npc(wedge_of_circles("ab"))

    def test_link_clique_above_dimension_bound(self):
        k = build_salvetti(complete_graph(3))
        assert validate_npc(k)
        with pytest.raises(BoundExceeded):
            validate_npc(k, max_dim=2)

    def test_folded_square(self):
        assert not validate_npc(folded_square())

    @given(graphs(max_vertices=5))
    def test_salvetti_complexes(self, g):
        assert validate_npc(build_salvetti(g))

    @given(seeds)
    def test_generated(self, seed):
        assert validate_npc(generated(seed))


class TestHyperplanes:
    def test_pentagon(self):
        g = cycle_graph(5)
        k = build_salvetti(g)
        hs = hyperplanes(k)
        assert len(hs) == 5
        ig = intersection_graph(k, hs)
        relabel = {str(salvetti_edge(g, v)): v for v in g.vertices}
        assert {frozenset(relabel[x] for x in e) for e in ig.edges} == set(g.edges)

    def test_one_edge_circle(self):
        (h,) = hyperplanes(circle(1))
        assert h.two_sided and h.embedded and h.edges == {1}

    def test_torus(self):
        k = build_salvetti(complete_graph(2))
        assert len(hyperplanes(k)) == 2
        assert crossing_pairs(k) == {(1, 2)}

    def test_mobius_band_is_one_sided(self):
        hs = {h.id: h for h in hyperplanes(mobius_band())}
        assert not hs[1].two_sided and hs[1].embedded
        assert hs[2].edges == {2, 3} and hs[2].two_sided

    def test_folded_square_is_not_embedded(self):
        (h,) = hyperplanes(folded_square())
        assert not h.embedded

    def test_ids_are_smallest_edges(self):
        k = product(circle(3, "a"), circle(2, "b")).complex
        for h in hyperplanes(k):
            assert h.id == min(h.edges)

    @given(seeds)
    def test_partition_matches_oracle(self, seed):
        k = generated(seed)
        hs = hyperplanes(k)
        assert {h.edges for h in hs} == parallel_classes(k)
        of = hyperplane_of_edge(hs)
        for e in k.edges:
            assert of[e] is of[min(of[e].edges)]

    @given(branched_tori())
    def test_label_constant(self, bt):
        k = bt.complex
        for h in hyperplanes(k):
            assert len({k.label(e) for e in h.edges}) == 1 and h.label is not None

    @given(graphs(max_vertices=6))
    def test_crossing_labels_adjacent_in_salvetti(self, g):
        k = build_salvetti(g)
        for a, b in crossing_pairs(k):
            assert g.adjacent(k.label(a), k.label(b))

    @given(seeds)
    def test_crossing_labels_adjacent_in_covers(self, seed):
        k = generated(seed)
        g = label_graph(k)
        for a, b in crossing_pairs(k):
            assert g.adjacent(k.label(a), k.label(b))


class TestSpecialness:
    def test_one_edge_circle_is_indirect(self):
        rep = specialness(circle(1))
        assert rep.special and not rep.directly_special
        assert rep.flags(1).self_osculation == INDIRECT

    def test_two_edge_circle_is_directly_special(self):
        rep = specialness(circle(2))
        assert rep.directly_special
        assert rep.flags(1).self_osculation == NONE

    def test_fixed_salvetti_complexes(self):
        names = named_graphs()
        for name in ("K1", "K2", "P3", "C5"):
            assert is_special(build_salvetti(names[name])), name

    @given(graphs(max_vertices=6))
    def test_every_salvetti_complex_is_special(self, g):
        k = build_salvetti(g)
        assert check_locally_salvetti(k, g)
        assert is_special(k)

    def test_mobius_band_not_special(self):
        rep = specialness(mobius_band())
        assert not rep.special
        assert rep.flags(1).self_osculation == NOT_APPLICABLE

    def test_folded_square_not_special(self):
        rep = specialness(folded_square())
        assert not rep.special and not rep.flags(1).embedded

    def test_direct_self_osculation(self):
        # two edges leaving the same vertex, made parallel by a square elsewhere
        k = CubeComplex("pqrs", [Edge(1, "p", "q"), Edge(2, "r", "s"), Edge(3, "q", "s"), Edge(4, "p", "r")],
                        [(1, 3, -2, -4)])
        glued = CubeComplex("pqs", [Edge(1, "p", "q"), Edge(2, "p", "s"), Edge(3, "q", "s"), Edge(4, "p", "p")],
                            [(1, 3, -2, -4)])
        assert is_directly_special(k)
        rep = specialness(glued)
        assert rep.flags(1).self_osculation == DIRECT and not rep.special

    def test_interosculation(self):
        rep = specialness(pinched_torus())
        assert rep.interosculating == ((1, 2),)
        assert not rep.special

    @given(seeds)
    def test_directly_special_implies_special(self, seed):
        rep = specialness(generated(seed))
        assert rep.directly_special and rep.special

    @given(graphs(max_vertices=5))
    def test_verdict_matches_flags(self, g):
        for k in (build_salvetti(g), product(circle(2, "a"), circle(1, "b")).complex):
            rep = specialness(k)
            clause = all(f.two_sided and f.embedded and f.self_osculation != DIRECT for f in rep.hyperplanes)
            assert rep.special == (clause and not rep.interosculating)


class TestGammaComponents:
    def test_pentagon_edge_gives_standard_torus(self):
        g = cycle_graph(5)
        k = build_salvetti(g)
        sub = g.induced({"1", "2"})
        (comp,) = gamma_components(k, sub, g)
        assert comp == standard_torus(g, {"1", "2"})

    def test_empty_subgraph_gives_vertices(self):
        k = circle(3, "a")
        comps = gamma_components(k, SimplicialGraph.build([]))
        assert sorted(c.vertices for c in comps) == sorted(frozenset({v}) for v in k.vertices)
        assert all(not c.edges for c in comps)

    def test_two_disjoint_circles(self):
        k, _ = disjoint_union([circle(2, "a"), circle(3, "a")])
        assert len(gamma_components(k, SimplicialGraph.build(["a"]))) == 2

    def test_drops_components_missing_a_label(self):
        k, _ = disjoint_union([circle(2, "a"), product(circle(1, "a"), circle(1, "b")).complex])
        g = SimplicialGraph.build("ab", [("a", "b")])
        assert len(gamma_components(k, g)) == 1

    def test_not_induced(self):
        g = complete_graph(3)
        sub = SimplicialGraph.build(["1", "2"])
        with pytest.raises(InputError):
            gamma_components(build_salvetti(g), sub, g)

    def test_unlabeled(self):
        with pytest.raises(PreconditionError):
            gamma_components(circle(2), SimplicialGraph.build(["a"]))

    @given(seeds, st.data())
    def test_components_disjoint_and_convex(self, seed, data):
        k = generated(seed)
        g = label_graph(k)
        chosen = data.draw(st.sets(st.sampled_from(g.vertices)))
        comps = gamma_components(k, g.induced(chosen), g)
        for i, a in enumerate(comps):
            assert is_locally_convex(k, a)
            for b in comps[i + 1:]:
                assert not (a.vertices & b.vertices)


class TestLocalConvexity:
    def setup_method(self):
        self.k = build_salvetti(complete_graph(2))

    def test_single_edge(self):
        assert is_locally_convex(self.k, self.k.full_subcomplex([], [1]))

    def test_vertex(self):
        sub = self.k.full_subcomplex(self.k.vertices, [])
        assert is_locally_convex(self.k, sub)

    def test_corner_without_square(self):
        from raagcube.complex import Subcomplex

        sub = Subcomplex(frozenset(self.k.vertices), frozenset({1, 2}))
        assert not is_locally_convex(self.k, sub)

    def test_torus_edge_pair_in_bigger_torus(self):
        k = product(circle(2, "a"), circle(2, "b")).complex
        a_edges = [e for e in k.edges if k.label(e) == "a"]
        comp = k.components(a_edges)[0]
        assert is_locally_convex(k, comp)


class TestLocallySalvetti:
    def test_salvetti(self):
        g = cycle_graph(5)
        assert check_locally_salvetti(build_salvetti(g), g)

    def test_double_cover_of_torus(self):
        k = product(circle(2, "a"), circle(1, "b")).complex
        assert check_locally_salvetti(k, SimplicialGraph.build("ab", [("a", "b")]))

    def test_wedge_of_same_label(self):
        assert not check_locally_salvetti(wedge_of_circles("aa"), SimplicialGraph.build(["a"]))

    def test_missing_square(self):
        g = SimplicialGraph.build("ab", [("a", "b")])
        assert not check_locally_salvetti(wedge_of_circles("ab"), g)

    def test_unlabeled(self):
        with pytest.raises(PreconditionError):
            check_locally_salvetti(circle(1), SimplicialGraph.build(["a"]))


class TestVH:
    def test_torus(self):
        assert check_vh_links(build_salvetti(complete_graph(2)))

    def test_wedge(self):
        assert not check_vh_links(wedge_of_circles("ab"))

    def test_product_of_circles(self):
        assert check_vh_links(product(circle(3, "a"), circle(2, "b")).complex)

    def test_cubes_rejected(self):
        with pytest.raises(PreconditionError):
            check_vh_links(build_salvetti(complete_graph(3)))

    def test_pinched_torus(self):
        assert not check_vh_links(pinched_torus())
