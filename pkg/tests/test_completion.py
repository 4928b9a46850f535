import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import circle_self_completion_sizes
from raagcube.canon import is_isomorphic
from raagcube.complex import CubeComplex, Edge, Subcomplex, circle, path, product, wedge_of_circles
from raagcube.completion import (
    canonical_completion,
    complete_circle,
    complete_general,
    complete_salvetti,
    complete_wedge,
    is_wall_injective,
    preimage,
    retraction_inclusion_is_identity,
    wall_projection,
    wall_projection_violations,
)
from raagcube.errors import InputError, PreconditionError
from raagcube.generators import random_wall_instance
from raagcube.graphs import cliques, complete_graph, cycle_graph
from raagcube.maps import CubicalMap, classify_map, identity_map, restrict_map
from raagcube.salvetti import BASE, build_salvetti, salvetti_edge, standard_torus
from strategies import graphs, rng_from, seeds

WEDGE = wedge_of_circles("ab")


def to_loop(dom, target=None):
    """Send every edge of a labeled graph to the loop with the same label."""
    target = circle(1, "a") if target is None else target
    by_label = {e.label: e.id for e in target.edges.values()}
    return CubicalMap(dom, target, {v: target.vertices[0] for v in dom.vertices},
                      {e.id: by_label[e.label] for e in dom.edges.values()})


def inclusion(k, sub):
    return restrict_map(identity_map(k), sub)


def check_result(res):
    cls = classify_map(res.covering)
    assert cls.covering
    assert retraction_inclusion_is_identity(res)


class TestCircleCase:
    def test_path_closes_up(self):
        res = complete_circle(to_loop(path(2, "a")))
        check_result(res)
        assert res.component_lengths() == [3]
        assert classify_map(res.covering).degree == 3
        (extra,) = set(res.complex.edges) - set(res.inclusion.domain.edges)
        assert res.retraction.emap[extra] == (-2, -1)

    def test_point(self):
        res = complete_circle(to_loop(CubeComplex([0], [])))
        check_result(res)
        assert len(res.complex.edges) == 1 and res.retraction.emap[1] == 0

    def test_circle_unchanged(self):
        res = complete_circle(to_loop(circle(4, "a")))
        assert len(res.complex.edges) == 4 and res.component_lengths() == [4]

    def test_wrong_target(self):
        with pytest.raises(PreconditionError):
            complete_circle(to_loop(path(1, "a"), WEDGE))

    def test_not_locally_injective(self):
        branch = CubeComplex([0, 1, 2], [Edge(1, 0, 1, "a"), Edge(2, 0, 2, "a")])
        with pytest.raises(PreconditionError):
            complete_circle(to_loop(branch))


class TestWedgeCase:
    def test_vertex(self):
        res = complete_wedge(to_loop(CubeComplex([0], []), WEDGE))
        check_result(res)
        assert is_isomorphic(res.complex, WEDGE)

    def test_a_circle(self):
        res = complete_wedge(to_loop(circle(2, "a"), WEDGE))
        check_result(res)
        b_edges = [e for e in res.complex.edges.values() if e.label == "b"]
        assert len(b_edges) == 2 and all(e.src == e.dst for e in b_edges)

    def test_identity(self):
        res = complete_wedge(identity_map(WEDGE))
        assert is_isomorphic(res.complex, WEDGE)

    def test_rejects_squares(self):
        k = build_salvetti(complete_graph(2))
        with pytest.raises(PreconditionError):
            complete_wedge(identity_map(k))


class TestSalvettiCase:
    def test_standard_torus(self):
        g = cycle_graph(5)
        s = build_salvetti(g)
        res = complete_salvetti(inclusion(s, standard_torus(g, ["1", "2"])))
        check_result(res)
        assert is_isomorphic(res.complex, s)

    def test_base_vertex(self):
        g = cycle_graph(5)
        s = build_salvetti(g)
        res = complete_salvetti(CubicalMap(CubeComplex([BASE], []), s, {BASE: BASE}, {}))
        assert is_isomorphic(res.complex, s)

    def test_product_lemma(self):
        b1, b2 = circle(2, "a"), circle(2, "b")
        x1, x2 = circle(1, "a"), circle(1, "b")
        x = product(x1, x2).complex
        b = product(b1, b2).complex
        by_label = {e.label: e.id for e in x.edges.values()}
        joint = complete_salvetti(CubicalMap(b, x, {v: x.vertices[0] for v in b.vertices},
                                             {e.id: by_label[e.label] for e in b.edges.values()}))
        check_result(joint)
        separate = product(complete_circle(to_loop(b1, x1)).complex, complete_circle(to_loop(b2, x2)).complex)
        assert is_isomorphic(joint.complex, separate.complex)

    @given(graphs(min_vertices=1, max_vertices=4), st.data())
    def test_random_subtorus(self, g, data):
        s = build_salvetti(g)
        delta = data.draw(st.sampled_from(cliques(g)))
        res = canonical_completion(inclusion(s, standard_torus(g, delta)))
        check_result(res)


class TestGeneralCase:
    @pytest.mark.parametrize("n,sizes", [(3, [3, 6]), (5, [5, 20])])
    def test_circle_into_itself(self, n, sizes):
        a = circle(n)
        res = complete_general(identity_map(a))
        check_result(res)
        assert res.component_lengths() == sizes
        assert len(res.main_component.vertices) == n

    @given(st.integers(1, 7))
    def test_size_law_against_sheets(self, n):
        res = complete_general(identity_map(circle(n)))
        assert res.component_lengths() == circle_self_completion_sizes(n)

    def test_identity_contains_target(self):
        k = product(circle(2, "a"), circle(3, "b")).complex
        res = complete_general(identity_map(k))
        check_result(res)
        assert is_isomorphic(res.complex.restrict(res.main_component), k)

    def test_requires_special(self):
        from test_hyperplanes import pinched_torus

        k = pinched_torus()
        with pytest.raises(PreconditionError):
            complete_general(identity_map(k))

    @given(seeds)
    def test_random_instances(self, seed):
        inst = random_wall_instance(rng_from(seed))
        res = complete_general(inclusion(inst.k, inst.a))
        check_result(res)
        assert classify_map(res.retraction).cubical


class TestWallProjection:
    def setup_method(self):
        self.g = cycle_graph(5)
        self.s = build_salvetti(self.g)

    def test_pentagon_tori(self):
        a = standard_torus(self.g, ["1", "2"])
        b = standard_torus(self.g, ["2", "3"])
        got = wall_projection(self.s, a, b)
        assert got.vertices == {BASE} and got.edges == {salvetti_edge(self.g, "2")} and not got.squares

    def test_no_shared_walls(self):
        a = standard_torus(self.g, ["1"])
        b = standard_torus(self.g, ["3", "4"])
        got = wall_projection(self.s, a, b)
        assert got.vertices == b.vertices and not got.edges

    def test_same(self):
        b = standard_torus(self.g, ["3", "4"])
        assert wall_projection(self.s, b, b) == b

    def test_not_a_subcomplex(self):
        with pytest.raises(InputError):
            wall_projection(self.s, Subcomplex(frozenset({"x"})), self.s.whole())

    @settings(max_examples=30)
    @given(seeds)
    def test_canonical_retraction_respects_projection(self, seed):
        inst = random_wall_instance(rng_from(seed))
        res = complete_general(inclusion(inst.k, inst.a))
        assert wall_projection_violations(res, inst.k, inst.a, inst.d) == []


class TestWallInjective:
    def test_standard_torus(self):
        g = cycle_graph(5)
        assert is_wall_injective(build_salvetti(g), standard_torus(g, ["1", "2"]))

    def test_two_lifts_of_one_circle(self):
        k = product(circle(1, "a"), circle(2, "b")).complex
        a_loops = [e for e in k.edges if k.label(e) == "a"]
        assert not is_wall_injective(k, k.full_subcomplex([], a_loops))
        assert is_wall_injective(k, k.full_subcomplex([], a_loops[:1]))

    def test_vertex(self):
        k = circle(3)
        assert is_wall_injective(k, k.full_subcomplex([0], []))


class TestPreimage:
    def test_preimage_of_edge(self):
        res = complete_general(identity_map(circle(3)))
        pre = preimage(res.covering, circle(3).full_subcomplex([], [1]))
        assert len(pre.edges) == 3
        assert all(res.covering.emap[e] in (1, -1) for e in pre.edges)
