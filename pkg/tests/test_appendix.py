import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raagcube.appendix import (
    DOUBLE_STEPS,
    GraphMap,
    InstanceNotFound,
    LabeledGraph,
    SearchConstraints,
    Word,
    build_Z_complex,
    certify_noncommuting,
    check_calculation,
    in_G1,
    in_G1_parity,
    k4_graph,
    labeled_automorphism_count,
    lift_closes,
    loops_at,
    multigraph_automorphisms,
    parity,
    paths_at,
    phi,
    phi_raw,
    replay_entry,
    search_instance,
    t3_to_t4_modification,
    theta_graph,
    trivial_double_cover_instance,
    verify_double,
)
from raagcube.errors import BoundExceeded, InputError, PreconditionError, ValidationError
from raagcube.hyperplanes import check_vh_links, validate_npc


@pytest.fixture(scope="module")
def inst():
    return search_instance()


def random_path(inst, rng, length):
    """A random reduced edge path from the base point of ``Y``."""
    options = list(paths_at(inst.Y, inst.Y.base, length))
    return rng.choice(options)


class TestWords:
    def test_parse_forms(self):
        assert Word.parse("ba").letters == (("b", 1), ("a", 1))
        assert Word.parse("a⁻¹ c") == Word.parse("a^-1 c") == Word.parse("a' c")
        assert str(Word.parse("b a^-1")) == "b a^-1"
        assert str(Word()) == "1"

    def test_parse_error(self):
        with pytest.raises(InputError):
            Word.parse("a ? b")

    def test_algebra(self):
        w = Word.parse("b a")
        assert (w**3).letters == w.letters * 3
        assert (w + w.inverse()).reduced() == Word()
        assert w ** -1 == w.inverse()

    def test_parity_examples(self):
        assert parity(Word.parse("ba")) == (1, 1, 0)
        assert parity(Word()) == (0, 0, 0)
        assert parity(Word.parse("a a^-1 c")) == (0, 0, 1)

    def test_parity_alphabet(self):
        with pytest.raises(InputError):
            parity(Word.parse("d"))

    @given(st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from((1, -1))), max_size=20))
    def test_parity_additive_and_reduction_invariant(self, letters):
        w = Word(tuple(letters))
        assert parity(w + w) == tuple(2 * x for x in parity(w))
        assert parity(w.reduced()) == parity(w)
        assert parity(w.inverse()) == tuple(-x for x in parity(w))


class TestInstance:
    def test_found_instance_shape(self, inst):
        assert len(inst.Y.vertices) == 2 and len(inst.Y.edges) == 3
        assert len(inst.X.vertices) == 4
        assert inst.f1.is_covering() and inst.f2.is_covering()
        assert inst.f1.emap != inst.f2.emap
        assert inst.Y.follow(inst.Y.base, inst.sigma) == inst.Y.base

    def test_iota_is_involution_fixing_b(self, inst):
        assert inst.iota["b"] == ("b", 1)
        assert inst.iota["a"][0] == "c" and inst.iota["c"][0] == "a"
        for x, (y, s) in inst.iota.items():
            z, t = inst.iota[y]
            assert z == x and s * t == 1

    def test_deterministic(self, inst):
        assert search_instance() == inst

    def test_wrong_edge_count(self):
        with pytest.raises(InstanceNotFound):
            search_instance(SearchConstraints(edge_count=4))

    def test_calculation_exhaustive(self, inst):
        rep = check_calculation(inst, 10)
        assert rep.ok, rep.first_failure
        assert rep.loops > 1000


class TestMembership:
    def test_sigma_outside(self, inst):
        assert in_G1(Word.parse("b a"), inst) is False

    def test_even_words(self, inst):
        assert in_G1_parity(Word.parse("b b"))
        assert in_G1(Word.parse("b a b a"), inst)
        assert in_G1(Word.parse("b b^-1"), inst)

    def test_mixed_loop(self, inst):
        assert in_G1(Word.parse("c b^-1"), inst)

    def test_not_a_loop(self, inst):
        with pytest.raises(PreconditionError):
            in_G1(Word.parse("b"), inst)

    def test_all_loops_agree(self, inst):
        for w in loops_at(inst.Y, inst.Y.base, 10):
            assert in_G1_parity(w) == lift_closes(inst, w)

    def test_invalid_instance_detected(self, inst):
        broken = replace(inst, f1=inst.f2)
        with pytest.raises(ValidationError):
            for w in loops_at(inst.Y, inst.Y.base, 6):
                in_G1(w, broken)


class TestPhi:
    def test_empty(self, inst):
        assert phi(Word(), 1, inst) == Word()

    def test_involution_on_random_words(self, inst):
        rng = random.Random(17)
        for _ in range(100):
            w = random_path(inst, rng, 12)
            assert phi_raw(w, 2, inst) == inst.iota_word(phi_raw(w, 1, inst))

    def test_squaring(self, inst):
        s = inst.sigma
        assert phi(s**2, 1, inst) == phi(s, 1, inst) + phi(s, 2, inst)

    def test_bad_which(self, inst):
        with pytest.raises(InputError):
            phi_raw(Word(), 3, inst)

    def test_lift_failure(self, inst):
        with pytest.raises(InputError):
            phi(Word.parse("a"), 1, inst)

    def test_phi_preserves_length(self, inst):
        for w in paths_at(inst.Y, inst.Y.base, 6):
            assert len(phi(w, 1, inst)) == len(w)


class TestDouble:
    def test_sigma(self, inst):
        check = verify_double(inst, inst.sigma)
        assert check.ok and len(check.steps) == len(DOUBLE_STEPS)

    @pytest.mark.parametrize("k", [1, 3, 5, 7])
    def test_odd_powers(self, inst, k):
        assert verify_double(inst, inst.sigma**k)

    def test_every_short_loop_outside(self, inst):
        count = 0
        for w in loops_at(inst.Y, inst.Y.base, 8):
            if lift_closes(inst, w):
                continue
            count += 1
            check = verify_double(inst, w)
            assert check.ok, (str(w), check.first_failure)
        assert count > 100

    def test_precondition(self, inst):
        with pytest.raises(PreconditionError):
            verify_double(inst, Word.parse("b a b a"))
        with pytest.raises(PreconditionError):
            verify_double(inst, Word.parse("b"))

    def test_other_second_covers_fail_a_step(self, inst):
        from itertools import product

        names = [e[0] for e in inst.X.edges]
        options = []
        for name in names:
            opts = []
            for t, _, _, _ in inst.Y.edges:
                for sign in (1, -1):
                    emap = dict(inst.f2.emap)
                    emap[name] = (t, sign)
                    if GraphMap(inst.X, inst.Y, inst.f2.vmap, emap).incidence_ok():
                        opts.append((t, sign))
            options.append(opts)
        failures = passes = 0
        for combo in product(*options):
            f2 = GraphMap(inst.X, inst.Y, inst.f2.vmap, dict(zip(names, combo)))
            if not f2.is_covering() or f2.emap == inst.f2.emap:
                continue
            check = verify_double(replace(inst, f2=f2), inst.sigma)
            if check.ok:
                passes += 1
                continue
            failures += 1
            assert check.steps[check.first_failure][1] is False
            assert all(ok for _, ok in check.steps[: check.first_failure])
        assert failures >= 5

class TestCertificate:
    def test_small_cases(self, inst):
        cert = certify_noncommuting(inst, 2, 1)
        by_mn = {(e.m, e.n): e for e in cert.entries}
        assert cert.complete
        assert by_mn[(1, 1)].m_used == 2
        e = by_mn[(2, 1)]
        assert (e.k, e.l, e.depth) == (1, 1, 2)

    def test_empty(self, inst):
        assert certify_noncommuting(inst, 0, 0).entries == ()

    def test_grid_up_to_four(self, inst):
        cert = certify_noncommuting(inst, 4, 4)
        assert cert.complete and len(cert.entries) == 16
        for e in cert.entries:
            assert e.depth_reached == e.depth
            assert e.iterates[-1].closed and sum(e.final_parity[1:]) % 2 == 1

    def test_replay(self, inst):
        cert = certify_noncommuting(inst, 2, 2)
        for e in cert.entries:
            if e.length <= 4096:
                assert replay_entry(inst, e)

    def test_cap(self, inst):
        with pytest.raises(BoundExceeded) as info:
            certify_noncommuting(inst, 4, 2, length_cap=64)
        partial = info.value.certificate
        assert not partial.complete
        assert any(e.depth_reached < e.depth for e in partial.entries)

    def test_negative_bounds(self, inst):
        with pytest.raises(InputError):
            certify_noncommuting(inst, -1, 1)


class TestZComplex:
    def test_vh(self, inst):
        z = build_Z_complex(inst)
        assert z.complex.cube_counts() == [4, 12, 9]
        assert check_vh_links(z.complex, z.partition)
        assert check_vh_links(z.complex)
        assert validate_npc(z.complex)

    def test_trivial_cover_fallback(self, inst):
        z = build_Z_complex(trivial_double_cover_instance(inst.Y))
        assert check_vh_links(z.complex)

    def test_empty(self, inst):
        empty = LabeledGraph((), (), "")
        with pytest.raises(InputError):
            build_Z_complex(replace(inst, X=empty, Y=empty))

    def test_non_cover(self, inst):
        emap = dict(inst.f2.emap)
        emap["a0"] = emap["a1"] = ("b", -1)
        emap["c0"] = emap["c1"] = ("b", -1)
        with pytest.raises(ValidationError):
            build_Z_complex(replace(inst, f2=GraphMap(inst.X, inst.Y, inst.f2.vmap, emap)))


class TestT3ToT4:
    def test_theta(self):
        g = theta_graph()
        t = t3_to_t4_modification(g)
        assert len(t.vertices) == 6
        assert all(t.degree(v) == 4 for v in t.vertices)
        assert labeled_automorphism_count(t) == multigraph_automorphisms(g) == 12

    def test_k4(self):
        g = k4_graph()
        t = t3_to_t4_modification(g)
        assert len(t.vertices) == 12
        assert all(t.degree(v) == 4 for v in t.vertices)
        assert labeled_automorphism_count(t) == multigraph_automorphisms(g) == 24

    def test_not_three_valent(self):
        g = LabeledGraph(("p", "q"), (("e", "p", "q", "a"),), "p")
        with pytest.raises(PreconditionError):
            t3_to_t4_modification(g)

    @settings(max_examples=10)
    @given(st.permutations(["0", "1", "2", "3"]))
    def test_relabeled_k4_same_count(self, perm):
        g = k4_graph()
        m = dict(zip(g.vertices, perm))
        h = LabeledGraph(g.vertices, tuple((n, m[s], m[d], x) for n, s, d, x in g.edges), g.base)
        assert labeled_automorphism_count(t3_to_t4_modification(h)) == 24
