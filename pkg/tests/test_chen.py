import itertools
import random
from fractions import Fraction

import pytest

from leavitt import algebra as alg
from leavitt import chen
from leavitt.branching import ModuleVector, Truncation, act, check_axioms
from leavitt.catalog import G1, G2, G3, G4, G5, G6
from leavitt.errors import InputError, WindowOverflow
from leavitt.graphs import (
    enumerate_cycles,
    enumerate_paths,
    make_path,
    rational_tail,
    root,
    vertex_path,
)
from leavitt.ideals import GradedIdeal, NonGradedPrimitiveIdeal, admissible_pair

T = Truncation(5, 2)

C1 = enumerate_cycles(G1)[0]
C3 = [c for c in enumerate_cycles(G3) if "v" in c.vertex_set][0]
C6 = enumerate_cycles(G6)[0]


class TestRed:
    def test_full_strip(self):
        e = make_path(G1, "v", ["e"])
        x = chen.red(G1, C1, "v", e, e)
        assert x.p.is_vertex and x.q.is_vertex

    def test_fixed_point(self):
        ee = make_path(G1, "v", ["e", "e"])
        x = chen.red(G1, C1, "v", ee, vertex_path("v"))
        assert x == chen.red(G1, C1, "v", x.p, x.q)

    def test_two_cycle_strip(self):
        f = make_path(G6, "v", ["f"])
        x = chen.red(G6, C6, "v", f, f)
        assert x.p.is_vertex and x.p.start == "v"

    def test_degree_preserved(self):
        for k in range(3):
            q = C3.rotate_to("v").walk_from("v", k)
            for p in enumerate_paths(G3, 4, 2, end=q.end):
                x = chen.red(G3, C3, "v", p, q)
                assert x.degree == len(p) - len(q)

    def test_q_escaping_cycle_rejected(self):
        e = make_path(G3, "u", ["e"])
        with pytest.raises(InputError):
            chen.red(G3, C3, "v", e, e)  # q = e is not inside the loop

    def test_range_mismatch_rejected(self):
        with pytest.raises(InputError):
            chen.red(G3, C3, "v", vertex_path("u"), vertex_path("v"))


class TestIrrationalRule:
    def test_word_expansion(self):
        c0, c1 = enumerate_cycles(G4, 2)
        rule = chen.irrational_rule(G4, c0, c1)
        word = [rule.edge_at(i) for i in range(1, 13)]
        b0, b1 = ("b", 0), ("b", 1)
        assert word == [b0, b1, b0, b0, b1, b1, b0, b0, b0, b1, b1, b1]

    def test_g5_word(self):
        d, e = enumerate_cycles(G5)
        rule = chen.irrational_rule(G5, d, e)
        word = [rule.edge_at(i) for i in range(1, 7)]
        assert word == ["d", "e", "d", "d", "e", "e"]

    def test_validation(self):
        with pytest.raises(InputError):
            chen.irrational_rule(G4, enumerate_cycles(G4)[0], enumerate_cycles(G4)[0])
        with pytest.raises(InputError):
            chen.irrational_rule(G6, C6, C1)


class TestDescriptors:
    def test_nc_requires_exclusive(self):
        d5 = enumerate_cycles(G5)[0]
        with pytest.raises(InputError):
            chen.nc_module(G5, d5, "v")

    def test_nc_requires_vertex_on_cycle(self):
        with pytest.raises(InputError):
            chen.nc_module(G3, C3, "u")

    def test_sink_requires_sink(self):
        with pytest.raises(InputError):
            chen.sink_module(G2, "v")

    def test_emitter_subtypes(self):
        assert chen.inf_emitter_module(G4, "v").subtype == "infinite"
        assert chen.inf_emitter_module(G2, "v").subtype == "in_B_H"
        # u's single ordinary edge leaves R(u) = {u}, so no returns at all
        assert chen.inf_emitter_module(G3, "u").subtype == "empty"

    def test_emitter_empty_subtype(self):
        from leavitt.graphs import Graph

        g = Graph(["a", "b"], bundles={"b0": ("a", "b")})
        assert chen.inf_emitter_module(g, "a").subtype == "empty"

    def test_vertex_reading_never_infinite(self):
        # the stricter reading cannot see the infinitely many returns of G4
        assert chen.emitter_subtype(G4, "v", "vertex") == "in_B_H"
        assert chen.emitter_subtype(G4, "v", "edge") == "infinite"

    def test_subtype_matches_breaking_membership(self):
        from leavitt.graphs import breaking_vertices

        for g in (G2, G3, G4):
            for v in g.vertex_list:
                if not g.is_infinite_emitter(v):
                    continue
                d = chen.inf_emitter_module(g, v)
                H = g.vertices - root(g, [v])
                assert (d.subtype == "in_B_H") == (v in breaking_vertices(g, H))

    def test_rational_spec_must_be_canonical(self):
        bad = chen.RationalTailSpec(make_path(G1, "v", ["e"]), C1)
        with pytest.raises(InputError):
            chen.valpha_module(G1, bad)


class TestNcSystems:
    def test_g1_basis_one_per_degree(self):
        sys = chen.build_module(G1, chen.nc_module(G1, C1, "v"))
        basis = list(sys.enumerate(Truncation(3, 1)))
        degrees = sorted(sys.degree(x) for x in basis)
        assert degrees == list(range(-3, 4))

    def test_axiom_report_green(self):
        for g, c, v in [(G1, C1, "v"), (G3, C3, "v"), (G6, C6, "v"), (G6, C6, "w")]:
            sys = chen.build_module(g, chen.nc_module(g, c, v))
            rep = check_axioms(sys, T)
            assert rep.axioms_1_to_4 and rep.perfect and rep.saturated and rep.graded

    def test_cycle_edge_fiber_equals_source_fiber(self):
        sys = chen.build_module(G3, chen.nc_module(G3, C3, "v"))
        for x in sys.enumerate(T):
            assert sys.member_edge(x, "c") == sys.member_vertex(x, "v")

    def test_ghost_action_identities(self):
        for g, c in [(G1, C1), (G3, C3), (G6, C6)]:
            rep = chen.ghost_action_check(g, chen.nc_module(g, c, "v"), Truncation(4, 2))
            assert rep.passed and rep.checked > 0

    def test_basepoint_partition(self):
        # windowed bases over the two basepoints of the 2-cycle are disjoint
        # and jointly cover the both-basepoints pair set
        t = Truncation(4, 1)
        parts = {}
        for v in ("v", "w"):
            sys = chen.build_module(G6, chen.nc_module(G6, C6, v))
            parts[v] = {(x.p, x.q) for x in sys.enumerate(t)}
        assert not (parts["v"] & parts["w"])


class TestAnnihilators:
    def test_nc_g3_paper_value(self):
        d = chen.nc_module(G3, C3, "v")
        assert chen.annihilator(G3, d) == GradedIdeal(
            admissible_pair(G3, ["w"], ["u"])
        )

    def test_emitter_g4_zero(self):
        d = chen.inf_emitter_module(G4, "v")
        assert chen.annihilator(G4, d) == GradedIdeal(admissible_pair(G4, []))

    def test_valpha_g4_zero(self):
        c0, c1 = enumerate_cycles(G4, 2)
        d = chen.valpha_module(G4, chen.irrational_rule(G4, c0, c1))
        assert chen.annihilator(G4, d) == GradedIdeal(admissible_pair(G4, []))

    def test_sink_g2_zero(self):
        d = chen.sink_module(G2, "w")
        assert chen.annihilator(G2, d) == GradedIdeal(admissible_pair(G2, []))

    def test_emitter_in_bh_drops_vertex(self):
        d = chen.inf_emitter_module(G2, "v")
        assert chen.annihilator(G2, d) == GradedIdeal(admissible_pair(G2, ["w"]))

    def test_rational_exclusive_tail_nongraded(self):
        spec = rational_tail(G1, vertex_path("v"), C1)
        d = chen.valpha_module(G1, spec)
        ann = chen.annihilator(G1, d)
        assert isinstance(ann, NonGradedPrimitiveIdeal)
        assert ann.pair == admissible_pair(G1, [])
        gens = chen.annihilator_generators(G1, d)
        assert [str(x) for x in gens] == ["v - e"]

    def test_nc_vs_sink_annihilators_differ(self):
        c2 = enumerate_cycles(G2)[0]
        d1 = chen.nc_module(G2, c2, "v")
        d2 = chen.sink_module(G2, "w")
        rep = chen.distinctness_report(G2, d1, d2)
        assert not rep.same_annihilator


class TestDecomposeAndRecover:
    def _sys(self, g, c, v="v"):
        d = chen.nc_module(g, c, v)
        return d, chen.build_module(g, d)

    def test_single_block(self):
        d, sys = self._sys(G1, C1)
        x = next(iter(sys.enumerate(Truncation(2, 1))))
        blocks = chen.homogeneous_decompose(G1, d, ModuleVector.unit(x))
        assert len(blocks) == 1
        assert blocks[0].k == 1

    def test_blocks_split_by_prefix(self):
        d, sys = self._sys(G3, C3)
        by_str = {str(x): x for x in sys.enumerate(T)}
        vec = ModuleVector(
            terms={by_str["ec"]: Fraction(2), by_str["cc"]: Fraction(3)}
        )
        blocks = chen.homogeneous_decompose(G3, d, vec)
        assert [str(b.t) for b in blocks] == ["v", "e"]
        assert [b.k for b in blocks] == [3, 2]
        for b in blocks:
            # collapsed form reassembles the basis element
            assert b.t.concat(b.collapsed.p) == b.basis.p
            assert b.collapsed.q == b.basis.q

    def test_reduction_collapse_sums_coefficients(self):
        # two formal pairs with the same prefix reduce to one basis element,
        # so their coefficients land in a single block
        d, sys = self._sys(G1, C1)
        e = make_path(G1, "v", ["e"])
        x1 = chen.red(G1, C1, "v", e, e)  # reduces to the bare vertex
        x2 = chen.red(G1, C1, "v", vertex_path("v"), vertex_path("v"))
        assert x1 == x2
        vec = ModuleVector.unit(x1).scale(2) + ModuleVector.unit(x2).scale(3)
        blocks = chen.homogeneous_decompose(G1, d, vec)
        assert len(blocks) == 1
        assert blocks[0].k == 5

    def test_inhomogeneous_rejected(self):
        d, sys = self._sys(G1, C1)
        xs = sorted(sys.enumerate(Truncation(2, 1)), key=sys.degree)
        vec = ModuleVector.unit(xs[0]) + ModuleVector.unit(xs[-1])
        with pytest.raises(InputError):
            chen.homogeneous_decompose(G1, d, vec)
        with pytest.raises(InputError):
            chen.recover_generator(G1, d, vec, T)

    def test_monomial_case(self):
        d, sys = self._sys(G1, C1)
        e2 = {str(x): x for x in sys.enumerate(T)}["ee"]
        w = chen.recover_generator(G1, d, ModuleVector.unit(e2), T)
        assert str(w.carrier) == "e* e*"

    def test_identity_witness(self):
        d, sys = self._sys(G1, C1)
        w = chen.recover_generator(G1, d, ModuleVector.unit(sys.basis_vertex()), T)
        assert w.carrier == alg.vertex(G1, "v")

    def test_random_vectors_all_recover(self):
        rng = random.Random(18)
        for g, c, v in [(G1, C1, "v"), (G3, C3, "v"), (G6, C6, "w")]:
            d, sys = self._sys(g, c, v)
            by_degree = {}
            for x in sys.enumerate(T):
                by_degree.setdefault(sys.degree(x), []).append(x)
            for _ in range(60):
                deg = rng.choice(sorted(by_degree))
                elems = by_degree[deg]
                support = rng.sample(elems, k=min(len(elems), rng.randint(1, 3)))
                vec = ModuleVector(
                    terms={x: Fraction(rng.choice([-2, -1, 1, 2])) for x in support}
                )
                w = chen.recover_generator(g, d, vec, T)
                target = ModuleVector.unit(
                    chen.ReducedPair(vertex_path(v), vertex_path(v))
                )
                assert act(sys, w.carrier, vec, T) == target


class TestShiftIso:
    def test_requires_two_vertices(self):
        with pytest.raises(InputError):
            chen.shift_iso(G1, C1, "v", "v")
        with pytest.raises(InputError):
            chen.shift_iso(G6, C6, "v", "u")

    def test_degree_shift_minus_one(self):
        iso = chen.shift_iso(G6, C6, "v", "w")
        assert iso.n == 1
        rep = chen.verify_shift_iso(iso, T)
        assert rep.passed
        assert rep.degree_shift_ok and rep.mapped > 0

    def test_forward_examples(self):
        iso = chen.shift_iso(G6, C6, "v", "w")
        # the trivial element at w maps to the pure ghost f*
        x = chen.ReducedPair(vertex_path("w"), vertex_path("w"))
        y = iso.forward(x)
        assert str(y) == "f*"
        assert iso.inverse(y) == x
        # gf at w (path into w) strips against the arc
        gf = make_path(G6, "w", ["g", "f"])
        x2 = chen.ReducedPair(gf, vertex_path("w"))
        y2 = iso.forward(x2)
        assert str(y2) == "g"
        assert iso.inverse(y2) == x2

    def test_intertwines_both_directions(self):
        iso = chen.shift_iso(G6, C6, "w", "v")
        rep = chen.verify_shift_iso(iso, T, rng=random.Random(0), element_samples=30)
        assert rep.passed


class TestNonSimplicityRegression:
    def test_proper_nongraded_submodule_of_single_loop_module(self):
        """The vector v - e generates a proper submodule: the windowed span
        of its orbit never contains the basis vertex (so the module is not
        simple, and the submodule is not graded)."""
        d = chen.nc_module(G1, C1, "v")
        sys = chen.build_module(G1, d)
        t = Truncation(5, 1)
        basis = sorted(sys.enumerate(t), key=sys.degree)
        index = {x: i for i, x in enumerate(basis)}
        e_elt = {str(x): x for x in basis}["e"]
        x0 = ModuleVector.unit(sys.basis_vertex()) - ModuleVector.unit(e_elt)

        span = []
        paths = list(enumerate_paths(G1, 3, 1))
        for p, q in itertools.product(paths, paths):
            a = alg.monomial(G1, p, q)
            try:
                vec = act(sys, a, x0, t)
            except WindowOverflow:
                continue
            if not vec.is_zero:
                span.append(vec)

        # Gaussian elimination over the rationals
        rows = []
        for vec in span:
            row = [Fraction(0)] * len(basis)
            for x, k in vec.terms.items():
                row[index[x]] = k
            rows.append(row)
        target = [Fraction(0)] * len(basis)
        target[index[sys.basis_vertex()]] = Fraction(1)

        pivots = {}
        for row in rows:
            row = row[:]
            for col, prow in pivots.items():
                if row[col]:
                    f = row[col]
                    row = [a - f * b for a, b in zip(row, prow)]
            lead = next((i for i, val in enumerate(row) if val), None)
            if lead is not None:
                row = [val / row[lead] for val in row]
                pivots[lead] = row
        # reduce the target by the span
        residue = target[:]
        for col, prow in pivots.items():
            if residue[col]:
                f = residue[col]
                residue = [a - f * b for a, b in zip(residue, prow)]
        assert any(residue), "basis vertex must stay outside the submodule span"


class TestNonSimplicityViaClassifier:
    def test_cyclic_module_annihilators_never_primitive(self):
        # graded simple but not simple: the annihilator is graded primitive
        # yet fails primitivity (exclusive-cycle case with S = B_H)
        from leavitt import classify as cls

        for g, c, v in [(G1, C1, "v"), (G3, C3, "v"), (G6, C6, "v")]:
            d = chen.nc_module(g, c, v)
            ann = chen.annihilator(g, d)
            record = cls.classify_graded_ideal(g, ann.pair)
            assert record.graded_primitive
            assert not record.primitive
            assert record.case.case == "3d"


class TestDistinctness:
    def test_same_cycle_different_basepoints(self):
        d1 = chen.nc_module(G6, C6, "v")
        d2 = chen.nc_module(G6, C6, "w")
        rep = chen.distinctness_report(G6, d1, d2)
        assert rep.same_annihilator
        assert rep.isomorphic == "yes"
        assert rep.graded_isomorphic == "no"

    def test_identical(self):
        d1 = chen.nc_module(G6, C6, "v")
        rep = chen.distinctness_report(G6, d1, d1)
        assert rep.isomorphic == "yes" and rep.graded_isomorphic == "yes"

    def test_nc_vs_chen_never_isomorphic(self):
        d1 = chen.nc_module(G2, enumerate_cycles(G2)[0], "v")
        d2 = chen.sink_module(G2, "w")
        rep = chen.distinctness_report(G2, d1, d2)
        assert rep.isomorphic == "no"

    def test_g4_valpha_vs_emitter(self):
        c0, c1 = enumerate_cycles(G4, 2)
        d1 = chen.valpha_module(G4, chen.irrational_rule(G4, c0, c1))
        d2 = chen.inf_emitter_module(G4, "v")
        rep = chen.distinctness_report(G4, d1, d2)
        assert rep.same_annihilator and rep.isomorphic == "no"

    def test_undecided_cases(self):
        d1 = chen.sink_module(G2, "w")
        d2 = chen.inf_emitter_module(G2, "v")
        rep = chen.distinctness_report(G2, d1, d2)
        assert rep.isomorphic == "not_decided"


class TestVAlphaSystems:
    def test_rational_single_loop(self):
        spec = rational_tail(G1, vertex_path("v"), C1)
        sys = chen.build_module(G1, chen.valpha_module(G1, spec))
        basis = list(sys.enumerate(Truncation(4, 1)))
        assert len(basis) == 1
        rep = check_axioms(sys, Truncation(4, 1))
        assert rep.axioms_1_to_4 and rep.perfect and rep.saturated
        assert not rep.graded

    def test_rational_g3(self):
        spec = rational_tail(G3, vertex_path("v"), C3)
        sys = chen.build_module(G3, chen.valpha_module(G3, spec))
        rep = check_axioms(sys, Truncation(4, 2))
        assert rep.axioms_1_to_4 and rep.perfect and rep.saturated
        names = {str(x) for x in sys.enumerate(Truncation(2, 2))}
        assert "v(c)^inf" in names and "e(c)^inf" in names

    def test_irrational_graded(self):
        c0, c1 = enumerate_cycles(G4, 2)
        rule = chen.irrational_rule(G4, c0, c1)
        sys = chen.build_module(G4, chen.valpha_module(G4, rule))
        rep = check_axioms(sys, Truncation(3, 2))
        assert rep.axioms_1_to_4 and rep.perfect and rep.saturated and rep.graded

    def test_irrational_canonical_forms(self):
        d, e = enumerate_cycles(G5)
        rule = chen.irrational_rule(G5, d, e)
        sys = chen.build_module(G5, chen.valpha_module(G5, rule))
        elems = list(sys.enumerate(Truncation(3, 1)))
        assert len(elems) == len(set(elems))
        for x in elems:
            assert sys._canonical(x.q, x.m) == x
