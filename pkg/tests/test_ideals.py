import random

import pytest

from leavitt import algebra as alg
from leavitt import ideals as idl
from leavitt.catalog import CATALOG, G1, G2, G3, G4, random_graph
from leavitt.errors import InputError
from leavitt.graphs import (
    Graph,
    breaking_vertices,
    enumerate_cycles,
    enumerate_paths,
    is_downwards_directed,
    root,
)


def pair(g, H, S=()):
    return idl.admissible_pair(g, H, S)


class TestAdmissiblePairs:
    def test_enumeration_g1(self):
        labels = [p.label() for p in idl.enumerate_admissible_pairs(G1)]
        assert labels == ["({},{})", "({v},{})"]

    def test_enumeration_g2(self):
        labels = [p.label() for p in idl.enumerate_admissible_pairs(G2)]
        assert labels == ["({},{})", "({v,w},{})", "({w},{})", "({w},{v})"]

    def test_enumeration_g4(self):
        labels = [p.label() for p in idl.enumerate_admissible_pairs(G4)]
        assert labels == ["({},{})", "({v},{})"]

    def test_validation(self):
        with pytest.raises(InputError):
            pair(G3, ["u"])  # not hereditary
        with pytest.raises(InputError):
            pair(G2, ["w"], ["w"])  # S not inside B_H

    def test_flags(self):
        z = pair(G2, [])
        assert idl.is_zero_pair(z) and idl.is_proper(G2, z)
        full = pair(G2, ["v", "w"])
        assert not idl.is_proper(G2, full)

    def test_no_duplicates_random(self):
        rng = random.Random(11)
        for _ in range(25):
            g = random_graph(rng)
            pairs = idl.enumerate_admissible_pairs(g)
            assert len(pairs) == len(set(pairs))


class TestGenerators:
    def test_g2(self):
        gens = idl.ideal_generators(G2, pair(G2, ["w"], ["v"]))
        assert [str(x) for x in gens] == ["w", "v - c c*"]

    def test_g3_paper(self):
        gens = idl.ideal_generators(G3, pair(G3, ["w"], ["u"]))
        assert [str(x) for x in gens] == ["w", "u - e e*"]

    def test_zero_pair(self):
        assert idl.ideal_generators(G2, pair(G2, [])) == []

    def test_breaking_element_rejects_infinite(self):
        with pytest.raises(InputError):
            idl.breaking_element(G4, "v", frozenset())


class TestQuotientGraph:
    def test_g2_unbroken(self):
        qg = idl.quotient_graph(G2, pair(G2, ["w"]))
        assert qg.graph.vertex_list == ("v", "v'")
        assert qg.graph.edges == {"c": ("v", "v"), "c'": ("v", "v'")}
        assert qg.graph.bundles == {}
        assert qg.primed_vertices == {"v": "v'"}
        assert qg.primed_edges == {"c": "c'"}

    def test_g2_broken(self):
        qg = idl.quotient_graph(G2, pair(G2, ["w"], ["v"]))
        assert qg.graph.vertex_list == ("v",)
        assert qg.graph.edges == {"c": ("v", "v")}
        assert qg.primed_vertices == {}

    def test_zero_pair_identity(self):
        for g in CATALOG.values():
            qg = idl.quotient_graph(g, pair(g, []))
            assert qg.graph == g

    def test_primed_are_sinks(self):
        rng = random.Random(12)
        for _ in range(40):
            g = random_graph(rng)
            for p in idl.enumerate_admissible_pairs(g):
                qg = idl.quotient_graph(g, p)
                for primed in qg.primed_vertices.values():
                    assert qg.graph.is_sink(primed)

    def test_bundle_into_unbroken_vertex_gets_primed_copy(self):
        g = Graph(
            ["h", "u", "x"],
            edges={"e": ("u", "x"), "f": ("x", "u")},
            bundles={"bb": ("x", "u"), "b2": ("u", "h")},
        )
        p = pair(g, ["h"])  # B_H = {u}, S empty
        qg = idl.quotient_graph(g, p)
        assert qg.primed_vertices == {"u": "u'"}
        assert qg.graph.bundles == {"bb": ("x", "u"), "bb'": ("x", "u'")}
        assert ("f", "f'") in qg.graph.edges.items() or qg.graph.edges["f'"] == ("x", "u'")
        img = idl.quotient_map(g, p, alg.edge(g, ("bb", 0)))
        assert img == alg.edge(qg.graph, ("bb", 0)) + alg.edge(qg.graph, ("bb'", 0))

    def test_vertex_count_formula(self):
        rng = random.Random(13)
        for _ in range(40):
            g = random_graph(rng)
            for p in idl.enumerate_admissible_pairs(g):
                qg = idl.quotient_graph(g, p)
                B = breaking_vertices(g, p.H)
                assert len(qg.graph.vertices) == len(g.vertices - p.H) + len(B - p.S)


class TestQuotientMap:
    def test_generator_dies(self):
        uH = alg.vertex(G3, "u") - alg.edge(G3, "e") * alg.star(alg.edge(G3, "e"))
        assert idl.quotient_map(G3, pair(G3, ["w"], ["u"]), uH).is_zero

    def test_unbroken_vertex_survives_as_prime(self):
        vH = alg.vertex(G2, "v") - alg.edge(G2, "c") * alg.star(alg.edge(G2, "c"))
        img = idl.quotient_map(G2, pair(G2, ["w"]), vH)
        qg = idl.quotient_graph(G2, pair(G2, ["w"]))
        assert img == alg.vertex(qg.graph, "v'")
        assert not img.is_zero

    def test_zero_pair_is_identity(self):
        rng = random.Random(14)
        for g in (G1, G2, G3):
            paths = list(enumerate_paths(g, 2, 2))
            for _ in range(10):
                p = rng.choice(paths)
                q = rng.choice([x for x in paths if x.end == p.end])
                a = alg.monomial(g, p, q, coeff=rng.choice([1, 2, -1]))
                assert idl.quotient_map(g, pair(g, []), a) == a

    def test_degree_preserved(self):
        p = pair(G2, ["w"])
        a = alg.edge(G2, "c")
        img = idl.quotient_map(G2, p, a)
        assert alg.degree(img) == 1

    def test_star_algebra_homomorphism(self):
        rng = random.Random(31)
        for _ in range(12):
            g = random_graph(rng, 4, 6, 1)
            pairs = idl.enumerate_admissible_pairs(g)
            paths = list(enumerate_paths(g, 2, 2))
            by_end = {}
            for q in paths:
                by_end.setdefault(q.end, []).append(q)

            def rand_elt():
                out = alg.zero(g)
                for _ in range(rng.randint(1, 2)):
                    x = rng.choice(paths)
                    y = rng.choice(by_end[x.end])
                    out = out + alg.monomial(g, x, y, coeff=rng.choice([-1, 1, 2]))
                return out

            for _ in range(4):
                p = rng.choice(pairs)
                qg = idl.quotient_graph(g, p)
                a, b = rand_elt(), rand_elt()
                pi = lambda x: idl.quotient_map(g, p, x, qg)
                assert pi(a * b) == pi(a) * pi(b)
                assert pi(a + b) == pi(a) + pi(b)
                assert pi(alg.star(a)) == alg.star(pi(a))


class TestContains:
    def test_pinned(self):
        vH = alg.vertex(G2, "v") - alg.edge(G2, "c") * alg.star(alg.edge(G2, "c"))
        assert idl.contains(G2, pair(G2, ["w"], ["v"]), vH)
        assert not idl.contains(G2, pair(G2, ["w"]), vH)
        assert idl.contains(G2, pair(G2, ["w"]), alg.zero(G2))

    def test_generators_inside_vertices_outside(self):
        for g in CATALOG.values():
            for p in idl.enumerate_admissible_pairs(g):
                for gen in idl.ideal_generators(g, p):
                    assert idl.contains(g, p, gen)
                for v in sorted(g.vertices - p.H):
                    assert not idl.contains(g, p, alg.vertex(g, v))

    def test_two_sided_closure(self):
        rng = random.Random(15)
        paths3 = list(enumerate_paths(G3, 3, 2))
        p = pair(G3, ["w"], ["u"])
        gens = idl.ideal_generators(G3, p)
        for _ in range(25):
            a = rng.choice(gens)
            x = rng.choice(paths3)
            y = rng.choice([z for z in paths3 if z.end == x.end])
            r = alg.monomial(G3, x, y, coeff=rng.choice([1, -2, 3]))
            assert idl.contains(G3, p, a + rng.choice(gens))
            assert idl.contains(G3, p, r * a)
            assert idl.contains(G3, p, a * r)


class TestQuotientDirectedness:
    def test_finite_lemma_restatement(self):
        rng = random.Random(16)
        graphs = list(CATALOG.values()) + [random_graph(rng) for _ in range(40)]
        for g in graphs:
            for p in idl.enumerate_admissible_pairs(g):
                qg = idl.quotient_graph(g, p)
                lhs = is_downwards_directed(qg.graph, qg.graph.vertices)[0]
                comp = g.vertices - p.H
                missing = breaking_vertices(g, p.H) - p.S
                rhs = is_downwards_directed(g, comp)[0] and (
                    not missing
                    or (
                        len(missing) == 1
                        and root(g, [next(iter(missing))]) == comp
                    )
                )
                assert lhs == rhs, (g.edges, g.bundles, p.label())


class TestLaurent:
    def test_normalization(self):
        f = idl.laurent({-2: 3, -1: -3})
        # lowest term scaled to 1 x^0
        assert f.coeffs == ((0, 1), (1, -1))

    def test_unit_monomial(self):
        assert idl.laurent({5: 7}).is_unit_monomial
        assert not idl.laurent_irreducible(idl.laurent({5: 7}))

    def test_degree_one(self):
        assert idl.laurent_irreducible(idl.laurent({0: -1, 1: 1}))

    def test_quadratics(self):
        assert idl.laurent_irreducible(idl.laurent({0: 1, 2: 1}))  # x^2 + 1
        assert not idl.laurent_irreducible(idl.laurent({0: -1, 2: 1}))  # (x-1)(x+1)
        assert idl.laurent_irreducible(idl.laurent({0: -2, 2: 1}))  # x^2 - 2

    def test_cubics(self):
        assert idl.laurent_irreducible(idl.laurent({0: 2, 3: 1}))  # x^3 + 2
        assert not idl.laurent_irreducible(idl.laurent({0: 1, 1: 1, 2: 1, 3: 1}))

    def test_high_degree_needs_flag(self):
        f = idl.laurent({0: 1, 4: 1})
        with pytest.raises(InputError):
            idl.laurent_irreducible(f)
        assert idl.laurent_irreducible(f, assume_irreducible=True)


class TestDescriptors:
    def test_graded_descriptor_roundtrip(self):
        d = idl.GradedIdeal(pair(G2, ["w"], ["v"]))
        assert idl.validate_descriptor(G2, d) == d
        assert d.label() == "I({w},{v})"

    def test_nongraded_validation(self):
        (c,) = enumerate_cycles(G1)
        good = idl.NonGradedPrimitiveIdeal(
            pair(G1, []), c, idl.laurent({0: 1, 1: 1})
        )
        assert idl.validate_descriptor(G1, good) == good
        with pytest.raises(InputError):
            idl.validate_descriptor(
                G1,
                idl.NonGradedPrimitiveIdeal(pair(G1, []), c, idl.laurent({1: 1})),
            )

    def test_nongraded_requires_root_match(self):
        c3 = [c for c in enumerate_cycles(G3) if "v" in c.vertex_set][0]
        with pytest.raises(InputError):
            # wrong H: the complement of {} is not R(c^0)
            idl.validate_descriptor(
                G3,
                idl.NonGradedPrimitiveIdeal(
                    pair(G3, []), c3, idl.laurent({0: 1, 1: 1})
                ),
            )
