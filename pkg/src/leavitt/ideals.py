"""Admissible pairs, their graded ideals, and the quotient graph compiler.

A pair (H, S) with H hereditary and saturated and S a set of breaking
vertices corresponds to the graded ideal generated by the vertices of H
together with ``v^H = v - sum(e e*)`` (sum over v's finitely many edges
escaping H) for v in S.  Membership is decided through the quotient graph:
the quotient algebra is graded isomorphic to the algebra of the quotient
graph, and an element lies in the ideal exactly when its image normalizes
to zero there.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import algebra as alg
from .errors import InputError
from .fields import QQ
from .graphs import (
    Cycle,
    Graph,
    breaking_vertices,
    classify_cycle,
    is_hereditary,
    is_saturated,
    root,
)


@dataclass(frozen=True)
class AdmissiblePair:
    H: frozenset
    S: frozenset

    def sort_key(self):
        return (sorted(self.H), sorted(self.S))

    def label(self):
        h = ",".join(sorted(self.H))
        s = ",".join(sorted(self.S))
        return f"({{{h}}},{{{s}}})"


def admissible_pair(g: Graph, H, S=()) -> AdmissiblePair:
    H = g.check_vertices(H)
    S = g.check_vertices(S)
    ok, witness = is_hereditary(g, H)
    if not ok:
        raise InputError(f"H not hereditary (witness {witness})")
    ok, witness = is_saturated(g, H)
    if not ok:
        raise InputError(f"H not saturated (witness {witness})")
    B = breaking_vertices(g, H)
    if not S <= B:
        raise InputError(f"S must be a subset of B_H = {sorted(B)}")
    return AdmissiblePair(H, S)


def is_proper(g: Graph, pair: AdmissiblePair) -> bool:
    return pair.H != g.vertices


def is_zero_pair(pair: AdmissiblePair) -> bool:
    return not pair.H and not pair.S


def enumerate_admissible_pairs(g: Graph) -> list:
    """Every (H, S), each exactly once, in deterministic order.

    Includes the zero pair and the improper pair H = E^0.
    """
    pairs = []
    verts = g.vertex_list
    for r in range(len(verts) + 1):
        for combo in itertools.combinations(verts, r):
            H = frozenset(combo)
            if not is_hereditary(g, H)[0] or not is_saturated(g, H)[0]:
                continue
            B = sorted(breaking_vertices(g, H))
            for k in range(len(B) + 1):
                for s_combo in itertools.combinations(B, k):
                    pairs.append(AdmissiblePair(H, frozenset(s_combo)))
    pairs.sort(key=AdmissiblePair.sort_key)
    return pairs


def ideal_generators(g: Graph, pair: AdmissiblePair, field=QQ) -> list:
    """The homogeneous generators: vertices of H and v^H for v in S."""
    pair = admissible_pair(g, pair.H, pair.S)
    gens = [alg.vertex(g, h, field) for h in sorted(pair.H)]
    for v in sorted(pair.S):
        gens.append(breaking_element(g, v, pair.H, field))
    return gens


def breaking_element(g: Graph, v: str, H, field=QQ) -> alg.AlgebraElement:
    """v^H = v - sum of e e* over v's edges into the complement of H."""
    H = g.check_vertices(H)
    out = alg.vertex(g, v, field)
    for e in g.out_edge_ids(v):
        if g.tgt(e) not in H:
            ee = alg.edge(g, e, field)
            out = out - ee * alg.star(ee)
    for b in g.out_bundle_ids(v):
        if g.tgt((b, 0)) not in H:
            raise InputError(
                f"{v!r} has infinitely many edges into the complement; v^H undefined"
            )
    return out


# ---------------------------------------------------------------------------
# Quotient graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientGraph:
    graph: Graph
    pair: AdmissiblePair
    primed_vertices: dict  # original -> primed id
    primed_edges: dict  # original edge/bundle id -> primed id

    @property
    def inherited_vertices(self):
        return sorted(self.graph.vertices - set(self.primed_vertices.values()))


def _primed(name: str) -> str:
    return name + "'"


def quotient_graph(g: Graph, pair: AdmissiblePair) -> QuotientGraph:
    """Drop H and everything pointing into it; double each unbroken breaking
    vertex v into a sink v' that receives primed copies of v's incoming
    edges."""
    pair = admissible_pair(g, pair.H, pair.S)
    H = pair.H
    unbroken = breaking_vertices(g, H) - pair.S

    vertices = [v for v in g.vertex_list if v not in H]
    primed_vertices = {v: _primed(v) for v in sorted(unbroken)}
    vertices.extend(primed_vertices.values())

    edges = {}
    bundles = {}
    primed_edges = {}
    for e, (src, tgt) in g.edges.items():
        if tgt in H:
            continue
        edges[e] = (src, tgt)
        if tgt in unbroken:
            primed_edges[e] = _primed(e)
            edges[_primed(e)] = (src, primed_vertices[tgt])
    for b, (src, tgt) in g.bundles.items():
        if tgt in H:
            continue
        bundles[b] = (src, tgt)
        if tgt in unbroken:
            primed_edges[b] = _primed(b)
            bundles[_primed(b)] = (src, primed_vertices[tgt])
    return QuotientGraph(Graph(vertices, edges, bundles), pair, primed_vertices, primed_edges)


def quotient_map(
    g: Graph, pair: AdmissiblePair, a: alg.AlgebraElement, qg: Optional[QuotientGraph] = None
) -> alg.AlgebraElement:
    """The canonical surjection with kernel I(H, S), in quotient normal form.

    Generator images: vertices of H and edges into H go to zero; an unbroken
    breaking vertex v maps to v + v', and an edge ranging at it to e + e'.
    """
    if qg is None:
        qg = quotient_graph(g, pair)
    q = qg.graph
    H = pair.H
    field = a.field

    def vertex_image(v):
        if v in H:
            return alg.zero(q, field)
        img = alg.vertex(q, v, field)
        if v in qg.primed_vertices:
            img = img + alg.vertex(q, qg.primed_vertices[v], field)
        return img

    def edge_image(ref):
        tgt = g.tgt(ref)
        if tgt in H:
            return alg.zero(q, field)
        if isinstance(ref, tuple):
            img = alg.edge(q, ref, field)
            if ref[0] in qg.primed_edges:
                img = img + alg.edge(q, (qg.primed_edges[ref[0]], ref[1]), field)
        else:
            img = alg.edge(q, ref, field)
            if ref in qg.primed_edges:
                img = img + alg.edge(q, qg.primed_edges[ref], field)
        return img

    def path_image(p):
        if p.is_vertex:
            return vertex_image(p.start)
        img = None
        for ref in p.steps:
            step = edge_image(ref)
            img = step if img is None else img * step
            if img.is_zero:
                return img
        return img

    total = alg.zero(q, field)
    for m, k in a.terms.items():
        img = path_image(m.p) * alg.star(path_image(m.q))
        total = total + img.scale(k)
    return total


def contains(g: Graph, pair: AdmissiblePair, a: alg.AlgebraElement) -> bool:
    """Ideal membership: true iff the quotient image normalizes to zero."""
    return quotient_map(g, pair, a).is_zero


# ---------------------------------------------------------------------------
# Laurent polynomials (for the non-graded primitive descriptors)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentPolynomial:
    """Finitely supported map exponent -> rational coefficient, normalized so
    the lowest term is 1 * x^0 (units are k x^n)."""

    coeffs: tuple  # ((exponent, Fraction), ...) sorted by exponent

    @property
    def degree(self) -> int:
        return self.coeffs[-1][0] if self.coeffs else 0

    @property
    def is_unit_monomial(self) -> bool:
        return len(self.coeffs) <= 1

    def __str__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for n, k in self.coeffs:
            var = "1" if n == 0 else ("x" if n == 1 else f"x^{n}")
            bits.append(f"{k}*{var}" if k != 1 or n == 0 else var)
        return " + ".join(bits)


def laurent(coeffs: dict) -> LaurentPolynomial:
    cleaned = {int(n): Fraction(k) for n, k in coeffs.items() if Fraction(k) != 0}
    if not cleaned:
        return LaurentPolynomial(())
    low = min(cleaned)
    unit = cleaned[low]
    shifted = tuple(sorted((n - low, k / unit) for n, k in cleaned.items()))
    return LaurentPolynomial(shifted)


def laurent_irreducible(f: LaurentPolynomial, assume_irreducible: bool = False):
    """Irreducibility over Q[x, 1/x]: exact for degree <= 3, else requires the
    explicit flag.  Units and unit monomials are never irreducible."""
    if f.is_unit_monomial:
        return False
    d = f.degree
    coeffs = dict(f.coeffs)
    if d == 1:
        return True
    if d in (2, 3):
        # Reducible over Q exactly when a linear factor (rational root) exists;
        # root 0 is excluded since the lowest term is the constant 1.
        scale = 1
        for _, k in f.coeffs:
            scale = scale * k.denominator // _gcd(scale, k.denominator)
        int_coeffs = {n: int(k * scale) for n, k in f.coeffs}
        p0, pl = abs(int_coeffs.get(0, 0)), abs(int_coeffs[d])
        for p in _divisors(p0):
            for q in _divisors(pl):
                for sign in (1, -1):
                    r = Fraction(sign * p, q)
                    if sum(k * r**n for n, k in f.coeffs) == 0:
                        return False
        return True
    if assume_irreducible:
        return True
    raise InputError(
        f"cannot decide irreducibility at degree {d} > 3; "
        "construct the descriptor with assume_irreducible=True"
    )


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n: int):
    n = abs(n)
    if n == 0:
        return [1]
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# Ideal descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedIdeal:
    pair: AdmissiblePair

    def label(self):
        return f"I{self.pair.label()}"


@dataclass(frozen=True)
class NonGradedPrimitiveIdeal:
    """I(H, B_H) + <f(c)> for an exclusive cycle c with R(c^0) = E^0 - H."""

    pair: AdmissiblePair
    cycle: Cycle
    poly: LaurentPolynomial
    assume_irreducible: bool = False

    def label(self):
        return f"I{self.pair.label()} + <({self.poly})(c={self.cycle})>"


def validate_descriptor(g: Graph, d):
    if isinstance(d, GradedIdeal):
        admissible_pair(g, d.pair.H, d.pair.S)
        return d
    if isinstance(d, NonGradedPrimitiveIdeal):
        pair = admissible_pair(g, d.pair.H, d.pair.S)
        if pair.S != breaking_vertices(g, pair.H):
            raise InputError("non-graded primitive descriptors need S = B_H")
        comp = g.vertices - pair.H
        cls = classify_cycle(g, d.cycle, comp)
        if not cls.exclusive:
            raise InputError("the cycle must be exclusive")
        if root(g, d.cycle.vertex_set) != comp:
            raise InputError("need E^0 - H = R(c^0)")
        if not laurent_irreducible(d.poly, d.assume_irreducible):
            raise InputError("f must be irreducible and not a unit monomial")
        return d
    raise InputError(f"not an ideal descriptor: {d!r}")
