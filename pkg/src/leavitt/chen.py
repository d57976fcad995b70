"""Concrete graded module families over a Leavitt path algebra.

Five branching-system families live here: infinite-path modules (rational
and irrational tails), sink modules, the three infinite-emitter module
subtypes, and the cyclic modules N_c built from an exclusive cycle via the
reduction calculus on pairs p.q* whose ghost part runs inside the cycle.
Each family knows its exact annihilator as an admissible pair (or, for a
rational tail ending in an exclusive cycle, a non-graded descriptor); the
branching engine verifies those formulas on bounded windows.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Optional, Union

from . import algebra as alg
from .branching import BranchingSystem, ModuleVector, Truncation, act
from .errors import InputError, InternalCheckError, WindowOverflow
from .fields import QQ
from .graphs import (
    Cycle,
    Graph,
    Path,
    RationalTailSpec,
    breaking_vertices,
    check_cycle,
    classify_cycle,
    enumerate_paths,
    is_bundle_ref,
    make_path,
    rational_tail,
    ref_str,
    root,
    vertex_path,
)
from .ideals import (
    GradedIdeal,
    NonGradedPrimitiveIdeal,
    admissible_pair,
    ideal_generators,
    laurent,
)


# ---------------------------------------------------------------------------
# The reduction calculus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReducedPair:
    """Basis element p.q* of an N_c system: q runs inside the cycle from the
    chosen basepoint, and p does not end with q's last edge."""

    p: Path
    q: Path

    @property
    def degree(self) -> int:
        return len(self.p) - len(self.q)

    def __str__(self):
        real = "" if self.p.is_vertex else str(self.p)
        ghost = "".join(f"{ref_str(s)}*" for s in reversed(self.q.steps))
        if real and ghost:
            return f"{real}{ghost}"
        return real or ghost or self.p.start


def _check_inside_cycle(cycle_at_v: Cycle, q: Path):
    if q.start != cycle_at_v.base:
        raise InputError(f"q must start at the basepoint {cycle_at_v.base!r}")
    if q.steps != cycle_at_v.walk_from(cycle_at_v.base, len(q)).steps:
        raise InputError("q escapes the cycle")


def red(g: Graph, cycle: Cycle, v: str, p: Path, q: Path) -> ReducedPair:
    """The unique reduced representative of p.q*: strip matching final edges.

    Degree-preserving and idempotent.  Requires r(p) = r(q) and q inside the
    cycle starting at v.
    """
    cycle_at_v = cycle.rotate_to(v)
    _check_inside_cycle(cycle_at_v, q)
    if p.end != q.end:
        raise InputError("p and q must share their range")
    while p.steps and q.steps and p.steps[-1] == q.steps[-1]:
        p = p.drop_last()
        q = q.drop_last()
    return ReducedPair(p, q)


# ---------------------------------------------------------------------------
# Irrational tail rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IrrationalRule:
    """A finitely described irrational infinite path: two distinct cycles
    through one pivot, interleaved as c d c c d d c c c d d d ...

    The word is aperiodic, so the path is irrational; its vertex support is
    just the two cycles' vertices.
    """

    c: Cycle  # both rotated to the shared pivot
    d: Cycle

    @property
    def pivot(self) -> str:
        return self.c.base

    @property
    def vertex_support(self) -> frozenset:
        return self.c.vertex_set | self.d.vertex_set

    def edge_at(self, i: int):
        """The i-th edge of the path, 1-indexed."""
        if i < 1:
            raise InputError("edge positions are 1-indexed")
        nc, nd = len(self.c), len(self.d)
        k = 1
        while i > k * (nc + nd):
            i -= k * (nc + nd)
            k += 1
        if i <= k * nc:
            return self.c.steps[(i - 1) % nc]
        j = i - k * nc
        return self.d.steps[(j - 1) % nd]

    def vertex_at(self, m: int) -> str:
        """The vertex reached after m edges (the source of edge m + 1)."""
        nc, nd = len(self.c), len(self.d)
        i = m + 1
        k = 1
        while i > k * (nc + nd):
            i -= k * (nc + nd)
            k += 1
        if i <= k * nc:
            return self.c.sources[(i - 1) % nc]
        j = i - k * nc
        return self.d.sources[(j - 1) % nd]

    def prefix(self, length: int) -> Path:
        """The initial segment of the path, as a finite Path."""
        verts = [self.pivot]
        steps = []
        for i in range(1, length + 1):
            steps.append(self.edge_at(i))
            verts.append(self.vertex_at(i))
        return Path(tuple(verts), tuple(steps))

    def __str__(self):
        return f"({self.c})({self.d})({self.c})^2({self.d})^2..."


def irrational_rule(g: Graph, c: Cycle, d: Cycle) -> IrrationalRule:
    c = check_cycle(g, c).canonical()
    d = check_cycle(g, d).canonical()
    if c == d:
        raise InputError("the two cycles must be distinct")
    shared = c.vertex_set & d.vertex_set
    if not shared:
        raise InputError("the two cycles must share a vertex")
    pivot = min(shared)
    return IrrationalRule(c.rotate_to(pivot), d.rotate_to(pivot))


def _validate_rule(g: Graph, rule: IrrationalRule) -> IrrationalRule:
    check_cycle(g, rule.c)
    check_cycle(g, rule.d)
    if rule.c.base != rule.d.base:
        raise InputError("rule cycles must be rotated to a shared pivot")
    if rule.c == rule.d:
        raise InputError("the two cycles must be distinct")
    return rule


# ---------------------------------------------------------------------------
# Module descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VAlphaModule:
    """Infinite-path module; the tail is a rational cycle-repeat or an
    irrational two-cycle interleaving rule."""

    tail: Union[RationalTailSpec, IrrationalRule]

    @property
    def rational(self) -> bool:
        return isinstance(self.tail, RationalTailSpec)

    @property
    def vertex_support(self) -> frozenset:
        return self.tail.vertex_support

    def label(self):
        return f"V[{self.tail}]"


@dataclass(frozen=True)
class SinkModule:
    v: str

    def label(self):
        return f"N_{self.v} (sink)"


@dataclass(frozen=True)
class InfEmitterModule:
    v: str
    subtype: str  # empty | in_B_H | infinite

    def label(self):
        tag = {"empty": "0", "in_B_H": "B", "infinite": "inf"}[self.subtype]
        return f"N_{self.v}[{tag}]"


@dataclass(frozen=True)
class NcModule:
    cycle: Cycle
    v: str

    def label(self):
        return f"N_{self.cycle}^{self.v}"


ModuleDescriptor = Union[VAlphaModule, SinkModule, InfEmitterModule, NcModule]


def emitter_subtype(g: Graph, v: str, reading: str = "edge") -> str:
    """Classify an infinite emitter by its returns into R(v).

    The default ``edge`` reading counts edges from v back into R(v):
    a bundle back in means ``infinite``, no edge back means ``empty``,
    otherwise ``in_B_H``.  The stricter ``vertex`` reading counts target
    vertices instead; on a finite graph it can never say ``infinite``,
    which is why it is not the default.
    """
    if not g.is_infinite_emitter(v):
        raise InputError(f"{v!r} is not an infinite emitter")
    R = root(g, [v])
    if reading == "edge":
        if any(g.tgt((b, 0)) in R for b in g.out_bundle_ids(v)):
            return "infinite"
        if any(g.tgt(e) in R for e in g.out_edge_ids(v)):
            return "in_B_H"
        return "empty"
    if reading == "vertex":
        targets = g.successors(v) & R
        return "in_B_H" if targets else "empty"
    raise InputError(f"unknown reading {reading!r}")


def return_edge_count(g: Graph, v: str) -> Optional[int]:
    """Number of edges from v back into R(v); None when infinite."""
    R = root(g, [v])
    if any(g.tgt((b, 0)) in R for b in g.out_bundle_ids(v)):
        return None
    return sum(1 for e in g.out_edge_ids(v) if g.tgt(e) in R)


def nc_module(g: Graph, cycle: Cycle, v: str) -> NcModule:
    cls = classify_cycle(g, cycle, g.vertices)
    if not cls.exclusive:
        raise InputError(f"cycle {cycle} is not exclusive")
    if v not in cycle.vertex_set:
        raise InputError(f"{v!r} is not on the cycle")
    return NcModule(cycle.canonical(), v)


def sink_module(g: Graph, v: str) -> SinkModule:
    if not g.is_sink(v):
        raise InputError(f"{v!r} is not a sink")
    return SinkModule(v)


def inf_emitter_module(g: Graph, v: str, reading: str = "edge") -> InfEmitterModule:
    return InfEmitterModule(v, emitter_subtype(g, v, reading))


def valpha_module(g: Graph, tail) -> VAlphaModule:
    if isinstance(tail, RationalTailSpec):
        canon = rational_tail(g, tail.prefix, tail.cycle)
        if canon != tail:
            raise InputError("rational tail spec is not in canonical form")
        return VAlphaModule(canon)
    if isinstance(tail, IrrationalRule):
        return VAlphaModule(_validate_rule(g, tail))
    raise InputError(f"not a tail spec: {tail!r}")


def validate_module(g: Graph, d: ModuleDescriptor) -> ModuleDescriptor:
    if isinstance(d, NcModule):
        return nc_module(g, d.cycle, d.v)
    if isinstance(d, SinkModule):
        return sink_module(g, d.v)
    if isinstance(d, InfEmitterModule):
        fresh = inf_emitter_module(g, d.v)
        if fresh.subtype != d.subtype:
            raise InputError(
                f"subtype mismatch for {d.v!r}: stored {d.subtype}, "
                f"recomputed {fresh.subtype}"
            )
        return fresh
    if isinstance(d, VAlphaModule):
        return valpha_module(g, d.tail)
    raise InputError(f"not a module descriptor: {d!r}")


# ---------------------------------------------------------------------------
# Branching systems per family
# ---------------------------------------------------------------------------


class NcBranchingSystem(BranchingSystem):
    """Reduced pairs p.q* with the reduction-twisted prepend action."""

    graded = True

    def __init__(self, g: Graph, cycle: Cycle, v: str):
        self.graph = g
        self.cycle = cycle.canonical()
        self.v = v
        self.cycle_at_v = self.cycle.rotate_to(v)
        self._cycle_edges = set(self.cycle.steps)

    def basis_vertex(self) -> ReducedPair:
        return ReducedPair(vertex_path(self.v), vertex_path(self.v))

    def red(self, p: Path, q: Path) -> ReducedPair:
        return red(self.graph, self.cycle, self.v, p, q)

    def enumerate(self, t: Truncation):
        for k in range(t.max_path_length + 1):
            q = self.cycle_at_v.walk_from(self.v, k)
            for p in enumerate_paths(
                self.graph, t.max_path_length, t.bundle_sample, end=q.end
            ):
                if p.steps and q.steps and p.steps[-1] == q.steps[-1]:
                    continue
                yield ReducedPair(p, q)

    def in_window(self, x: ReducedPair, t: Truncation) -> bool:
        if len(x.p) > t.max_path_length or len(x.q) > t.max_path_length:
            return False
        return all(
            not is_bundle_ref(s) or s[1] < t.bundle_sample for s in x.p.steps
        )

    def member_vertex(self, x: ReducedPair, v: str) -> bool:
        return x.p.start == v

    def member_edge(self, x: ReducedPair, ref) -> bool:
        if ref in self._cycle_edges:
            return x.p.start == self.graph.src(ref)
        return bool(x.p.steps) and x.p.steps[0] == ref

    def sigma(self, ref, x: ReducedPair) -> ReducedPair:
        e_path = make_path(self.graph, self.graph.src(ref), [ref])
        return self.red(e_path.concat(x.p), x.q)

    def sigma_inv(self, ref, x: ReducedPair) -> ReducedPair:
        if x.p.steps:
            if x.p.steps[0] != ref:
                raise InputError("element is not in this edge fiber")
            return self.red(x.p.drop_first(), x.q)
        # pure ghost q*: only the cycle edge at r(q) acts, growing the ghost
        if ref not in self._cycle_edges or self.graph.src(ref) != x.q.end:
            raise InputError("element is not in this edge fiber")
        step = make_path(self.graph, self.graph.src(ref), [ref])
        return ReducedPair(vertex_path(self.graph.tgt(ref)), x.q.concat(step))

    def degree(self, x: ReducedPair) -> int:
        return x.degree


class PathEndingSystem(BranchingSystem):
    """Paths ending at a fixed vertex: the sink and infinite-emitter modules."""

    graded = True

    def __init__(self, g: Graph, v: str):
        self.graph = g
        self.v = v

    def enumerate(self, t: Truncation):
        yield from enumerate_paths(
            self.graph, t.max_path_length, t.bundle_sample, end=self.v
        )

    def in_window(self, x: Path, t: Truncation) -> bool:
        if len(x) > t.max_path_length:
            return False
        return all(not is_bundle_ref(s) or s[1] < t.bundle_sample for s in x.steps)

    def member_vertex(self, x: Path, v: str) -> bool:
        return x.start == v

    def member_edge(self, x: Path, ref) -> bool:
        return bool(x.steps) and x.steps[0] == ref

    def sigma(self, ref, x: Path) -> Path:
        return Path((self.graph.src(ref),) + x.vertices, (ref,) + x.steps)

    def sigma_inv(self, ref, x: Path) -> Path:
        if not x.steps or x.steps[0] != ref:
            raise InputError("element is not in this edge fiber")
        return x.drop_first()

    def degree(self, x: Path) -> int:
        return len(x)


class RationalTailSystem(BranchingSystem):
    """Paths tail-equivalent to c^infinity, in canonical (prefix, rotation)
    form.  A branching system but not graded."""

    graded = False

    def __init__(self, g: Graph, spec: RationalTailSpec):
        self.graph = g
        self.spec = spec
        self.cycle = spec.cycle

    def enumerate(self, t: Truncation):
        for w in sorted(self.cycle.vertex_set):
            cyc_w = self.cycle.rotate_to(w)
            entering = cyc_w.edge_into(w)
            for p in enumerate_paths(
                self.graph, t.max_path_length, t.bundle_sample, end=w
            ):
                if p.steps and p.steps[-1] == entering:
                    continue
                yield RationalTailSpec(p, cyc_w)

    def in_window(self, x: RationalTailSpec, t: Truncation) -> bool:
        if len(x.prefix) > t.max_path_length:
            return False
        return all(
            not is_bundle_ref(s) or s[1] < t.bundle_sample for s in x.prefix.steps
        )

    def member_vertex(self, x: RationalTailSpec, v: str) -> bool:
        return x.prefix.start == v

    def member_edge(self, x: RationalTailSpec, ref) -> bool:
        return x.first_edge() == ref

    def sigma(self, ref, x: RationalTailSpec) -> RationalTailSpec:
        step = make_path(self.graph, self.graph.src(ref), [ref])
        return rational_tail(self.graph, step.concat(x.prefix), x.cycle)

    def sigma_inv(self, ref, x: RationalTailSpec) -> RationalTailSpec:
        if x.first_edge() != ref:
            raise InputError("element is not in this edge fiber")
        if x.prefix.steps:
            return rational_tail(self.graph, x.prefix.drop_first(), x.cycle)
        nxt = self.graph.tgt(ref)
        return RationalTailSpec(vertex_path(nxt), x.cycle.rotate_to(nxt))


@dataclass(frozen=True)
class TailElement:
    """A path tail-equivalent to an irrational rule path: a finite prepend q
    followed by the rule path shifted m edges, with m minimal."""

    q: Path
    m: int

    def __str__(self):
        base = f"shift^{self.m}(alpha)"
        return base if self.q.is_vertex else f"{self.q}.{base}"


class IrrationalTailSystem(BranchingSystem):
    graded = True

    def __init__(self, g: Graph, rule: IrrationalRule):
        self.graph = g
        self.rule = rule

    def _canonical(self, q: Path, m: int) -> TailElement:
        while m >= 1 and q.steps and q.steps[-1] == self.rule.edge_at(m):
            q = q.drop_last()
            m -= 1
        return TailElement(q, m)

    def enumerate(self, t: Truncation):
        for m in range(t.max_path_length + 1):
            anchor = self.rule.vertex_at(m)
            for q in enumerate_paths(
                self.graph, t.max_path_length, t.bundle_sample, end=anchor
            ):
                if m >= 1 and q.steps and q.steps[-1] == self.rule.edge_at(m):
                    continue
                yield TailElement(q, m)

    def in_window(self, x: TailElement, t: Truncation) -> bool:
        if len(x.q) > t.max_path_length or x.m > t.max_path_length:
            return False
        return all(
            not is_bundle_ref(s) or s[1] < t.bundle_sample for s in x.q.steps
        )

    def member_vertex(self, x: TailElement, v: str) -> bool:
        return x.q.start == v

    def member_edge(self, x: TailElement, ref) -> bool:
        if x.q.steps:
            return x.q.steps[0] == ref
        return self.rule.edge_at(x.m + 1) == ref

    def sigma(self, ref, x: TailElement) -> TailElement:
        step = make_path(self.graph, self.graph.src(ref), [ref])
        return self._canonical(step.concat(x.q), x.m)

    def sigma_inv(self, ref, x: TailElement) -> TailElement:
        if not self.member_edge(x, ref):
            raise InputError("element is not in this edge fiber")
        if x.q.steps:
            return self._canonical(x.q.drop_first(), x.m)
        return TailElement(vertex_path(self.rule.vertex_at(x.m + 1)), x.m + 1)

    def degree(self, x: TailElement) -> int:
        return len(x.q) - x.m


@dataclass(frozen=True)
class NaivePair:
    """Formal p.q* pair without the shared-range requirement; the historical
    non-example whose axiom (4) fails."""

    p: Path
    q: Path

    def __str__(self):
        return f"({self.p}).({self.q})*"


class NaivePairSystem(BranchingSystem):
    """All pairs p.q* with s(q) = v and no reduction: axioms (1)-(3) hold,
    axiom (4) fails at any regular vertex (the bare vertex is in no edge
    fiber)."""

    graded = True

    def __init__(self, g: Graph, v: str):
        self.graph = g
        self.v = v

    def enumerate(self, t: Truncation):
        qs = list(
            enumerate_paths(self.graph, t.max_path_length, t.bundle_sample, start=self.v)
        )
        for p in enumerate_paths(self.graph, t.max_path_length, t.bundle_sample):
            for q in qs:
                yield NaivePair(p, q)

    def in_window(self, x: NaivePair, t: Truncation) -> bool:
        ok = len(x.p) <= t.max_path_length and len(x.q) <= t.max_path_length
        return ok and all(
            not is_bundle_ref(s) or s[1] < t.bundle_sample
            for s in x.p.steps + x.q.steps
        )

    def member_vertex(self, x: NaivePair, v: str) -> bool:
        return x.p.start == v

    def member_edge(self, x: NaivePair, ref) -> bool:
        return bool(x.p.steps) and x.p.steps[0] == ref

    def sigma(self, ref, x: NaivePair) -> NaivePair:
        return NaivePair(
            Path((self.graph.src(ref),) + x.p.vertices, (ref,) + x.p.steps), x.q
        )

    def sigma_inv(self, ref, x: NaivePair) -> NaivePair:
        if not self.member_edge(x, ref):
            raise InputError("element is not in this edge fiber")
        return NaivePair(x.p.drop_first(), x.q)

    def degree(self, x: NaivePair) -> int:
        return len(x.p) - len(x.q)


def build_module(g: Graph, d: ModuleDescriptor) -> BranchingSystem:
    """Construct the branching system realizing a module descriptor."""
    d = validate_module(g, d)
    if isinstance(d, NcModule):
        return NcBranchingSystem(g, d.cycle, d.v)
    if isinstance(d, (SinkModule, InfEmitterModule)):
        return PathEndingSystem(g, d.v)
    if isinstance(d, VAlphaModule):
        if d.rational:
            return RationalTailSystem(g, d.tail)
        return IrrationalTailSystem(g, d.tail)
    raise InputError(f"not a module descriptor: {d!r}")


# ---------------------------------------------------------------------------
# Annihilators
# ---------------------------------------------------------------------------


def annihilator(g: Graph, d: ModuleDescriptor):
    """The exact annihilator as an ideal descriptor (no truncation involved)."""
    d = validate_module(g, d)
    if isinstance(d, NcModule):
        H = g.vertices - root(g, d.cycle.vertex_set)
        return GradedIdeal(admissible_pair(g, H, breaking_vertices(g, H)))
    if isinstance(d, SinkModule):
        H = g.vertices - root(g, [d.v])
        return GradedIdeal(admissible_pair(g, H, breaking_vertices(g, H)))
    if isinstance(d, InfEmitterModule):
        H = g.vertices - root(g, [d.v])
        B = breaking_vertices(g, H)
        if d.subtype == "in_B_H":
            return GradedIdeal(admissible_pair(g, H, B - {d.v}))
        return GradedIdeal(admissible_pair(g, H, B))
    if isinstance(d, VAlphaModule):
        H = g.vertices - root(g, d.vertex_support)
        B = breaking_vertices(g, H)
        if d.rational:
            cyc = d.tail.cycle
            if classify_cycle(g, cyc, g.vertices).exclusive:
                # ann = I(H, B_H) + <c - v>
                return NonGradedPrimitiveIdeal(
                    admissible_pair(g, H, B), cyc.canonical(), laurent({0: -1, 1: 1})
                )
        return GradedIdeal(admissible_pair(g, H, B))
    raise InputError(f"not a module descriptor: {d!r}")


def annihilator_generators(g: Graph, d: ModuleDescriptor, field=QQ) -> list:
    """Generators of the annihilator, for bounded annihilation checks."""
    ideal = annihilator(g, d)
    if isinstance(ideal, GradedIdeal):
        return ideal_generators(g, ideal.pair, field)
    gens = ideal_generators(g, ideal.pair, field)
    # f(c): substitute the cycle (based at the tail's basepoint) for x.
    base = ideal.cycle.rotate_to(d.tail.cycle.base)
    total = alg.zero(g, field)
    for n, k in ideal.poly.coeffs:
        total = total + alg.path_element(g, base.power(n), field).scale(k)
    return gens + [total]


# ---------------------------------------------------------------------------
# Homogeneous structure of N_c
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """One group of the first-touch decomposition of a homogeneous vector."""

    k: object
    t: Path  # off-cycle prefix, ending at its only cycle vertex
    c_part: Path  # remainder of p, running inside the cycle
    q: Path
    collapsed: ReducedPair  # red(c_part . q*) = the d_j of the block
    basis: ReducedPair


def _first_touch_split(cycle_vertices: frozenset, p: Path):
    for i, w in enumerate(p.vertices):
        if w in cycle_vertices:
            return p.prefix(i), p.drop_first(i)
    raise InternalCheckError("basis path never touches the cycle")


def homogeneous_decompose(g: Graph, d: NcModule, a: ModuleVector) -> list:
    """Partition the support of a homogeneous vector by off-cycle prefix.

    Within a homogeneous vector all support elements sharing a prefix
    collapse to a single k * t . d term; the blocks come back sorted by
    prefix."""
    d = validate_module(g, d)
    sys = build_module(g, d)
    if not a.is_homogeneous(sys):
        raise InputError("vector is not homogeneous")
    groups: dict = {}
    for x, k in a.terms.items():
        t, c_part = _first_touch_split(d.cycle.vertex_set, x.p)
        groups.setdefault(t, []).append((k, c_part, x))
    blocks = []
    for t in sorted(groups, key=lambda p: (len(p), str(p))):
        entries = groups[t]
        if len({x for _, _, x in entries}) != 1:
            raise InternalCheckError(
                "distinct same-prefix basis elements in a homogeneous vector"
            )
        k, c_part, x = entries[0]
        collapsed = red(g, d.cycle, d.v, c_part, x.q)
        blocks.append(Block(k, t, c_part, x.q, collapsed, x))
    return blocks


@dataclass(frozen=True)
class GeneratorWitness:
    index: int
    p: Path
    q: Path
    k: object
    carrier: alg.AlgebraElement  # k^{-1} q p*, carrying a onto the basis vertex


def recover_generator(
    g: Graph, d: NcModule, a: ModuleVector, t: Truncation
) -> GeneratorWitness:
    """Produce the algebra element carrying a onto the cyclic generator.

    For nonzero homogeneous a with support block k * red(p q*), the element
    (1/k) q p* sends a to the basis vertex; this is the executable content
    of graded simplicity."""
    d = validate_module(g, d)
    sys = build_module(g, d)
    if a.is_zero:
        raise InputError("vector is zero")
    if not a.is_homogeneous(sys):
        raise InputError("vector is not homogeneous")
    for x in a.terms:
        if not sys.in_window(x, t):
            raise InputError(f"support element {x} is outside the window")
    blocks = homogeneous_decompose(g, d, a)
    j, block = 0, blocks[0]
    p_j = block.t.concat(block.c_part)
    q_j = block.q
    carrier = alg.monomial(g, q_j, p_j, field=a.field).scale(1 / block.k)
    result = act(sys, carrier, a, t)
    target = ModuleVector.unit(
        ReducedPair(vertex_path(d.v), vertex_path(d.v)), a.field
    )
    if result != target:
        raise InternalCheckError(
            f"generator recovery failed: got {result}, wanted {target}"
        )
    return GeneratorWitness(j, p_j, q_j, block.k, carrier)


# ---------------------------------------------------------------------------
# Shift isomorphisms between basepoints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftIso:
    """The basis map N_c at basepoint w -> N_c at basepoint v appending the
    arc from v to w as extra ghost; shifts degree down by the arc length."""

    g: Graph
    cycle: Cycle
    v: str
    w: str
    arc: Path  # v -> w along the cycle

    @property
    def n(self) -> int:
        return len(self.arc)

    def forward(self, x: ReducedPair) -> ReducedPair:
        return red(self.g, self.cycle, self.v, x.p, self.arc.concat(x.q))

    def inverse(self, y: ReducedPair) -> ReducedPair:
        n = self.n
        if len(y.q) >= n:
            if y.q.steps[:n] != self.arc.steps:
                raise InternalCheckError("ghost part does not start with the arc")
            return ReducedPair(y.p, y.q.drop_first(n))
        j = len(y.q)
        if y.q.steps != self.arc.steps[:j]:
            raise InternalCheckError("ghost part is not an arc prefix")
        tail = Path(self.arc.vertices[j:], self.arc.steps[j:])
        return ReducedPair(y.p.concat(tail), vertex_path(self.w))


def shift_iso(g: Graph, cycle: Cycle, v: str, w: str) -> ShiftIso:
    if v == w:
        raise InputError("basepoints must differ")
    for u in (v, w):
        if u not in cycle.vertex_set:
            raise InputError(f"{u!r} is not on the cycle")
    return ShiftIso(g, cycle.canonical(), v, w, cycle.arc(v, w))


@dataclass
class ShiftIsoReport:
    mapped: int = 0
    skipped: int = 0
    degree_shift_ok: bool = True
    injective: bool = True
    inverse_ok: bool = True
    intertwines_edges: bool = True
    intertwines_elements: bool = True
    failures: list = dc_field(default_factory=list)

    @property
    def passed(self):
        return (
            self.degree_shift_ok
            and self.injective
            and self.inverse_ok
            and self.intertwines_edges
            and self.intertwines_elements
        )


def verify_shift_iso(
    iso: ShiftIso,
    t: Truncation,
    rng: Optional[random.Random] = None,
    element_samples: int = 20,
    field=QQ,
) -> ShiftIsoReport:
    """Window verification: bijectivity, degree shift by -|arc|, and
    intertwining with the module action."""
    g = iso.g
    report = ShiftIsoReport()
    sys_w = NcBranchingSystem(g, iso.cycle, iso.w)
    sys_v = NcBranchingSystem(g, iso.cycle, iso.v)
    window_w = list(sys_w.enumerate(t))
    images = {}
    for x in window_w:
        y = iso.forward(x)
        if not sys_v.in_window(y, t):
            report.skipped += 1
            continue
        report.mapped += 1
        if y in images:
            report.injective = False
            report.failures.append(("injective", images[y], x))
        images[y] = x
        if y.degree != x.degree - iso.n:
            report.degree_shift_ok = False
            report.failures.append(("degree", x, y))
        if iso.inverse(y) != x:
            report.inverse_ok = False
            report.failures.append(("inverse", x, y))
    for y in sys_v.enumerate(t):
        x = iso.inverse(y)
        if sys_w.in_window(x, t):
            if iso.forward(x) != y:
                report.inverse_ok = False
                report.failures.append(("surjective", y, x))

    refs = sys_w.edge_refs(t)
    for x in window_w:
        for e in refs:
            if not sys_w.member_vertex(x, g.tgt(e)):
                continue
            lhs = iso.forward(sys_w.sigma(e, x))
            rhs = sys_v.sigma(e, iso.forward(x))
            if lhs != rhs:
                report.intertwines_edges = False
                report.failures.append(("sigma", e, x))

    rng = rng or random.Random(0)
    paths = list(enumerate_paths(g, max(1, t.max_path_length // 2), t.bundle_sample))
    small_window = [
        x for x in window_w if len(x.p) + len(x.q) <= max(1, t.max_path_length // 2)
    ] or window_w
    for _ in range(element_samples):
        p = rng.choice(paths)
        q = rng.choice([q for q in paths if q.end == p.end])
        a = alg.monomial(g, p, q, field=field)
        x = rng.choice(small_window)
        m = ModuleVector.unit(x, field)
        try:
            lhs = _map_vector(iso, act(sys_w, a, m, t), sys_v, t)
            rhs = act(sys_v, a, _map_vector(iso, m, sys_v, t), t)
        except WindowOverflow:
            report.skipped += 1
            continue
        if lhs != rhs:
            report.intertwines_elements = False
            report.failures.append(("act", str(a), x))
    return report


def _map_vector(iso: ShiftIso, m: ModuleVector, sys_v, t: Truncation) -> ModuleVector:
    out = ModuleVector(m.field)
    for x, k in m.terms.items():
        y = iso.forward(x)
        if not sys_v.in_window(y, t):
            raise WindowOverflow(y)
        out = out + ModuleVector(m.field, {y: k})
    return out


# ---------------------------------------------------------------------------
# Ghost action and reduction identities
# ---------------------------------------------------------------------------


@dataclass
class IdentityReport:
    checked: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def passed(self):
        return not self.failures


def _windowed_pairs(g: Graph, d: NcModule, t: Truncation):
    """All (p, q) in Y within the window: r(p) = r(q), q inside the cycle."""
    cycle_at_v = d.cycle.rotate_to(d.v)
    for k in range(t.max_path_length + 1):
        q = cycle_at_v.walk_from(d.v, k)
        for p in enumerate_paths(g, t.max_path_length, t.bundle_sample, end=q.end):
            yield p, q


def ghost_action_check(g: Graph, d: NcModule, t: Truncation, field=QQ) -> IdentityReport:
    """Check p* . red(p q*) = q* for cycle-rooted p, and the prepend identity
    red(e . red(p q*)) = red(e p q*), exhaustively over the window."""
    d = validate_module(g, d)
    sys = build_module(g, d)
    report = IdentityReport()
    cycle_vs = d.cycle.vertex_set
    for p, q in _windowed_pairs(g, d, t):
        x = red(g, d.cycle, d.v, p, q)
        if p.start in cycle_vs:
            ghost = alg.monomial(g, vertex_path(p.end), p, field=field)
            got = act(sys, ghost, ModuleVector.unit(x, field), t)
            want = ModuleVector.unit(ReducedPair(vertex_path(q.end), q), field)
            report.checked += 1
            if got != want:
                report.failures.append(("ghost_action", p, q, got))
        for e in g.in_refs(p.start, t.bundle_sample):
            step = make_path(g, g.src(e), [e])
            lhs = red(g, d.cycle, d.v, step.concat(x.p), x.q)
            rhs = red(g, d.cycle, d.v, step.concat(p), q)
            report.checked += 1
            if lhs != rhs:
                report.failures.append(("reduction", e, p, q))
    return report


# ---------------------------------------------------------------------------
# Distinctness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistinctnessReport:
    same_annihilator: bool
    isomorphic: str  # yes | no | not_decided
    graded_isomorphic: str


def distinctness_report(g: Graph, d1: ModuleDescriptor, d2: ModuleDescriptor) -> DistinctnessReport:
    """Compare two module descriptors; isomorphism is decided only in the
    proved cases, everything else reports not_decided."""
    d1 = validate_module(g, d1)
    d2 = validate_module(g, d2)
    same_ann = annihilator(g, d1) == annihilator(g, d2)

    if isinstance(d1, NcModule) and isinstance(d2, NcModule):
        if d1.cycle == d2.cycle:
            iso = "yes"
            graded = "yes" if d1.v == d2.v else "no"
        else:
            iso, graded = "no", "no"
        return DistinctnessReport(same_ann, iso, graded)
    if isinstance(d1, NcModule) != isinstance(d2, NcModule):
        # The cyclic module is graded simple but not simple; Chen modules are
        # simple, so no isomorphism either way.
        return DistinctnessReport(same_ann, "no", "no")
    kinds = {type(d1), type(d2)}
    if kinds == {VAlphaModule, InfEmitterModule}:
        emitter = d1 if isinstance(d1, InfEmitterModule) else d2
        if emitter.subtype == "infinite" and same_ann:
            return DistinctnessReport(same_ann, "no", "no")
    return DistinctnessReport(same_ann, "not_decided", "not_decided")
