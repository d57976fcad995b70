"""Finite directed graphs with symbolic infinite-edge bundles, and the
vertex-set predicates used by the classification theorems.

A bundle stands for countably many parallel edges between one source and one
target; a vertex sourcing a bundle is an infinite emitter.  Individual bundle
edges are addressed as ``(bundle_id, index)``.  Reachability uses u >= v to
mean "there is a path from u to v"; the root R(V) collects everything that
reaches V and the tree T(V) everything V reaches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

from .errors import InputError

VertexId = str
EdgeRef = Union[str, tuple]  # ordinary edge id, or (bundle id, index)


def ref_str(ref: EdgeRef) -> str:
    if isinstance(ref, tuple):
        return f"{ref[0]}[{ref[1]}]"
    return ref


def is_bundle_ref(ref: EdgeRef) -> bool:
    return isinstance(ref, tuple)


class Graph:
    """Immutable finite graph.  All ids share one namespace."""

    def __init__(self, vertices: Iterable[str], edges=None, bundles=None):
        self.vertex_list = tuple(sorted(vertices))
        self.vertices = frozenset(self.vertex_list)
        self.edges = dict(edges or {})
        self.bundles = dict(bundles or {})
        if len(self.vertex_list) != len(self.vertices):
            raise InputError("duplicate vertex id")
        seen = set(self.vertices)
        for name, table in (("edge", self.edges), ("bundle", self.bundles)):
            for eid, (src, tgt) in table.items():
                if eid in seen:
                    raise InputError(f"duplicate id {eid!r} ({name})")
                seen.add(eid)
                if src not in self.vertices or tgt not in self.vertices:
                    raise InputError(f"{name} {eid!r} references unknown vertex")
        self._out_edges = {v: [] for v in self.vertex_list}
        self._in_edges = {v: [] for v in self.vertex_list}
        for eid in sorted(self.edges):
            src, tgt = self.edges[eid]
            self._out_edges[src].append(eid)
            self._in_edges[tgt].append(eid)
        self._out_bundles = {v: [] for v in self.vertex_list}
        self._in_bundles = {v: [] for v in self.vertex_list}
        for bid in sorted(self.bundles):
            src, tgt = self.bundles[bid]
            self._out_bundles[src].append(bid)
            self._in_bundles[tgt].append(bid)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.vertices == other.vertices
            and self.edges == other.edges
            and self.bundles == other.bundles
        )

    def __repr__(self):
        return (
            f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges, "
            f"{len(self.bundles)} bundles)"
        )

    # -- ids and endpoints ------------------------------------------------

    def check_vertices(self, V: Iterable[str]) -> frozenset:
        V = frozenset(V)
        unknown = V - self.vertices
        if unknown:
            raise InputError(f"unknown vertex id(s): {sorted(unknown)}")
        return V

    def has_ref(self, ref: EdgeRef) -> bool:
        if is_bundle_ref(ref):
            return (
                len(ref) == 2
                and ref[0] in self.bundles
                and isinstance(ref[1], int)
                and ref[1] >= 0
            )
        return ref in self.edges

    def src(self, ref: EdgeRef) -> str:
        if is_bundle_ref(ref):
            return self.bundles[ref[0]][0]
        return self.edges[ref][0]

    def tgt(self, ref: EdgeRef) -> str:
        if is_bundle_ref(ref):
            return self.bundles[ref[0]][1]
        return self.edges[ref][1]

    def out_edge_ids(self, v: str) -> list:
        return list(self._out_edges[v])

    def out_bundle_ids(self, v: str) -> list:
        return list(self._out_bundles[v])

    def in_bundle_ids(self, v: str) -> list:
        return list(self._in_bundles[v])

    def out_refs(self, v: str, bundle_sample: int = 1) -> list:
        """Outgoing edge refs, with each bundle sampled at indices < bundle_sample."""
        refs: list = list(self._out_edges[v])
        for bid in self._out_bundles[v]:
            refs.extend((bid, i) for i in range(bundle_sample))
        return refs

    def in_refs(self, v: str, bundle_sample: int = 1) -> list:
        refs: list = list(self._in_edges[v])
        for bid in self._in_bundles[v]:
            refs.extend((bid, i) for i in range(bundle_sample))
        return refs

    # -- vertex kinds ------------------------------------------------------

    def is_infinite_emitter(self, v: str) -> bool:
        return bool(self._out_bundles[v])

    def is_sink(self, v: str) -> bool:
        return not self._out_edges[v] and not self._out_bundles[v]

    def is_regular(self, v: str) -> bool:
        return bool(self._out_edges[v]) and not self._out_bundles[v]

    def designated_edge(self, v: str) -> str:
        """The fixed edge orienting the vertex-expansion rewrite at a regular vertex."""
        if not self.is_regular(v):
            raise InputError(f"{v!r} is not a regular vertex")
        return self._out_edges[v][0]  # out lists are kept sorted

    # -- vertex-level adjacency (bundles count once) ------------------------

    def successors(self, v: str) -> set:
        out = {self.edges[e][1] for e in self._out_edges[v]}
        out.update(self.bundles[b][1] for b in self._out_bundles[v])
        return out

    def predecessors(self, v: str) -> set:
        pre = {self.edges[e][0] for e in self._in_edges[v]}
        pre.update(self.bundles[b][0] for b in self._in_bundles[v])
        return pre


@dataclass(frozen=True)
class Path:
    """A finite path: the vertex sequence plus the edge refs between them.

    A single-vertex path has no steps.  ``vertices`` always has one more
    entry than ``steps``.
    """

    vertices: tuple
    steps: tuple

    @property
    def start(self) -> str:
        return self.vertices[0]

    @property
    def end(self) -> str:
        return self.vertices[-1]

    def __len__(self):
        return len(self.steps)

    @property
    def is_vertex(self) -> bool:
        return not self.steps

    def concat(self, other: "Path") -> "Path":
        if self.end != other.start:
            raise InputError(
                f"paths do not compose: {self.end!r} != {other.start!r}"
            )
        return Path(self.vertices + other.vertices[1:], self.steps + other.steps)

    def prefix(self, n: int) -> "Path":
        return Path(self.vertices[: n + 1], self.steps[:n])

    def drop_first(self, n: int = 1) -> "Path":
        return Path(self.vertices[n:], self.steps[n:])

    def drop_last(self, n: int = 1) -> "Path":
        if n == 0:
            return self
        return Path(self.vertices[:-n], self.steps[:-n])

    def __str__(self):
        if not self.steps:
            return self.start
        return "".join(ref_str(s) for s in self.steps)


def vertex_path(v: str) -> Path:
    return Path((v,), ())


def make_path(g: Graph, start: str, steps: Iterable[EdgeRef]) -> Path:
    """Build a validated path from a start vertex and edge refs."""
    g.check_vertices([start])
    vertices = [start]
    out_steps = []
    at = start
    for ref in steps:
        if not g.has_ref(ref):
            raise InputError(f"unknown edge ref {ref_str(ref)!r}")
        if g.src(ref) != at:
            raise InputError(
                f"step {ref_str(ref)!r} starts at {g.src(ref)!r}, expected {at!r}"
            )
        at = g.tgt(ref)
        vertices.append(at)
        out_steps.append(ref)
    return Path(tuple(vertices), tuple(out_steps))


@dataclass(frozen=True)
class Cycle:
    """A simple cycle stored as a closed path; the start is the basepoint.

    The canonical rotation puts the lexicographically least vertex first.
    Sources along a cycle are pairwise distinct, so each vertex on the cycle
    emits exactly one cycle edge and receives exactly one.
    """

    path: Path

    @property
    def base(self) -> str:
        return self.path.start

    @property
    def steps(self) -> tuple:
        return self.path.steps

    @property
    def sources(self) -> tuple:
        return self.path.vertices[:-1]

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.sources)

    def __len__(self):
        return len(self.path.steps)

    def rotate_to(self, v: str) -> "Cycle":
        if v not in self.sources:
            raise InputError(f"{v!r} is not on the cycle")
        i = self.sources.index(v)
        verts = self.path.vertices
        rotated = Path(
            verts[i:-1] + verts[: i + 1], self.steps[i:] + self.steps[:i]
        )
        return Cycle(rotated)

    def canonical(self) -> "Cycle":
        return self.rotate_to(min(self.sources))

    def edge_from(self, v: str) -> EdgeRef:
        return self.steps[self.sources.index(v)]

    def edge_into(self, v: str) -> EdgeRef:
        return self.steps[self.sources.index(v) - 1]

    def arc(self, u: str, v: str) -> Path:
        """The path along the cycle from u to v (trivial when u == v)."""
        rotated = self.rotate_to(u)
        if u == v:
            return vertex_path(u)
        j = rotated.sources.index(v)
        return rotated.path.prefix(j)

    def power(self, k: int, base: Optional[str] = None) -> Path:
        """The path winding k >= 0 times around from the given basepoint."""
        c = self if base is None else self.rotate_to(base)
        out = vertex_path(c.base)
        for _ in range(k):
            out = out.concat(c.path)
        return out

    def walk_from(self, v: str, length: int) -> Path:
        """The path of the given length along the cycle starting at v."""
        rotated = self.rotate_to(v)
        out = vertex_path(v)
        for i in range(length):
            step = rotated.steps[i % len(rotated.steps)]
            nxt = rotated.path.vertices[i % len(rotated.steps) + 1]
            out = Path(out.vertices + (nxt,), out.steps + (step,))
        return out

    def sort_key(self):
        c = self.canonical()
        return (len(c), tuple(ref_str(s) for s in c.steps))

    def __str__(self):
        return str(self.path)


def make_cycle(g: Graph, start: str, steps: Iterable[EdgeRef]) -> Cycle:
    p = make_path(g, start, steps)
    if p.is_vertex or p.start != p.end:
        raise InputError("a cycle must be a nonempty closed path")
    sources = p.vertices[:-1]
    if len(set(sources)) != len(sources):
        raise InputError("cycle edges must have pairwise distinct sources")
    return Cycle(p).canonical()


def check_cycle(g: Graph, c: Cycle) -> Cycle:
    """Validate that a Cycle value is an actual cycle of g."""
    _closed_ok(g, c)
    return c


def _closed_ok(g: Graph, c: Cycle) -> bool:
    p = make_path(g, c.path.start, c.steps)
    if p.start != p.end or p.is_vertex:
        raise InputError("not a cycle of this graph")
    sources = p.vertices[:-1]
    if len(set(sources)) != len(sources):
        raise InputError("not a simple cycle")
    return True


@dataclass(frozen=True)
class RationalTailSpec:
    """A rational infinite path: a finite prefix followed by c, c, c, ...

    Canonical form: the prefix never ends with the cycle edge that enters
    its endpoint, and the cycle is rotated so its base is the prefix end.
    This makes representatives of tail-equivalent paths unique.
    """

    prefix: Path
    cycle: Cycle

    @property
    def vertex_support(self) -> frozenset:
        return frozenset(self.prefix.vertices) | self.cycle.vertex_set

    def first_edge(self) -> EdgeRef:
        if self.prefix.steps:
            return self.prefix.steps[0]
        return self.cycle.edge_from(self.cycle.base)

    def __str__(self):
        return f"{self.prefix}({self.cycle})^inf"


def rational_tail(g: Graph, prefix: Path, cycle: Cycle) -> RationalTailSpec:
    """Build the canonical representative of prefix . cycle^infinity."""
    if prefix.end not in cycle.sources:
        raise InputError("prefix must end on the cycle")
    cyc = cycle.rotate_to(prefix.end)
    while prefix.steps and prefix.steps[-1] == cyc.edge_into(cyc.base):
        prev = g.src(prefix.steps[-1])
        prefix = prefix.drop_last()
        cyc = cyc.rotate_to(prev)
    return RationalTailSpec(prefix, cyc)


# ---------------------------------------------------------------------------
# Reachability predicates
# ---------------------------------------------------------------------------


def _closure(adjacency, seeds: Iterable[str]) -> frozenset:
    seen = set(seeds)
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for u in adjacency(v):
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return frozenset(seen)


def root(g: Graph, V: Iterable[str]) -> frozenset:
    """R(V): every vertex with a path into V (reverse reachability)."""
    V = g.check_vertices(V)
    return _closure(g.predecessors, V)


def tree(g: Graph, V: Iterable[str]) -> frozenset:
    """T(V): every vertex some member of V reaches (forward reachability)."""
    V = g.check_vertices(V)
    return _closure(g.successors, V)


def is_hereditary(g: Graph, H: Iterable[str]):
    """H is hereditary when members only ever reach members.

    Returns (True, None) or (False, (u, v)) with u in H reaching v outside H.
    """
    H = g.check_vertices(H)
    for u in sorted(H):
        for v in sorted(tree(g, [u]) - H):
            return False, (u, v)
    return True, None


def is_saturated(g: Graph, H: Iterable[str]):
    """H absorbs every regular vertex whose edges all land in H."""
    H = g.check_vertices(H)
    for v in g.vertex_list:
        if v in H or not g.is_regular(v):
            continue
        if all(g.tgt(e) in H for e in g.out_edge_ids(v)):
            return False, v
    return True, None


def hereditary_saturated_closure(g: Graph, V: Iterable[str]) -> frozenset:
    """Least hereditary and saturated superset of V (fixed point of both rules)."""
    H = set(tree(g, V))
    changed = True
    while changed:
        changed = False
        for v in g.vertex_list:
            if v in H:
                continue
            if g.is_regular(v) and all(g.tgt(e) in H for e in g.out_edge_ids(v)):
                H.add(v)
                H |= tree(g, [v])
                changed = True
    return frozenset(H)


def is_downwards_directed(g: Graph, V: Iterable[str]):
    """Every two members of V must reach a common member of V.

    Returns (True, None) or (False, (u, v)) for an unboundable pair.
    """
    V = g.check_vertices(V)
    reach = {v: root(g, [v]) for v in V}  # reach[w] = who reaches w
    for u, v in itertools.combinations(sorted(V), 2):
        if not any(u in reach[w] and v in reach[w] for w in V):
            return False, (u, v)
    return True, None


def has_icsp(g: Graph, V: Iterable[str]):
    """(Inner) countable separation, witnessed by C = V itself.

    On a finite graph every vertex set is countable, so the predicate is
    constantly true; it exists so the classification conditions can be
    stated in full.
    """
    V = g.check_vertices(V)
    return True, V


# ---------------------------------------------------------------------------
# Cycles
# ---------------------------------------------------------------------------


def enumerate_cycles(g: Graph, bundle_sample: int = 1) -> list:
    """All simple cycles in canonical rotation, each exactly once.

    Parallel bundle edges yield one cycle per sampled index; the default
    sample 1 gives the index-0 representative of each parallel class.
    """
    cycles = set()
    order = {v: i for i, v in enumerate(g.vertex_list)}

    def extend(path_steps, path_vertices):
        at = path_vertices[-1]
        start = path_vertices[0]
        for ref in g.out_refs(at, bundle_sample):
            nxt = g.tgt(ref)
            if nxt == start:
                cycles.add(
                    make_cycle(g, start, tuple(path_steps) + (ref,))
                )
            elif order[nxt] > order[start] and nxt not in path_vertices:
                extend(path_steps + [ref], path_vertices + [nxt])

    for v in g.vertex_list:
        extend([], [v])
    return sorted(cycles, key=Cycle.sort_key)


def cycle_exits(g: Graph, c: Cycle, bundle_sample: int = 1) -> list:
    """Edge refs leaving the cycle from its vertices (one sample per bundle
    plus every unused parallel index below the sample)."""
    on_cycle = set(c.steps)
    exits = []
    for v in c.sources:
        for ref in g.out_refs(v, bundle_sample):
            if ref not in on_cycle:
                exits.append(ref)
        # A bundle edge on the cycle leaves its infinitely many parallel
        # copies as exits; make sure at least one shows up even at sample 1.
        for step in c.steps:
            if is_bundle_ref(step) and g.src(step) == v:
                witness = (step[0], step[1] + 1)
                if witness not in on_cycle and witness not in exits:
                    exits.append(witness)
    return exits


def has_condition_L(g: Graph, V: Iterable[str]):
    """Every cycle inside V needs an exit landing in V.

    Returns (True, None) or (False, exitless_cycle).
    """
    V = g.check_vertices(V)
    for c in enumerate_cycles(g):
        if not c.vertex_set <= V:
            continue
        if not any(g.tgt(ref) in V for ref in cycle_exits(g, c)):
            return False, c
    return True, None


@dataclass(frozen=True)
class CycleClassification:
    kind: str  # exclusive | extreme_in_V | no_exit_in_V | neither
    exclusive: bool
    extreme_in_V: bool
    no_exit_in_V: bool
    escape: Optional[str] = None  # vertex witnessing a non-returning escape


def _induced_successors(g: Graph, V: frozenset):
    def succ(v):
        return {u for u in g.successors(v) if u in V}

    return succ


def classify_cycle(g: Graph, c: Cycle, V: Iterable[str]) -> CycleClassification:
    """Sort a cycle into exclusive / extreme-in-V / neither, with flags.

    Exclusive: no cycle vertex lies on a distinct cycle (a bundle edge on the
    cycle always breaks this, via its parallel copies).  Extreme in V: the
    cycle has an exit landing in V and every V-internal escape returns to the
    cycle inside V.  The two are mutually exclusive; ``no_exit_in_V`` is an
    independent flag and the fallback kind.
    """
    V = g.check_vertices(V)
    _closed_ok(g, c)
    if not c.vertex_set <= V:
        raise InputError("cycle vertices must lie inside V")
    canon = c.canonical()

    if any(is_bundle_ref(s) for s in c.steps):
        exclusive = False
    else:
        exclusive = not any(
            other != canon and other.vertex_set & c.vertex_set
            for other in enumerate_cycles(g)
        )

    exits_in_V = [ref for ref in cycle_exits(g, c) if g.tgt(ref) in V]
    no_exit_in_V = not exits_in_V

    extreme = False
    escape = None
    if exits_in_V:
        succ = _induced_successors(g, V)
        reachable = _closure(succ, c.vertex_set)
        extreme = True
        for w in sorted(reachable):
            if not _closure(succ, [w]) & c.vertex_set:
                extreme = False
                escape = w
                break

    if exclusive:
        kind = "exclusive"
    elif extreme:
        kind = "extreme_in_V"
    elif no_exit_in_V:
        kind = "no_exit_in_V"
    else:
        kind = "neither"
    return CycleClassification(kind, exclusive, extreme, no_exit_in_V, escape)


def cycles_through(g: Graph, v: str, bundle_sample: int = 2) -> list:
    return [c for c in enumerate_cycles(g, bundle_sample) if v in c.vertex_set]


def exitless_cycle_vertices(g: Graph) -> dict:
    """Vertices lying on a cycle with no exits at all, mapped to that cycle."""
    out = {}
    for c in enumerate_cycles(g):
        if not cycle_exits(g, c):
            for v in c.sources:
                out[v] = c
    return out


def enumerate_paths(
    g: Graph,
    max_len: int,
    bundle_sample: int = 1,
    start: Optional[str] = None,
    end: Optional[str] = None,
) -> Iterator[Path]:
    """All paths of length <= max_len, bundle indices below the sample.

    Yields in breadth-first order (vertex paths first), optionally filtered
    by start and/or end vertex.
    """
    starts = [start] if start is not None else list(g.vertex_list)
    frontier = [vertex_path(v) for v in starts]
    while frontier:
        nxt = []
        for p in frontier:
            if end is None or p.end == end:
                yield p
            if len(p) < max_len:
                for ref in g.out_refs(p.end, bundle_sample):
                    nxt.append(Path(p.vertices + (g.tgt(ref),), p.steps + (ref,)))
        frontier = nxt


# ---------------------------------------------------------------------------
# Breaking vertices
# ---------------------------------------------------------------------------


def breaking_vertices(g: Graph, H: Iterable[str]) -> frozenset:
    """B_H: infinite emitters outside H whose edge set into the complement
    is nonempty and finite.

    With bundles, finiteness means every bundle at the vertex targets H, and
    nonemptiness means at least one ordinary edge escapes H.
    """
    H = g.check_vertices(H)
    ok, witness = is_hereditary(g, H)
    if not ok:
        raise InputError(f"H is not hereditary (witness {witness})")
    ok, witness = is_saturated(g, H)
    if not ok:
        raise InputError(f"H is not saturated (witness {witness})")
    out = set()
    for v in g.vertex_list:
        if v in H or not g.is_infinite_emitter(v):
            continue
        if any(g.tgt((b, 0)) not in H for b in g.out_bundle_ids(v)):
            continue  # infinitely many edges stay outside H
        if any(g.tgt(e) not in H for e in g.out_edge_ids(v)):
            out.add(v)
    return frozenset(out)
