"""Graph file ingestion, DOT emission, and the element expression grammar.

The text format is line oriented; ids must be bare identifiers so primed
copies (``v'``) can never collide with user ids:

    # comment
    vertex v
    vertex w
    edge c v v
    bundle b v w          # infinitely many parallel edges v -> w
    cycle loop c          # named cycle: comma-separated edge refs
    path into_w c,b[0]    # named path: comma-separated edge refs
    path at_v @v          # trivial path needs an explicit vertex
    pair P {w} {v}        # named admissible pair

A JSON document with the same fields is accepted wherever a graph file is
expected (detected by a leading ``{``).

Expressions over the algebra use juxtaposition for products, ``*`` as a
postfix star, integer or a/b scalars, and ``+``/``-``:  ``v - c c*``,
``1/2 e (v + w)``, ``b[0]*``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from typing import Optional

from . import algebra as alg
from .errors import InputError
from .fields import QQ
from .graphs import Graph, make_cycle, make_path, vertex_path
from .ideals import QuotientGraph, admissible_pair

_ID = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass
class GraphDocument:
    """A parsed graph file: the graph plus any named auxiliary objects."""

    graph: Graph
    cycles: dict = dc_field(default_factory=dict)
    paths: dict = dc_field(default_factory=dict)
    pairs: dict = dc_field(default_factory=dict)


def _fail(lineno: int, message: str):
    raise InputError(f"line {lineno}: {message}")


def _check_id(lineno: int, name: str) -> str:
    if not _ID.match(name):
        _fail(lineno, f"bad identifier {name!r} (letters, digits, underscore)")
    return name


def parse_ref(token: str, g: Optional[Graph] = None):
    """An edge ref token: ``e`` or ``b[3]``."""
    m = re.match(r"^([A-Za-z_][A-Za-z0-9_]*)\[(\d+)\]$", token)
    ref = (m.group(1), int(m.group(2))) if m else token
    if g is not None and not g.has_ref(ref):
        raise InputError(f"unknown edge ref {token!r}")
    return ref


def _parse_steps(g: Graph, text: str, lineno: int):
    if text.startswith("@"):
        v = text[1:]
        if v not in g.vertices:
            _fail(lineno, f"unknown vertex {v!r}")
        return vertex_path(v)
    steps = [parse_ref(tok, g) for tok in text.split(",") if tok]
    if not steps:
        _fail(lineno, "empty step list (use @vertex for a trivial path)")
    start = g.src(steps[0])
    return make_path(g, start, steps)


def _parse_vertex_set(g: Graph, token: str, lineno: int) -> frozenset:
    if not (token.startswith("{") and token.endswith("}")):
        _fail(lineno, f"expected a brace-delimited vertex set, got {token!r}")
    inner = token[1:-1]
    names = [t for t in inner.split(",") if t]
    for n in names:
        if n not in g.vertices:
            _fail(lineno, f"unknown vertex {n!r}")
    return frozenset(names)


def parse_graph_document(text: str) -> GraphDocument:
    """Parse the text or JSON graph format, with line diagnostics."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json_document(stripped)

    vertices: list = []
    edges: dict = {}
    bundles: dict = {}
    deferred: list = []  # (kind, lineno, parts) resolved after graph build
    seen_ids: set = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == "vertex":
            if len(args) != 1:
                _fail(lineno, "vertex takes one id")
            name = _check_id(lineno, args[0])
            if name in seen_ids:
                _fail(lineno, f"duplicate id {name!r}")
            seen_ids.add(name)
            vertices.append(name)
        elif kind in ("edge", "bundle"):
            if len(args) != 3:
                _fail(lineno, f"{kind} takes: id src tgt")
            name = _check_id(lineno, args[0])
            if name in seen_ids:
                _fail(lineno, f"duplicate id {name!r}")
            seen_ids.add(name)
            table = edges if kind == "edge" else bundles
            table[name] = (args[1], args[2])
        elif kind in ("cycle", "path", "pair"):
            deferred.append((kind, lineno, args))
        else:
            _fail(lineno, f"unknown declaration {kind!r}")

    if not vertices:
        raise InputError("graph file declares no vertices")
    for name, (src, tgt) in list(edges.items()) + list(bundles.items()):
        if src not in vertices or tgt not in vertices:
            raise InputError(f"edge/bundle {name!r} references unknown vertex")
    doc = GraphDocument(Graph(vertices, edges, bundles))

    for kind, lineno, args in deferred:
        if kind == "cycle":
            if len(args) != 2:
                _fail(lineno, "cycle takes: name steps")
            name = _check_id(lineno, args[0])
            p = _parse_steps(doc.graph, args[1], lineno)
            doc.cycles[name] = make_cycle(doc.graph, p.start, p.steps)
        elif kind == "path":
            if len(args) != 2:
                _fail(lineno, "path takes: name steps (or @vertex)")
            name = _check_id(lineno, args[0])
            doc.paths[name] = _parse_steps(doc.graph, args[1], lineno)
        else:
            if len(args) != 3:
                _fail(lineno, "pair takes: name {H} {S}")
            name = _check_id(lineno, args[0])
            H = _parse_vertex_set(doc.graph, args[1], lineno)
            S = _parse_vertex_set(doc.graph, args[2], lineno)
            doc.pairs[name] = admissible_pair(doc.graph, H, S)
    return doc


def _parse_json_document(text: str) -> GraphDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON graph document: {exc}") from exc
    vertices = data.get("vertices", [])
    if not vertices:
        raise InputError("graph document declares no vertices")
    edges = {k: tuple(v) for k, v in data.get("edges", {}).items()}
    bundles = {k: tuple(v) for k, v in data.get("bundles", {}).items()}
    doc = GraphDocument(Graph(vertices, edges, bundles))
    for name, steps in data.get("cycles", {}).items():
        refs = [parse_ref(s, doc.graph) for s in steps]
        doc.cycles[name] = make_cycle(doc.graph, doc.graph.src(refs[0]), refs)
    for name, steps in data.get("paths", {}).items():
        if isinstance(steps, str):
            doc.paths[name] = _parse_steps(doc.graph, steps, 0)
        else:
            refs = [parse_ref(s, doc.graph) for s in steps]
            doc.paths[name] = make_path(doc.graph, doc.graph.src(refs[0]), refs)
    for name, hs in data.get("pairs", {}).items():
        doc.pairs[name] = admissible_pair(doc.graph, hs[0], hs[1])
    return doc


def emit_graph(g: Graph) -> str:
    """Serialize a graph in the text format; parse(emit(g)) reproduces g."""
    lines = [f"vertex {v}" for v in g.vertex_list]
    lines += [f"edge {e} {src} {tgt}" for e, (src, tgt) in sorted(g.edges.items())]
    lines += [f"bundle {b} {src} {tgt}" for b, (src, tgt) in sorted(g.bundles.items())]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DOT
# ---------------------------------------------------------------------------


def to_dot(g: Graph, quotient: Optional[QuotientGraph] = None, name: str = "graph_") -> str:
    """DOT output; primed quotient vertices and edges render dashed."""
    primed_vs = set()
    primed_es = set()
    if quotient is not None:
        primed_vs = set(quotient.primed_vertices.values())
        primed_es = set(quotient.primed_edges.values())
    lines = [f"digraph {name} {{"]
    for v in g.vertex_list:
        attrs = ' [style=dashed, shape=box, label="{}"]'.format(v) if v in primed_vs else ""
        lines.append(f'  "{v}"{attrs};')
    for e, (src, tgt) in sorted(g.edges.items()):
        style = ", style=dashed" if e in primed_es else ""
        lines.append(f'  "{src}" -> "{tgt}" [label="{e}"{style}];')
    for b, (src, tgt) in sorted(g.bundles.items()):
        style = ", style=dashed" if b in primed_es else ""
        lines.append(
            f'  "{src}" -> "{tgt}" [label="{b} (bundle)", penwidth=2{style}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Element expressions
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:\[\d+\])?)"
    r"|(?P<op>[()+*-]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise InputError(f"bad token at {rest[:10]!r} in expression")
        out.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    return out


class _ExprParser:
    def __init__(self, g: Graph, field=QQ, tokens=None):
        self.g = g
        self.field = field
        self.tokens = tokens or []
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> alg.AlgebraElement:
        out = self.expr()
        if self.peek()[0] is not None:
            raise InputError(f"trailing input in expression at {self.peek()[1]!r}")
        return out

    def expr(self) -> alg.AlgebraElement:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        total = self.term().scale(sign)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                nxt = self.term()
                total = total + (nxt if val == "+" else -nxt)
            else:
                return total

    def term(self) -> alg.AlgebraElement:
        coeff = self.field.one
        kind, val = self.peek()
        have_scalar = False
        if kind == "num":
            self.take()
            if "/" in val:
                n, d = val.split("/")
                coeff = self.field.coerce(int(n)) / self.field.coerce(int(d))
            else:
                coeff = self.field.coerce(int(val))
            have_scalar = True
        factors = []
        while True:
            kind, val = self.peek()
            if kind == "name" or (kind == "op" and val == "("):
                factors.append(self.factor())
            else:
                break
        if not factors:
            if not have_scalar:
                raise InputError("expected a term")
            if coeff == 0:
                return alg.zero(self.g, self.field)
            # A bare scalar means that multiple of the identity: the sum of
            # all vertices (the graph is finite).
            total = alg.zero(self.g, self.field)
            for v in self.g.vertex_list:
                total = total + alg.vertex(self.g, v, self.field)
            return total.scale(coeff)
        out = factors[0]
        for f in factors[1:]:
            out = out * f
        return out.scale(coeff)

    def factor(self) -> alg.AlgebraElement:
        kind, val = self.take()
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val = self.take()
            if kind != "op" or val != ")":
                raise InputError("unbalanced parenthesis in expression")
            out = inner
        elif kind == "name":
            out = self.atom(val)
        else:
            raise InputError(f"unexpected token {val!r} in expression")
        while self.peek() == ("op", "*"):
            self.take()
            out = alg.star(out)
        return out

    def atom(self, name: str) -> alg.AlgebraElement:
        if name in self.g.vertices:
            return alg.vertex(self.g, name, self.field)
        ref = parse_ref(name)
        if self.g.has_ref(ref):
            return alg.edge(self.g, ref, self.field)
        if name in self.g.bundles:
            raise InputError(f"bundle {name!r} needs an index, e.g. {name}[0]")
        raise InputError(f"unknown identifier {name!r} in expression")


def parse_element(g: Graph, text: str, field=QQ) -> alg.AlgebraElement:
    """Parse an algebra element expression over the graph."""
    return _ExprParser(g, field, _tokenize(text)).parse()


def parse_monomial(g: Graph, text: str, field=QQ):
    """Parse an expression that must normalize to a single monomial with
    coefficient one; used for basis-element selectors."""
    a = parse_element(g, text, field)
    if len(a.terms) != 1:
        raise InputError(f"{text!r} is not a single basis monomial")
    (m, k), = a.terms.items()
    if k != field.one:
        raise InputError(f"{text!r} carries a coefficient; basis elements cannot")
    return m
