"""Built-in graphs used throughout the test and verification suites.

G1  one vertex v with a loop e.
G2  a loop c at v plus a bundle from v to the sink w (v is an infinite
    emitter whose infinitely many edges all land in w).
G3  an edge e from u into the loop c at v, plus a bundle from u to the
    sink w.
G4  one vertex v carrying a bundle of loops (infinitely many parallel
    loops at v).
G5  two loops d and e at one vertex v.
G6  a two-cycle: f from v to w and g from w back to v.

A further graph from the literature with vertices indexed by the finite
subsets of the reals is downwards directed without the countable separation
property; it has infinitely many vertices, so it lives here only as this
note and is intentionally not constructible.
"""

from __future__ import annotations

import random

from .graphs import Graph

G1 = Graph(["v"], edges={"e": ("v", "v")})
G2 = Graph(["v", "w"], edges={"c": ("v", "v")}, bundles={"b": ("v", "w")})
G3 = Graph(
    ["u", "v", "w"],
    edges={"e": ("u", "v"), "c": ("v", "v")},
    bundles={"b": ("u", "w")},
)
G4 = Graph(["v"], bundles={"b": ("v", "v")})
G5 = Graph(["v"], edges={"d": ("v", "v"), "e": ("v", "v")})
G6 = Graph(["v", "w"], edges={"f": ("v", "w"), "g": ("w", "v")})

CATALOG = {"G1": G1, "G2": G2, "G3": G3, "G4": G4, "G5": G5, "G6": G6}


def random_graph(
    rng: random.Random,
    max_vertices: int = 6,
    max_edges: int = 10,
    max_bundles: int = 2,
) -> Graph:
    """A random fixture within the sweep bounds (at least one vertex)."""
    n = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(n)]
    edges = {}
    for i in range(rng.randint(0, max_edges)):
        edges[f"e{i}"] = (rng.choice(vertices), rng.choice(vertices))
    bundles = {}
    for i in range(rng.randint(0, max_bundles)):
        bundles[f"b{i}"] = (rng.choice(vertices), rng.choice(vertices))
    return Graph(vertices, edges=edges, bundles=bundles)
