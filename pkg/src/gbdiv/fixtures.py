"""Small named graphs and seeded generic data for tests and the CLI."""

from __future__ import annotations

import random
from typing import Sequence

from .graphs import Graph

__all__ = [
    "kite",
    "path_graph",
    "seeded_heights",
    "seeded_weights",
    "theta",
    "triangle",
]


def kite() -> Graph:
    """Genus-2 diamond: a 4-cycle with one chord, 8 spanning trees."""
    return Graph(
        ["t", "r", "b", "l"],
        [("t", "r"), ("t", "l"), ("r", "l"), ("r", "b"), ("l", "b")],
    )


def triangle() -> Graph:
    return Graph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])


def theta() -> Graph:
    """Two vertices joined by three parallel edges."""
    return Graph(["u", "v"], [("u", "v"), ("u", "v"), ("u", "v")])


def path_graph(n: int) -> Graph:
    verts = [f"v{i}" for i in range(n)]
    return Graph(verts, [(verts[i], verts[i + 1]) for i in range(n - 1)])


def seeded_weights(graph: Graph, seed: int) -> list[int]:
    """Signed distinct powers of two: generic for every seed.

    A signed sum of distinct powers of two never vanishes, so these
    weights are orthogonal to no circuit and no cocircuit.
    """
    rng = random.Random(seed)
    m = graph.n_edges
    perm = rng.sample(range(m), m)
    return [(1 if rng.random() < 0.5 else -1) * 2 ** perm[e] for e in range(m)]


def seeded_heights(n_points: int, seed: int) -> list[int]:
    """Uniform integer heights; degeneracy is caught exactly downstream."""
    rng = random.Random(seed)
    return [rng.randint(-(10**6), 10**6) for _ in range(n_points)]
