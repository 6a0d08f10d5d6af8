"""Fourientations: per-edge states forward/backward/bioriented/unoriented.

The serialized alphabet is ``>`` (with the reference orientation), ``<``
(against it), ``=`` (bioriented) and ``.`` (unoriented).  An orientation
is a fourientation with every edge one-way.  Oriented bases pair a
spanning tree with a fourientation in one of two flavors:

* external: tree edges bioriented, non-tree edges one-way;
* internal: tree edges one-way, non-tree edges bioriented.

The induced divisor counts one chip per arc head (two for a bioriented
edge, none for an unoriented one) minus one chip everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chipfiring import Divisor, linearly_equivalent
from .graphs import Graph, GraphError, SignedEdgeSet, SpanningTree

__all__ = [
    "BACKWARD",
    "BIORIENTED",
    "FORWARD",
    "Fourientation",
    "OrientedBase",
    "UNORIENTED",
    "intersect",
    "same_reversal_class",
]

FORWARD = ">"
BACKWARD = "<"
BIORIENTED = "="
UNORIENTED = "."
_STATES = (FORWARD, BACKWARD, BIORIENTED, UNORIENTED)


@dataclass(frozen=True)
class Fourientation:
    """Immutable per-edge state vector over ``> < = .``."""

    states: tuple[str, ...]
    graph: Graph = field(compare=False, repr=False)

    def __post_init__(self):
        if len(self.states) != self.graph.n_edges:
            raise GraphError("state count does not match edge count")
        for s in self.states:
            if s not in _STATES:
                raise GraphError(f"unknown edge state {s!r}")

    @classmethod
    def from_string(cls, graph: Graph, text: str) -> "Fourientation":
        return cls(tuple(text), graph)

    @classmethod
    def all_bioriented(cls, graph: Graph) -> "Fourientation":
        return cls((BIORIENTED,) * graph.n_edges, graph)

    @classmethod
    def all_unoriented(cls, graph: Graph) -> "Fourientation":
        return cls((UNORIENTED,) * graph.n_edges, graph)

    @classmethod
    def from_arcs(cls, graph: Graph, arcs, bioriented=(), unoriented=()) -> "Fourientation":
        """Build from arcs given as (tail, head) vertex pairs.

        Every edge must be covered exactly once by ``arcs``,
        ``bioriented`` or ``unoriented`` (edge index iterables).
        """
        states: list[str] = [""] * graph.n_edges
        for e in bioriented:
            states[e] = BIORIENTED
        for e in unoriented:
            states[e] = UNORIENTED
        remaining: dict[tuple[int, int], list[int]] = {}
        for e, (t, h) in enumerate(graph.edge_index_pairs):
            if not states[e]:
                remaining.setdefault((t, h), []).append(e)
        for a, b in arcs:
            ai, bi = graph.vertex_index(a), graph.vertex_index(b)
            if remaining.get((ai, bi)):
                states[remaining[(ai, bi)].pop(0)] = FORWARD
            elif remaining.get((bi, ai)):
                states[remaining[(bi, ai)].pop(0)] = BACKWARD
            else:
                raise GraphError(f"no unassigned edge between {a!r} and {b!r}")
        if any(not s for s in states):
            raise GraphError("some edges left without a state")
        return cls(tuple(states), graph)

    @property
    def encoding(self) -> str:
        return "".join(self.states)

    @property
    def is_orientation(self) -> bool:
        return all(s in (FORWARD, BACKWARD) for s in self.states)

    def state(self, edge: int) -> str:
        return self.states[edge]

    def divisor(self) -> Divisor:
        vals = [-1] * self.graph.n_vertices
        for e, (t, h) in enumerate(self.graph.edge_index_pairs):
            s = self.states[e]
            if s == FORWARD:
                vals[h] += 1
            elif s == BACKWARD:
                vals[t] += 1
            elif s == BIORIENTED:
                vals[t] += 1
                vals[h] += 1
        return Divisor(tuple(vals), self.graph)

    def negate(self) -> "Fourientation":
        """Reverse one-way arcs; bioriented and unoriented stay put."""
        flip = {FORWARD: BACKWARD, BACKWARD: FORWARD}
        return Fourientation(
            tuple(flip.get(s, s) for s in self.states), self.graph
        )

    def complement(self) -> "Fourientation":
        """Reverse one-way arcs and swap bioriented with unoriented."""
        flip = {
            FORWARD: BACKWARD,
            BACKWARD: FORWARD,
            BIORIENTED: UNORIENTED,
            UNORIENTED: BIORIENTED,
        }
        return Fourientation(tuple(flip[s] for s in self.states), self.graph)

    def contains(self, sset: SignedEdgeSet) -> bool:
        """Signed-set containment: one-way arcs match, bioriented is free."""
        for e, sgn in sset.items:
            s = self.states[e]
            if s == BIORIENTED:
                continue
            if s == UNORIENTED:
                return False
            if (s == FORWARD) != (sgn == 1):
                return False
        return True

    def reverse(self, sset: SignedEdgeSet) -> "Fourientation":
        """Reverse a signed set that is fully one-way and aligned here."""
        states = list(self.states)
        for e, sgn in sset.items:
            want = FORWARD if sgn == 1 else BACKWARD
            if states[e] != want:
                raise GraphError(
                    "not a directed cycle/cocycle of this orientation"
                )
            states[e] = BACKWARD if sgn == 1 else FORWARD
        return Fourientation(tuple(states), self.graph)

    def restrict(self, edges, fill: str = UNORIENTED) -> "Fourientation":
        keep = set(edges)
        return Fourientation(
            tuple(s if e in keep else fill for e, s in enumerate(self.states)),
            self.graph,
        )

    def to_dot(self, name: str = "F", labels=None) -> str:
        """DOT digraph; bioriented edges double-arrowed, unoriented dashed."""
        g = self.graph
        lines = [f"digraph {name} {{"]
        for v in g.vertices:
            if labels and v in labels:
                lines.append(f'  "{v}" [label="{v}:{labels[v]}"];')
            else:
                lines.append(f'  "{v}";')
        for e, (t, h) in enumerate(g.edges):
            s = self.states[e]
            if s == FORWARD:
                lines.append(f'  "{t}" -> "{h}";')
            elif s == BACKWARD:
                lines.append(f'  "{h}" -> "{t}";')
            elif s == BIORIENTED:
                lines.append(f'  "{t}" -> "{h}" [dir=both];')
            else:
                lines.append(f'  "{t}" -> "{h}" [dir=none, style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"


EXTERNAL = "external"
INTERNAL = "internal"


@dataclass(frozen=True)
class OrientedBase:
    """Spanning tree plus a fourientation of the matching flavor."""

    tree: SpanningTree
    four: Fourientation
    flavor: str

    def __post_init__(self):
        if self.flavor not in (EXTERNAL, INTERNAL):
            raise GraphError(f"unknown flavor {self.flavor!r}")
        for e, s in enumerate(self.four.states):
            internal = e in self.tree
            if self.flavor == EXTERNAL:
                ok = s == BIORIENTED if internal else s in (FORWARD, BACKWARD)
            else:
                ok = s in (FORWARD, BACKWARD) if internal else s == BIORIENTED
            if not ok:
                raise GraphError(
                    f"edge {e} state {s!r} invalid for {self.flavor} base"
                )

    @property
    def graph(self) -> Graph:
        return self.four.graph


def intersect(external: OrientedBase, internal: OrientedBase) -> Fourientation:
    """Overlay of an external and an internal base on the same tree.

    Tree edges take the internal base's arcs, non-tree edges the
    external base's arcs; the result is a full orientation.
    """
    if external.flavor != EXTERNAL or internal.flavor != INTERNAL:
        raise GraphError("intersect expects (external, internal) bases")
    if external.tree.mask != internal.tree.mask:
        raise GraphError("bases are on different trees")
    g = external.graph
    states = tuple(
        internal.four.states[e] if e in external.tree else external.four.states[e]
        for e in range(g.n_edges)
    )
    return Fourientation(states, g)


def same_reversal_class(o1: Fourientation, o2: Fourientation, q=None) -> bool:
    """Cycle/cocycle-reversal equivalence of two full orientations.

    Decided through divisor linear equivalence, which matches the
    reversal relation for orientations of connected graphs.
    """
    if o1.graph is not o2.graph:
        raise GraphError("orientations live on different graphs")
    if not o1.is_orientation or not o2.is_orientation:
        raise GraphError("reversal classes are defined for full orientations")
    return linearly_equivalent(o1.divisor(), o2.divisor(), q)
