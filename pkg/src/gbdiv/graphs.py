"""Connected multigraphs with ordered vertices and reference-oriented edges.

The ``Graph`` type is immutable and is the hub every other module hangs
off: spanning tree enumeration, fundamental cycles and cocycles, simple
cycles and bonds with canonical signs, biconnected vertex subsets, and
the text/JSON/DOT interchange formats.

Edges are ordered pairs ``(tail, head)``; the pair fixes the reference
orientation that signed edge sets and fourientations are expressed
against.  Parallel edges are allowed, loops are not.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence


class GraphError(ValueError):
    """Violated precondition or malformed graph data."""


@dataclass(frozen=True)
class EnumerationBudget:
    """Caps for the exponential enumerations; override per call as needed."""

    max_vertices: int = 14
    max_edges: int = 20


DEFAULT_BUDGET = EnumerationBudget()


@dataclass(frozen=True, order=True)
class SpanningTree:
    """Spanning tree of its parent graph, stored as an edge-index bitmask."""

    mask: int
    graph: "Graph" = field(compare=False, repr=False)

    @property
    def edge_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.graph.n_edges) if self.mask >> i & 1)

    @property
    def external_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.graph.n_edges) if not self.mask >> i & 1)

    def __contains__(self, edge: int) -> bool:
        return bool(self.mask >> edge & 1)


@dataclass(frozen=True)
class SignedEdgeSet:
    """Sparse assignment of +-1 signs to a nonempty set of edges."""

    items: tuple[tuple[int, int], ...]  # (edge index, sign), sorted by edge
    graph: "Graph" = field(compare=False, repr=False)

    def __post_init__(self):
        if not self.items:
            raise GraphError("signed edge set must be nonempty")
        prev = -1
        for e, s in self.items:
            if s not in (1, -1):
                raise GraphError(f"sign of edge {e} must be +-1")
            if e <= prev or not 0 <= e < self.graph.n_edges:
                raise GraphError("edges must be distinct, sorted and in range")
            prev = e

    @classmethod
    def from_dict(cls, graph: "Graph", signs: dict[int, int]) -> "SignedEdgeSet":
        return cls(tuple(sorted(signs.items())), graph)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(e for e, _ in self.items)

    def sign(self, edge: int) -> int:
        for e, s in self.items:
            if e == edge:
                return s
        return 0

    def negate(self) -> "SignedEdgeSet":
        return SignedEdgeSet(tuple((e, -s) for e, s in self.items), self.graph)

    def vector(self) -> tuple[int, ...]:
        out = [0] * self.graph.n_edges
        for e, s in self.items:
            out[e] = s
        return tuple(out)


class Graph:
    """Immutable connected loopless multigraph.

    ``vertices`` fixes the coordinate order used by divisors and
    polarizations; ``edges`` fixes both the edge indexing and each
    edge's reference orientation.
    """

    def __init__(self, vertices: Iterable, edges: Iterable[Sequence]):
        vs = tuple(vertices)
        if not vs:
            raise GraphError("graph needs at least one vertex")
        if len(set(vs)) != len(vs):
            raise GraphError("duplicate vertex")
        index = {v: i for i, v in enumerate(vs)}
        pairs = []
        for e in edges:
            t, h = e
            if t not in index or h not in index:
                raise GraphError(f"edge ({t!r}, {h!r}) uses an unknown vertex")
            if t == h:
                raise GraphError(f"loop at {t!r} not allowed")
            pairs.append((t, h))
        self.vertices = vs
        self.edges = tuple(pairs)
        self._index = index
        self.edge_index_pairs = tuple((index[t], index[h]) for t, h in pairs)
        inc: list[list[int]] = [[] for _ in vs]
        for e, (ti, hi) in enumerate(self.edge_index_pairs):
            inc[ti].append(e)
            inc[hi].append(e)
        self._incident = tuple(tuple(lst) for lst in inc)
        self._cache: dict = {}
        if not self._connected_all():
            raise GraphError("graph is not connected")

    # -- basics ---------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def genus(self) -> int:
        """First Betti number |E| - |V| + 1 (the graph is connected)."""
        return self.n_edges - self.n_vertices + 1

    def vertex_index(self, v) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def degree(self, v) -> int:
        return len(self._incident[self.vertex_index(v)])

    def incident_edges(self, vi: int) -> tuple[int, ...]:
        return self._incident[vi]

    def other_end(self, edge: int, vi: int) -> int:
        t, h = self.edge_index_pairs[edge]
        return h if vi == t else t

    def __repr__(self) -> str:
        return f"Graph({self.n_vertices} vertices, {self.n_edges} edges)"

    def _connected_all(self) -> bool:
        return self._component(0, (1 << self.n_vertices) - 1, None) == (
            1 << self.n_vertices
        ) - 1

    def _component(self, start: int, allowed: int, edge_mask: Optional[int]) -> int:
        """Bitmask of vertices reachable from start inside ``allowed``.

        With ``edge_mask`` set, only edges in the mask are traversed.
        """
        seen = 1 << start
        stack = [start]
        while stack:
            v = stack.pop()
            for e in self._incident[v]:
                if edge_mask is not None and not edge_mask >> e & 1:
                    continue
                u = self.other_end(e, v)
                if allowed >> u & 1 and not seen >> u & 1:
                    seen |= 1 << u
                    stack.append(u)
        return seen

    # -- Laplacians ------------------------------------------------------

    def laplacian(self) -> list[list[int]]:
        n = self.n_vertices
        lap = [[0] * n for _ in range(n)]
        for ti, hi in self.edge_index_pairs:
            lap[ti][ti] += 1
            lap[hi][hi] += 1
            lap[ti][hi] -= 1
            lap[hi][ti] -= 1
        return lap

    def reduced_laplacian(self, q=None) -> list[list[int]]:
        qi = 0 if q is None else self.vertex_index(q)
        lap = self.laplacian()
        keep = [i for i in range(self.n_vertices) if i != qi]
        return [[lap[i][j] for j in keep] for i in keep]

    # -- spanning trees ---------------------------------------------------

    def spanning_trees(self, budget: EnumerationBudget = DEFAULT_BUDGET) -> tuple[SpanningTree, ...]:
        """All spanning trees, deterministic, ascending by edge bitmask."""
        if "trees" not in self._cache:
            if self.n_edges > budget.max_edges:
                raise GraphError("enumeration too large")
            self._cache["trees"] = tuple(
                SpanningTree(mask, self) for mask in sorted(self._tree_masks())
            )
        return self._cache["trees"]

    def _tree_masks(self) -> Iterator[int]:
        n, m = self.n_vertices, self.n_edges
        need = n - 1
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        chosen: list[int] = []

        def rec(i: int, count: int) -> Iterator[int]:
            if count == need:
                yield sum(1 << e for e in chosen)
                return
            if m - i < need - count:
                return
            ti, hi = self.edge_index_pairs[i]
            rt, rh = find(ti), find(hi)
            if rt != rh:
                saved = parent[:]
                parent[rh] = rt
                chosen.append(i)
                yield from rec(i + 1, count + 1)
                chosen.pop()
                parent[:] = saved
            yield from rec(i + 1, count)

        yield from rec(0, 0)

    def spanning_tree_count(self) -> int:
        if "tree_count" not in self._cache:
            from .exactlp import determinant

            if self.n_vertices == 1:
                self._cache["tree_count"] = 1
            else:
                self._cache["tree_count"] = abs(determinant(self.reduced_laplacian()))
        return self._cache["tree_count"]

    # -- fundamental cycles and cocycles ----------------------------------

    def fundamental_cycle(self, tree: SpanningTree, edge: int) -> SignedEdgeSet:
        """Signed cycle closed by external ``edge``; ``edge`` carries +1."""
        if edge in tree:
            raise GraphError("edge is internal")
        key = ("fcycle", tree.mask, edge)
        if key in self._cache:
            return self._cache[key]
        ti, hi = self.edge_index_pairs[edge]
        # walk the tree path head -> tail; with the +1 traversal of `edge`
        # this closes the cycle.
        prev: dict[int, tuple[int, int]] = {hi: (-1, -1)}
        stack = [hi]
        while stack:
            v = stack.pop()
            if v == ti:
                break
            for e in self._incident[v]:
                if e != edge and e in tree:
                    u = self.other_end(e, v)
                    if u not in prev:
                        prev[u] = (v, e)
                        stack.append(u)
        signs = {edge: 1}
        v = ti
        while v != hi:
            u, e = prev[v]
            et, _ = self.edge_index_pairs[e]
            # traversed u -> v along the path; +1 iff that matches (tail, head)
            signs[e] = 1 if et == u else -1
            v = u
        out = SignedEdgeSet.from_dict(self, signs)
        self._cache[key] = out
        return out

    def fundamental_cocycle(
        self, tree: SpanningTree, edge: int
    ) -> tuple[SignedEdgeSet, frozenset]:
        """Signed cut of tree edge ``edge`` plus the side it points into.

        The cut side ``W`` is the component of the tree minus ``edge``
        containing the edge's head; crossing edges get +1 when their
        reference orientation points into ``W``; ``edge`` carries +1.
        """
        if edge not in tree:
            raise GraphError("edge is external")
        key = ("fcocycle", tree.mask, edge)
        if key in self._cache:
            return self._cache[key]
        _, hi = self.edge_index_pairs[edge]
        wmask = self._component(
            hi, (1 << self.n_vertices) - 1, tree.mask & ~(1 << edge)
        )
        signs: dict[int, int] = {}
        for e, (t, h) in enumerate(self.edge_index_pairs):
            into = bool(wmask >> h & 1)
            outof = bool(wmask >> t & 1)
            if into != outof:
                signs[e] = 1 if into else -1
        side = frozenset(self.vertices[i] for i in self._bits(wmask))
        out = (SignedEdgeSet.from_dict(self, signs), side)
        self._cache[key] = out
        return out

    @staticmethod
    def _bits(mask: int) -> Iterator[int]:
        i = 0
        while mask:
            if mask & 1:
                yield i
            mask >>= 1
            i += 1

    # -- vertex subsets ----------------------------------------------------

    def subset_mask(self, subset: Iterable) -> int:
        mask = 0
        for v in subset:
            mask |= 1 << self.vertex_index(v)
        return mask

    def _subset_from_mask(self, mask: int) -> frozenset:
        return frozenset(self.vertices[i] for i in self._bits(mask))

    def is_connected_subset(self, mask: int) -> bool:
        if mask == 0:
            return False
        start = next(self._bits(mask))
        return self._component(start, mask, None) == mask

    def biconnected_subsets(
        self, budget: EnumerationBudget = DEFAULT_BUDGET
    ) -> tuple[frozenset, ...]:
        """Nonempty proper W with both G[W] and G[W^c] connected.

        Both sides of each split are listed.  Deterministic order:
        by size, then by sorted vertex indices.
        """
        if "biconn" not in self._cache:
            n = self.n_vertices
            if n > budget.max_vertices:
                raise GraphError("enumeration too large")
            full = (1 << n) - 1
            found = []
            for mask in range(1, full):
                if self.is_connected_subset(mask) and self.is_connected_subset(
                    full ^ mask
                ):
                    found.append(mask)
            found.sort(key=lambda m: (bin(m).count("1"), tuple(self._bits(m))))
            self._cache["biconn"] = tuple(self._subset_from_mask(m) for m in found)
        return self._cache["biconn"]

    def crossing_edges(self, subset: Iterable) -> frozenset[int]:
        mask = self.subset_mask(subset)
        return frozenset(
            e
            for e, (t, h) in enumerate(self.edge_index_pairs)
            if (mask >> t & 1) != (mask >> h & 1)
        )

    def cut_size(self, subset: Iterable) -> int:
        mask = self.subset_mask(subset)
        if mask == 0 or mask == (1 << self.n_vertices) - 1:
            raise GraphError("cut side must be a nonempty proper subset")
        return len(self.crossing_edges(subset))

    def induced_edge_count(self, subset: Iterable) -> int:
        mask = self.subset_mask(subset)
        return sum(
            1
            for t, h in self.edge_index_pairs
            if mask >> t & 1 and mask >> h & 1
        )

    def induced_genus(self, subset: Iterable) -> int:
        """Genus of G[W]; W must induce a connected subgraph."""
        mask = self.subset_mask(subset)
        if not self.is_connected_subset(mask):
            raise GraphError("subset does not induce a connected subgraph")
        return self.induced_edge_count(subset) - bin(mask).count("1") + 1

    # -- circuits and bonds -------------------------------------------------

    def circuits(self) -> tuple[SignedEdgeSet, ...]:
        """All simple cycles with a canonical sign (+1 on the least edge).

        Each cycle is found once: from its least vertex, in the direction
        whose second vertex is smaller than its last (parallel pairs by
        edge order instead).
        """
        if "circuits" not in self._cache:
            found: dict[frozenset, SignedEdgeSet] = {}
            n = self.n_vertices
            for s in range(n):
                path_edges: list[tuple[int, int]] = []  # (edge, sign along walk)
                path_verts: list[int] = [s]
                on_path = {s}

                def walk(v: int) -> None:
                    for e in self._incident[v]:
                        if any(e == pe for pe, _ in path_edges):
                            continue
                        t, h = self.edge_index_pairs[e]
                        u = h if v == t else t
                        sgn = 1 if v == t else -1
                        if u == s:
                            if len(path_verts) == 2:
                                if e < path_edges[0][0]:
                                    continue
                            elif path_verts[1] > path_verts[-1]:
                                continue
                            cyc = dict(path_edges)
                            cyc[e] = sgn
                            sset = SignedEdgeSet.from_dict(self, cyc)
                            if sset.items[0][1] == -1:
                                sset = sset.negate()
                            found.setdefault(sset.support, sset)
                        elif u not in on_path and u > s:
                            on_path.add(u)
                            path_verts.append(u)
                            path_edges.append((e, sgn))
                            walk(u)
                            path_edges.pop()
                            path_verts.pop()
                            on_path.remove(u)

                walk(s)
            ordered = sorted(
                found.values(), key=lambda ss: (len(ss.items), ss.items)
            )
            self._cache["circuits"] = tuple(ordered)
        return self._cache["circuits"]

    def bonds(
        self, budget: EnumerationBudget = DEFAULT_BUDGET
    ) -> tuple[tuple[SignedEdgeSet, frozenset], ...]:
        """All bonds as (canonical signed cut, side the +1 direction enters).

        One entry per unordered split {W, W^c}; canonical sign puts +1 on
        the least crossing edge.  Order: by support size then support.
        """
        if "bonds" not in self._cache:
            seen: set[frozenset] = set()
            out = []
            for side in self.biconnected_subsets(budget):
                support = self.crossing_edges(side)
                if support in seen:
                    continue
                seen.add(support)
                mask = self.subset_mask(side)
                signs = {}
                for e in sorted(support):
                    _, h = self.edge_index_pairs[e]
                    signs[e] = 1 if mask >> h & 1 else -1
                sset = SignedEdgeSet.from_dict(self, signs)
                plus_side = side
                if sset.items[0][1] == -1:
                    sset = sset.negate()
                    plus_side = frozenset(self.vertices) - side
                out.append((sset, plus_side))
            out.sort(key=lambda pair: (len(pair[0].items), pair[0].items))
            self._cache["bonds"] = tuple(out)
        return self._cache["bonds"]

    # -- interchange formats -------------------------------------------------

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        """Parse "tail head" per line; vertex order = first appearance."""
        vertices: list[str] = []
        seen = set()
        edges = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphError(f"line {lineno}: expected 'tail head'")
            for v in parts:
                if v not in seen:
                    seen.add(v)
                    vertices.append(v)
            edges.append((parts[0], parts[1]))
        return cls(vertices, edges)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Graph":
        if not isinstance(obj, dict) or "vertices" not in obj or "edges" not in obj:
            raise GraphError("graph JSON needs 'vertices' and 'edges'")
        edges = []
        for e in obj["edges"]:
            if not isinstance(e, (list, tuple)) or len(e) != 2:
                raise GraphError("each edge must be a [tail, head] pair")
            edges.append((e[0], e[1]))
        return cls(obj["vertices"], edges)

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from None
        return cls.from_json_obj(obj)

    @classmethod
    def parse(cls, text: str) -> "Graph":
        """Auto-detect JSON vs edge-list text."""
        if text.lstrip().startswith("{"):
            return cls.from_json(text)
        return cls.from_edge_list(text)

    def to_json_obj(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[t, h] for t, h in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    def to_dot(self, labels: Optional[dict] = None, name: str = "G") -> str:
        """Undirected DOT; ``labels`` maps vertex -> extra label text."""
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            if labels and v in labels:
                lines.append(f'  "{v}" [label="{v}:{labels[v]}"];')
            else:
                lines.append(f'  "{v}";')
        for t, h in self.edges:
            lines.append(f'  "{t}" -- "{h}";')
        lines.append("}")
        return "\n".join(lines) + "\n"
