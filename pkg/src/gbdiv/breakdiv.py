"""Break divisors, tree charges, and certified representative sets.

A break divisor places one chip at the head of each non-tree arc of an
externally oriented spanning tree.  A tree charge shifts each tree's
break divisors by a degree-zero divisor; the charge induced by a
triangulating cocircuit signature yields a generalized break divisor
set that hits every divisor class of degree equal to the genus exactly
once, and ``certify_complete`` checks exactly that claim.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .chipfiring import Divisor, picard_class_count, reduce_divisor
from .graphs import Graph, GraphError, SpanningTree
from .orientations import (
    BACKWARD,
    FORWARD,
    INTERNAL,
    UNORIENTED,
    Fourientation,
    OrientedBase,
)
from .signatures import (
    COCIRCUIT,
    Signature,
    atlas_from_signature,
    is_triangulating_signature,
)

__all__ = [
    "CertifyResult",
    "RepresentativeSet",
    "TreeCharge",
    "all_break_divisors",
    "break_divisor",
    "certify_complete",
    "charge_from_signature",
    "external_orientations",
    "generalized_break_divisors",
]


def break_divisor(tree: SpanningTree, ext: Fourientation) -> Divisor:
    """One chip at the head of each non-tree arc; tree edges unoriented."""
    g = ext.graph
    vals = [0] * g.n_vertices
    for e, (t, h) in enumerate(g.edge_index_pairs):
        s = ext.states[e]
        if e in tree:
            if s != UNORIENTED:
                raise GraphError("tree edges must be unoriented here")
        elif s == FORWARD:
            vals[h] += 1
        elif s == BACKWARD:
            vals[t] += 1
        else:
            raise GraphError("every non-tree edge must be one-way")
    return Divisor(tuple(vals), g)


def external_orientations(tree: SpanningTree) -> Iterator[Fourientation]:
    """All one-way orientations of the non-tree edges, deterministic order."""
    g = tree.graph
    externals = tree.external_indices
    for combo in itertools.product((FORWARD, BACKWARD), repeat=len(externals)):
        states = [UNORIENTED] * g.n_edges
        for e, s in zip(externals, combo):
            states[e] = s
        yield Fourientation(tuple(states), g)


@dataclass(frozen=True)
class RepresentativeSet:
    """Sorted set of degree-g divisors plus how it was produced."""

    divisors: tuple[Divisor, ...]
    provenance: str
    graph: Graph = field(compare=False, repr=False)

    def __post_init__(self):
        vals = [d.values for d in self.divisors]
        if vals != sorted(set(vals)):
            raise GraphError("representative set must be sorted and duplicate-free")

    def __len__(self) -> int:
        return len(self.divisors)

    def to_json_obj(self) -> dict:
        return {
            "divisors": [list(d.values) for d in self.divisors],
            "provenance": self.provenance,
            "size": len(self.divisors),
        }


@dataclass
class TreeCharge:
    """Degree-zero divisor per spanning tree."""

    graph: Graph
    values: dict[int, Divisor]  # tree bitmask -> divisor
    provenance: str

    def __post_init__(self):
        trees = {t.mask for t in self.graph.spanning_trees()}
        if set(self.values) != trees:
            raise GraphError("charge must cover every spanning tree exactly once")
        for mask, div in self.values.items():
            if div.degree != 0:
                raise GraphError(f"charge of tree {mask} has nonzero degree")

    @classmethod
    def zero(cls, graph: Graph) -> "TreeCharge":
        z = Divisor.zero(graph)
        return cls(
            graph,
            {t.mask: z for t in graph.spanning_trees()},
            provenance="zero",
        )

    def charge(self, tree: SpanningTree) -> Divisor:
        return self.values[tree.mask]

    def to_json_obj(self) -> dict:
        return {
            "provenance": self.provenance,
            "charges": {
                str(mask): list(div.values)
                for mask, div in sorted(self.values.items())
            },
        }


def _collect(graph: Graph, charge: Optional[TreeCharge], provenance: str) -> RepresentativeSet:
    seen = set()
    out = []
    for tree in graph.spanning_trees():
        shift = charge.charge(tree) if charge else None
        for ext in external_orientations(tree):
            d = break_divisor(tree, ext)
            if shift:
                d = d + shift
            if d.values not in seen:
                seen.add(d.values)
                out.append(d)
    out.sort(key=lambda d: d.values)
    return RepresentativeSet(tuple(out), provenance, graph)


def all_break_divisors(graph: Graph, certify: bool = True) -> RepresentativeSet:
    """Every break divisor over every tree; certified complete by default."""
    rset = _collect(graph, None, "break-divisors")
    if certify:
        result = certify_complete(rset)
        if not result.complete:  # pragma: no cover - would falsify the theory
            raise RuntimeError(
                f"break divisor set failed certification: {result.reason}"
            )
    return rset


def charge_from_signature(sig: Signature, q, check: bool = True) -> TreeCharge:
    """Charge of a triangulating cocircuit signature, rooted at q.

    For each tree, take the signature's internal base, keep the tree
    arcs and drop the bioriented externals (negated complement), read
    off the divisor and add one chip at q.  The result has degree zero
    per tree.
    """
    if sig.flavor != COCIRCUIT:
        raise GraphError("charges come from cocircuit signatures")
    if check and not is_triangulating_signature(sig):
        raise GraphError("signature is not triangulating")
    g = sig.graph
    qv = Divisor.indicator(g, q)
    atlas = atlas_from_signature(sig)
    values = {}
    for base in atlas.bases:
        kept = base.four.complement().negate()
        values[base.tree.mask] = kept.divisor() + qv
    return TreeCharge(g, values, provenance=f"signature(q={q!r})")


def generalized_break_divisors(charge: TreeCharge) -> RepresentativeSet:
    """Break divisors shifted per tree by the charge, deduplicated."""
    return _collect(charge.graph, charge, f"generalized[{charge.provenance}]")


@dataclass(frozen=True)
class CertifyResult:
    """Outcome of completeness certification for a representative set."""

    complete: bool
    size: int
    class_count: int
    expected: int
    reason: str = ""
    witness: Optional[tuple[Divisor, Divisor]] = None

    def to_json_obj(self) -> dict:
        out = {
            "complete": self.complete,
            "size": self.size,
            "classes_hit": self.class_count,
            "expected": self.expected,
        }
        if not self.complete:
            out["reason"] = self.reason
            if self.witness:
                out["witness"] = [list(d.values) for d in self.witness]
        return out


def certify_complete(rset: RepresentativeSet) -> CertifyResult:
    """Certificate that the set hits every class of its degree once.

    Complete iff the divisors are pairwise inequivalent and their count
    equals the class count (= number of spanning trees).  Otherwise the
    result carries an equivalent pair or the cardinality mismatch.
    """
    g = rset.graph
    expected = picard_class_count(g)
    by_class: dict[tuple[int, ...], Divisor] = {}
    witness = None
    for d in rset.divisors:
        key = reduce_divisor(d).values
        if key in by_class and witness is None:
            witness = (by_class[key], d)
        by_class.setdefault(key, d)
    classes = len(by_class)
    if witness is not None:
        return CertifyResult(
            False,
            len(rset),
            classes,
            expected,
            reason="two representatives are linearly equivalent",
            witness=witness,
        )
    if len(rset) != expected:
        return CertifyResult(
            False,
            len(rset),
            classes,
            expected,
            reason=f"set has {len(rset)} divisors, expected {expected}",
        )
    return CertifyResult(True, len(rset), classes, expected)
