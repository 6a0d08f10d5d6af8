"""Circuit and cocircuit signatures, their atlases, and acyclicity.

A signature fixes one direction for every simple cycle (circuit flavor)
or every bond (cocircuit flavor) of the graph.  Internally it is a sign
vector relative to the graph's canonical signed circuits/bonds, which
makes signatures hashable and flips cheap.

A signature induces an atlas: one oriented base per spanning tree, with
each relevant edge oriented to match the signature on its fundamental
cycle (circuit flavor, external bases) or fundamental cut (cocircuit
flavor, internal bases).  Triangulating signatures are those whose
atlas swallows every signed circuit/cocircuit it contains; acyclic
signatures (no nontrivial nonnegative combination of chosen directions
vanishes) are certified by an exact separating functional.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .chipfiring import PicardClass, reduce_divisor
from .exactlp import LpProblem, solve_lp
from .graphs import Graph, GraphError, SignedEdgeSet, SpanningTree
from .orientations import (
    BACKWARD,
    BIORIENTED,
    EXTERNAL,
    FORWARD,
    INTERNAL,
    Fourientation,
    OrientedBase,
    intersect,
)

__all__ = [
    "Atlas",
    "CIRCUIT",
    "COCIRCUIT",
    "Signature",
    "acyclicity_certificate",
    "atlas_from_signature",
    "bby_map",
    "is_acyclic",
    "is_triangulating_signature",
    "reference_signature",
    "signature_from_weights",
    "signature_of_atlas",
]

CIRCUIT = "circuit"
COCIRCUIT = "cocircuit"


def _canonical_sets(graph: Graph, flavor: str) -> tuple[SignedEdgeSet, ...]:
    if flavor == CIRCUIT:
        return graph.circuits()
    if flavor == COCIRCUIT:
        return tuple(sset for sset, _ in graph.bonds())
    raise GraphError(f"unknown signature flavor {flavor!r}")


@dataclass(frozen=True)
class Signature:
    """Total choice of direction per circuit or per bond."""

    flavor: str
    signs: tuple[int, ...]  # +-1 relative to the canonical signed sets
    graph: Graph = field(compare=False, repr=False)

    def __post_init__(self):
        base = _canonical_sets(self.graph, self.flavor)
        if len(self.signs) != len(base):
            raise GraphError("sign count does not match support count")
        if any(s not in (1, -1) for s in self.signs):
            raise GraphError("signature signs must be +-1")

    @property
    def _base(self) -> tuple[SignedEdgeSet, ...]:
        return _canonical_sets(self.graph, self.flavor)

    @property
    def supports(self) -> tuple[frozenset[int], ...]:
        return tuple(ss.support for ss in self._base)

    def signed_sets(self) -> tuple[SignedEdgeSet, ...]:
        return tuple(
            ss if sgn == 1 else ss.negate()
            for ss, sgn in zip(self._base, self.signs)
        )

    def _position(self, support: frozenset[int]) -> int:
        for i, ss in enumerate(self._base):
            if ss.support == support:
                return i
        raise GraphError("support is not a circuit/bond of this graph")

    def value(self, support) -> SignedEdgeSet:
        i = self._position(frozenset(support))
        ss = self._base[i]
        return ss if self.signs[i] == 1 else ss.negate()

    def flip(self, support) -> "Signature":
        """Negate the chosen direction on one support."""
        i = self._position(frozenset(support))
        signs = list(self.signs)
        signs[i] = -signs[i]
        return Signature(self.flavor, tuple(signs), self.graph)

    def to_json_obj(self) -> list[dict]:
        out = []
        for ss in self.signed_sets():
            out.append(
                {
                    "support": [e for e, _ in ss.items],
                    "signs": [s for _, s in ss.items],
                }
            )
        return out


def signature_from_weights(graph: Graph, flavor: str, weights: Sequence) -> Signature:
    """Signature picking the direction with positive weight pairing.

    ``weights`` is a rational vector indexed by edges; it must be
    generic (no circuit/bond pairs to zero), otherwise the offending
    support is named in the error.
    """
    if len(weights) != graph.n_edges:
        raise GraphError("weight count does not match edge count")
    w = [Fraction(x) for x in weights]
    signs = []
    for ss in _canonical_sets(graph, flavor):
        val = sum(w[e] * s for e, s in ss.items)
        if val == 0:
            support = sorted(ss.support)
            raise GraphError(
                f"weights are orthogonal to the {flavor} with support {support}"
            )
        signs.append(1 if val > 0 else -1)
    return Signature(flavor, tuple(signs), graph)


def acyclicity_certificate(sig: Signature) -> Optional[list[Fraction]]:
    """Weight vector w with <w, sigma(C)> > 0 for every support, or None.

    Existence of such a separating functional is equivalent to no
    nontrivial nonnegative combination of the chosen directions summing
    to zero.  Solved exactly: maximize t subject to <w, sigma(C)> >= t
    and t <= 1; acyclic iff the optimum is positive.
    """
    m = sig.graph.n_edges
    vectors = [ss.vector() for ss in sig.signed_sets()]
    if not vectors:
        return [Fraction(0)] * m
    prob = LpProblem(objective=[Fraction(0)] * m + [Fraction(1)])
    for vec in vectors:
        prob.add([Fraction(x) for x in vec] + [Fraction(-1)], ">=", 0)
    prob.add([Fraction(0)] * m + [Fraction(1)], "<=", 1)
    res = solve_lp(prob)
    if res.status != "optimal":  # pragma: no cover - t<=1 keeps it bounded
        raise GraphError(f"acyclicity LP ended {res.status}")
    if res.value <= 0:
        return None
    return res.point[:m]


def is_acyclic(sig: Signature) -> bool:
    return acyclicity_certificate(sig) is not None


@dataclass(frozen=True)
class Atlas:
    """One oriented base per spanning tree, ordered by tree bitmask."""

    flavor: str  # base flavor: external (circuit side) or internal (cocircuit)
    bases: tuple[OrientedBase, ...]
    graph: Graph = field(compare=False, repr=False)
    source: Optional[Signature] = field(default=None, compare=False)

    def __post_init__(self):
        masks = [b.tree.mask for b in self.bases]
        if masks != sorted(set(masks)):
            raise GraphError("atlas bases must be sorted by tree bitmask")
        if len(masks) != len(self.graph.spanning_trees()):
            raise GraphError("atlas must cover every spanning tree exactly once")

    def base_for(self, tree: SpanningTree) -> OrientedBase:
        for b in self.bases:
            if b.tree.mask == tree.mask:
                return b
        raise GraphError("tree is not in this atlas")

    def to_json_obj(self) -> dict:
        return {str(b.tree.mask): b.four.encoding for b in self.bases}


def atlas_from_signature(sig: Signature) -> Atlas:
    """Orient every tree's relevant edges to match the signature.

    Circuit flavor: external bases, each non-tree edge oriented as the
    signature's direction of its fundamental cycle.  Cocircuit flavor:
    internal bases, each tree edge oriented as the signature's direction
    of its fundamental cut.
    """
    g = sig.graph
    chosen_by_support = {
        ss.support: (ss if sgn == 1 else ss.negate())
        for ss, sgn in zip(_canonical_sets(g, sig.flavor), sig.signs)
    }
    bases = []
    for tree in g.spanning_trees():
        states = [BIORIENTED] * g.n_edges
        if sig.flavor == CIRCUIT:
            for e in tree.external_indices:
                chosen = chosen_by_support[g.fundamental_cycle(tree, e).support]
                states[e] = FORWARD if chosen.sign(e) == 1 else BACKWARD
            flavor = EXTERNAL
        else:
            for e in tree.edge_indices:
                cut, _ = g.fundamental_cocycle(tree, e)
                chosen = chosen_by_support[cut.support]
                states[e] = FORWARD if chosen.sign(e) == 1 else BACKWARD
            flavor = INTERNAL
        bases.append(OrientedBase(tree, Fourientation(tuple(states), g), flavor))
    return Atlas(
        EXTERNAL if sig.flavor == CIRCUIT else INTERNAL,
        tuple(bases),
        g,
        source=sig,
    )


def signature_of_atlas(atlas: Atlas) -> Optional[Signature]:
    """Recover the inducing signature, or None when bases disagree.

    Every bond is a fundamental cut of some tree and every circuit a
    fundamental cycle of some tree, so an atlas of the form
    ``atlas_from_signature(s)`` determines s completely; inconsistent
    atlases return None.
    """
    g = atlas.graph
    flavor = CIRCUIT if atlas.flavor == EXTERNAL else COCIRCUIT
    base_sets = _canonical_sets(g, flavor)
    index = {ss.support: i for i, ss in enumerate(base_sets)}
    signs: dict[int, int] = {}
    for b in atlas.bases:
        tree = b.tree
        edges = tree.external_indices if atlas.flavor == EXTERNAL else tree.edge_indices
        for e in edges:
            if atlas.flavor == EXTERNAL:
                sset = g.fundamental_cycle(tree, e)
            else:
                sset, _ = g.fundamental_cocycle(tree, e)
            i = index[sset.support]
            # base arc at e vs the canonical sign at e
            arc = 1 if b.four.states[e] == FORWARD else -1
            sgn = 1 if arc == base_sets[i].sign(e) else -1
            if signs.setdefault(i, sgn) != sgn:
                return None
    if len(signs) != len(base_sets):  # pragma: no cover - totality is structural
        return None
    return Signature(flavor, tuple(signs[i] for i in range(len(base_sets))), g)


def is_triangulating_signature(sig: Signature) -> bool:
    """Whether every signed support inside an atlas base is the chosen one.

    A signed circuit/cocircuit is contained in a base when all its
    one-way edges match and the rest are bioriented; the signature is
    triangulating when each such containment agrees with its choice.
    """
    atlas = atlas_from_signature(sig)
    base_sets = _canonical_sets(sig.graph, sig.flavor)
    for b in atlas.bases:
        for ss, sgn in zip(base_sets, sig.signs):
            chosen = ss if sgn == 1 else ss.negate()
            if b.four.contains(chosen):
                continue
            if b.four.contains(chosen.negate()):
                return False
    return True


def reference_signature(graph: Graph, q) -> Signature:
    """Cocircuit signature orienting every bond away from q's side."""
    qi = graph.vertex_index(q)
    signs = []
    for sset, plus_side in graph.bonds():
        # +1 direction points into plus_side; q must be outside it
        signs.append(-1 if graph.vertices[qi] in plus_side else 1)
    return Signature(COCIRCUIT, tuple(signs), graph)


def bby_map(
    external_atlas: Atlas, internal_atlas: Atlas, q=None
) -> dict[SpanningTree, PicardClass]:
    """Tree -> class of the overlay orientation's divisor; injective.

    Precondition: at least one of the atlases is induced by a
    triangulating signature (checked when sources are recorded;
    otherwise the caller asserts).  A collision means the atlas pair
    fails to dissect and raises.
    """
    if external_atlas.flavor != EXTERNAL or internal_atlas.flavor != INTERNAL:
        raise GraphError("bby_map expects (external atlas, internal atlas)")
    g = external_atlas.graph
    if g is not internal_atlas.graph:
        raise GraphError("atlases live on different graphs")
    sources = [a.source for a in (external_atlas, internal_atlas) if a.source]
    if sources and not any(is_triangulating_signature(s) for s in sources):
        raise GraphError("neither source signature is triangulating")
    out: dict[SpanningTree, PicardClass] = {}
    seen: dict[PicardClass, SpanningTree] = {}
    for tree in g.spanning_trees():
        ori = intersect(external_atlas.base_for(tree), internal_atlas.base_for(tree))
        cls = reduce_divisor(ori.divisor(), q)
        if cls in seen:
            raise GraphError("atlas pair is not dissecting")
        seen[cls] = tree
        out[tree] = cls
    return out
