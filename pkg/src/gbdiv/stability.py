"""Stability conditions, polarizations, charges and cocycle flips.

A stability condition of degree d assigns an integer n_W to every
nontrivial biconnected vertex subset W subject to a complement identity
and a union window; a polarization phi (rational vertex weights with
integer total) induces one through ceilings when generic.  Both
directions of the dictionary between stability conditions and tree
charges are implemented, together with the canonical-type polarization,
cocycle flips on cocircuit signatures, shortest flip paths, and an
exact-LP classicality certificate for the stability condition induced
by an acyclic signature.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .breakdiv import TreeCharge, charge_from_signature
from .exactlp import LpProblem, solve_lp
from .graphs import Graph, GraphError
from .chipfiring import Divisor
from .signatures import (
    COCIRCUIT,
    Signature,
    is_acyclic,
    is_triangulating_signature,
)

__all__ = [
    "ClassicalityResult",
    "Polarization",
    "VStability",
    "certify_classical",
    "chamber_certificate",
    "charge_from_vstability",
    "cocycle_flip",
    "flip_path",
    "is_generic",
    "phi_pcan",
    "vstability_from_charge",
    "vstability_from_polarization",
]

_PAIR_BUDGET = 200_000


@dataclass(frozen=True)
class VStability:
    """Integer assignment over nontrivial biconnected subsets."""

    degree: int
    values: tuple[tuple[frozenset, int], ...]  # sorted for hashing
    graph: Graph = field(compare=False, repr=False)

    @classmethod
    def from_dict(cls, graph: Graph, degree: int, mapping: dict) -> "VStability":
        expected = set(graph.biconnected_subsets())
        keys = {frozenset(w) for w in mapping}
        if keys != expected:
            raise GraphError(
                "stability condition must cover every nontrivial biconnected subset"
            )
        items = sorted(
            ((frozenset(w), int(n)) for w, n in mapping.items()),
            key=lambda kv: (len(kv[0]), sorted(map(str, kv[0]))),
        )
        return cls(degree, tuple(items), graph)

    def n(self, subset) -> int:
        w = frozenset(subset)
        for key, val in self.values:
            if key == w:
                return val
        raise GraphError("subset is not a nontrivial biconnected subset")

    def as_dict(self) -> dict[frozenset, int]:
        return dict(self.values)

    def validate(self, pair_budget: int = _PAIR_BUDGET) -> None:
        """Check the complement identity and the union window; raise if broken."""
        g = self.graph
        m = self.as_dict()
        all_v = frozenset(g.vertices)
        for w, nw in m.items():
            cut = g.cut_size(w)
            comp = all_v - w
            if nw + m[comp] != self.degree + 1 - cut:
                raise GraphError(
                    f"complement identity fails at {sorted(map(str, w))}"
                )
        keys = list(m)
        if len(keys) * len(keys) > pair_budget:
            raise GraphError("stability validation exceeds the pair budget")
        for w1 in keys:
            for w2 in keys:
                if w1 & w2 or (w1 | w2) not in m:
                    continue
                between = sum(
                    1
                    for t, h in g.edge_index_pairs
                    if (g.vertices[t] in w1 and g.vertices[h] in w2)
                    or (g.vertices[t] in w2 and g.vertices[h] in w1)
                )
                gap = m[w1 | w2] - m[w1] - m[w2] - between
                if gap not in (-1, 0):
                    raise GraphError(
                        "union window fails at "
                        f"{sorted(map(str, w1))} + {sorted(map(str, w2))}"
                    )

    def to_json_obj(self) -> dict:
        return {
            "degree": self.degree,
            "values": [
                {"subset": sorted(map(str, w)), "n": n} for w, n in self.values
            ],
        }


@dataclass(frozen=True)
class Polarization:
    """Rational vertex weights with integer total degree."""

    values: tuple[Fraction, ...]
    graph: Graph = field(compare=False, repr=False)

    def __post_init__(self):
        if len(self.values) != self.graph.n_vertices:
            raise GraphError("polarization length does not match vertex count")
        if sum(self.values).denominator != 1:
            raise GraphError("polarization degree must be an integer")

    @classmethod
    def from_values(cls, graph: Graph, values) -> "Polarization":
        return cls(tuple(Fraction(x) for x in values), graph)

    @property
    def degree(self) -> int:
        return int(sum(self.values))

    def total(self, subset) -> Fraction:
        idx = self.graph.vertex_index
        return sum((self.values[idx(v)] for v in subset), Fraction(0))

    def to_json_obj(self) -> list[str]:
        return [str(v) for v in self.values]


def is_generic(phi: Polarization) -> bool:
    """No wall: phi(W) - cut(W)/2 is non-integral for every biconnected W."""
    g = phi.graph
    for w in g.biconnected_subsets():
        val = phi.total(w) - Fraction(g.cut_size(w), 2)
        if val.denominator == 1:
            return False
    return True


def vstability_from_polarization(phi: Polarization, validate: bool = True) -> VStability:
    """n_W = ceil(phi(W) - cut(W)/2) for generic phi; names the wall otherwise."""
    g = phi.graph
    mapping = {}
    for w in g.biconnected_subsets():
        val = phi.total(w) - Fraction(g.cut_size(w), 2)
        if val.denominator == 1:
            raise GraphError(
                f"polarization lies on the wall of {sorted(map(str, w))}"
            )
        mapping[w] = math.ceil(val)
    out = VStability.from_dict(g, phi.degree, mapping)
    if validate:
        out.validate()
    return out


def phi_pcan(graph: Graph) -> Polarization:
    """Canonical-type polarization ((g+|V|) deg(v) / (2(g+|V|)-2)) - 1."""
    g = graph.genus
    n = graph.n_vertices
    denom = 2 * (g + n) - 2
    if denom == 0:
        raise GraphError("canonical polarization undefined on a single vertex")
    coef = Fraction(g + n, denom)
    vals = tuple(coef * graph.degree(v) - 1 for v in graph.vertices)
    return Polarization(vals, graph)


def _tree_cut_targets(stab: VStability, tree) -> dict[int, tuple[frozenset, int]]:
    """Per tree edge: (subtree side W_e, n_W - genus(G[W]))."""
    g = stab.graph
    m = stab.as_dict()
    out = {}
    for e in tree.edge_indices:
        _, side = g.fundamental_cocycle(tree, e)
        if side not in m:  # pragma: no cover - cut sides are biconnected
            raise GraphError("fundamental cut side missing from stability data")
        out[e] = (side, m[side] - g.induced_genus(side))
    return out


def charge_from_vstability(stab: VStability) -> TreeCharge:
    """Charge whose cut sums realize the stability condition on every tree.

    For each tree and tree edge e with cut sides (W, W^c), the charge
    satisfies sum_{v in W} I(v) = n_W - genus(G[W]).  Raises
    "not a V-stability" when the integral system is inconsistent.
    """
    g = stab.graph
    m = stab.as_dict()
    all_v = frozenset(g.vertices)
    for w, nw in m.items():
        comp = all_v - w
        lhs = nw - g.induced_genus(w)
        rhs = m[comp] - g.induced_genus(comp)
        if lhs + rhs != 0:
            raise GraphError("not a V-stability")
    root = g.vertices[0]
    values = {}
    for tree in g.spanning_trees():
        targets = _tree_cut_targets(stab, tree)
        # subtree sums: normalize each cut target to the side away from the root
        adj = {v: [] for v in g.vertices}
        for e in tree.edge_indices:
            t, h = g.edge_index_pairs[e]
            tv, hv = g.vertices[t], g.vertices[h]
            adj[tv].append((hv, e))
            adj[hv].append((tv, e))
        parent_edge = {root: None}
        order = [root]
        for u in order:
            for v, e in adj[u]:
                if v not in parent_edge:
                    parent_edge[v] = e
                    order.append(v)
        subtree = {}
        for v in g.vertices:
            if v is root:
                continue
            e = parent_edge[v]
            side, target = targets[e]
            subtree[v] = target if root not in side else -target
        vals = [0] * g.n_vertices
        for u in order:
            below = sum(subtree[v] for v, e in adj[u] if parent_edge[v] == e)
            own = subtree[u] if u is not root else 0
            vals[g.vertex_index(u)] = own - below
        values[tree.mask] = Divisor(tuple(vals), g)
    return TreeCharge(g, values, provenance="stability")


def vstability_from_charge(charge: TreeCharge) -> VStability:
    """Recover n_W from cut sums; every realizing tree must agree.

    A tree realizes (W, W^c) when exactly one of its edges crosses the
    cut.  The lexicographically first realizing tree fixes n_W and all
    others are cross-checked; disagreement raises "charge is not
    stability-induced".  Callers are expected to have certified the
    charge's representative set first.
    """
    g = charge.graph
    mapping = {}
    trees = g.spanning_trees()
    for w in g.biconnected_subsets():
        crossing = g.crossing_edges(w)
        cut_mask = 0
        for e in crossing:
            cut_mask |= 1 << e
        widx = [g.vertex_index(v) for v in w]
        gw = g.induced_genus(w)
        value = None
        for tree in trees:
            inter = tree.mask & cut_mask
            if inter == 0 or inter & (inter - 1):
                continue  # tree must cross the cut exactly once
            div = charge.charge(tree)
            cand = sum(div.values[i] for i in widx) + gw
            if value is None:
                value = cand
            elif cand != value:
                raise GraphError("charge is not stability-induced")
        if value is None:  # pragma: no cover - realizing trees always exist
            raise GraphError(f"no tree realizes the cut at {sorted(map(str, w))}")
        mapping[w] = value
    out = VStability.from_dict(g, g.genus, mapping)
    out.validate()
    return out


def cocycle_flip(sig: Signature, support) -> Signature:
    """Negate the signature on one bond."""
    if sig.flavor != COCIRCUIT:
        raise GraphError("cocycle flips apply to cocircuit signatures")
    return sig.flip(support)


def flip_path(
    start: Signature,
    goal: Signature,
    acyclic_only: bool = False,
    node_budget: int = 2**14,
) -> Optional[list[frozenset[int]]]:
    """Shortest flip sequence between triangulating cocircuit signatures.

    BFS over single-bond flips through triangulating signatures
    (restricted to acyclic ones when ``acyclic_only``).  Returns the
    bond supports to flip in order, or None when unreachable.
    """
    if start.graph is not goal.graph:
        raise GraphError("signatures live on different graphs")
    if start.flavor != COCIRCUIT or goal.flavor != COCIRCUIT:
        raise GraphError("flip paths apply to cocircuit signatures")

    def admissible(s: Signature) -> bool:
        if not is_triangulating_signature(s):
            return False
        return is_acyclic(s) if acyclic_only else True

    for s, name in ((start, "start"), (goal, "goal")):
        if not admissible(s):
            raise GraphError(f"{name} signature is not admissible for this search")
    supports = start.supports
    if start.signs == goal.signs:
        return []
    seen = {start.signs: (None, None)}
    queue = deque([start])
    explored = 0
    while queue:
        cur = queue.popleft()
        explored += 1
        if explored > node_budget:
            raise GraphError("flip search budget exceeded")
        for support in supports:
            nxt = cur.flip(support)
            if nxt.signs in seen:
                continue
            if not admissible(nxt):
                continue
            seen[nxt.signs] = (cur.signs, support)
            if nxt.signs == goal.signs:
                path = []
                key = nxt.signs
                while seen[key][0] is not None:
                    prev, sup = seen[key]
                    path.append(sup)
                    key = prev
                path.reverse()
                return path
            queue.append(nxt)
    return None


@dataclass(frozen=True)
class ClassicalityResult:
    """Outcome of the classicality certificate for a stability condition."""

    is_classical: bool
    vstability: VStability
    polarization: Optional[Polarization] = None
    slack: Optional[Fraction] = None
    reason: str = ""

    def to_json_obj(self) -> dict:
        out = {"classical": self.is_classical}
        if self.polarization is not None:
            out["polarization"] = self.polarization.to_json_obj()
            out["slack"] = str(self.slack)
        if self.reason:
            out["reason"] = self.reason
        return out


def certify_classical(sig: Signature, q) -> ClassicalityResult:
    """Polarization certificate for the stability behind a signature's charge.

    Recovers the stability condition through the signature's tree
    charge, then solves max t subject to sum(phi) = degree and
    n_W - 1 + cut/2 + t <= phi(W) <= n_W + cut/2 - t per subset.  A
    positive optimum yields a generic certifying polarization; an empty
    or closed chamber is reported as a non-classical finding, never an
    exception.
    """
    charge = charge_from_signature(sig, q)
    stab = vstability_from_charge(charge)
    return chamber_certificate(stab)


def chamber_certificate(stab: VStability) -> ClassicalityResult:
    """Exact LP for an interior point of a stability condition's chamber."""
    g = stab.graph
    nverts = g.n_vertices
    nvars = nverts + 1  # phi then slack t
    prob = LpProblem(objective=[Fraction(0)] * nverts + [Fraction(1)])
    prob.add([Fraction(1)] * nverts + [Fraction(0)], "=", Fraction(stab.degree))
    prob.add([Fraction(0)] * nverts + [Fraction(1)], "<=", Fraction(1))
    for w, nw in stab.values:
        row = [Fraction(0)] * nvars
        for v in w:
            row[g.vertex_index(v)] = Fraction(1)
        half_cut = Fraction(g.cut_size(w), 2)
        lo_row = row[:]
        lo_row[nverts] = Fraction(-1)
        prob.add(lo_row, ">=", nw - 1 + half_cut)
        hi_row = row[:]
        hi_row[nverts] = Fraction(1)
        prob.add(hi_row, "<=", nw + half_cut)
    res = solve_lp(prob)
    if res.status != "optimal" or res.value <= 0:
        reason = (
            "chamber is empty"
            if res.status == "infeasible"
            else "chamber has no interior point"
        )
        return ClassicalityResult(False, stab, reason=reason)
    phi = Polarization(tuple(res.point[:nverts]), g)
    recovered = vstability_from_polarization(phi)
    if recovered.values != stab.values:  # pragma: no cover - contradicts the LP
        raise GraphError("certifying polarization recovers a different condition")
    return ClassicalityResult(True, stab, polarization=phi, slack=res.value)
