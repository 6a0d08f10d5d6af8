"""Lawrence polytopes of graphic and cographic matrices.

The Lawrence polytope of an integer matrix M with n columns doubles the
ground set: each column e yields a point pair P_e = (M_e, e_e) and
P_{-e} = (0, e_e).  Maximal simplices on these points correspond to
oriented bases (basis columns doubled, the rest picked one side each),
which is exactly the shape of the oriented bases attached to spanning
trees, so atlases translate to simplex sets.  This module builds the
matrices and polytopes, converts between bases and simplices, checks a
simplex set for being a dissection or triangulation at desk scale, and
computes regular triangulations from exact height functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .exactlp import LpProblem, determinant, solve_lp, solve_square
from .graphs import Graph, GraphError, SpanningTree
from .orientations import (
    BACKWARD,
    BIORIENTED,
    EXTERNAL,
    FORWARD,
    INTERNAL,
    Fourientation,
    OrientedBase,
)
from .signatures import Atlas, Signature, is_triangulating_signature, signature_of_atlas

__all__ = [
    "COGRAPHIC",
    "GRAPHIC",
    "LawrencePolytope",
    "MatroidMatrix",
    "SimplexSet",
    "VerifyResult",
    "atlas_of_simplexset",
    "decode_simplex",
    "dual_matrix",
    "graphic_matrix",
    "heights_for_signature_weights",
    "is_totally_unimodular",
    "regular_triangulation",
    "simplex_of_base",
    "triangulation_of_atlas",
    "verify_triangulation",
]

GRAPHIC = "graphic"
COGRAPHIC = "cographic"


@dataclass(frozen=True)
class MatroidMatrix:
    """Integer matrix in standard form [I | L] over a fixed edge order.

    Column j speaks for edge ``edge_order[j]``; the identity block sits
    on the edges of ``tree_mask`` (graphic) or its complement
    (cographic), and the column sign convention orients every edge from
    tail to head.
    """

    kind: str
    rows: tuple[tuple[int, ...], ...]
    edge_order: tuple[int, ...]
    tree_mask: int
    graph: Graph = field(compare=False, repr=False)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def n_columns(self) -> int:
        return len(self.edge_order)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def slot_of_edge(self, e: int) -> int:
        return self.edge_order.index(e)


def graphic_matrix(graph: Graph) -> MatroidMatrix:
    """Reduced incidence matrix in the form [I | L], tree columns first."""
    trees = graph.spanning_trees()
    tree = trees[0]
    internal = sorted(tree.edge_indices)
    external = sorted(tree.external_indices)
    order = internal + external
    r = graph.n_vertices - 1

    def column(e: int) -> list[Fraction]:
        t, h = graph.edge_index_pairs[e]
        col = [Fraction(0)] * r
        if t < r:
            col[t] -= 1
        if h < r:
            col[h] += 1
        return col

    basis = [column(e) for e in internal]
    rows: list[list[int]] = [[0] * len(order) for _ in range(r)]
    for j in range(r):
        rows[j][j] = 1
    bmat = [[basis[j][i] for j in range(r)] for i in range(r)]
    for pos, e in enumerate(external):
        sol = solve_square(bmat, column(e))
        if sol is None:  # pragma: no cover - tree columns are independent
            raise GraphError("tree columns are singular")
        for i, val in enumerate(sol):
            if val.denominator != 1:  # pragma: no cover - network matrices
                raise GraphError("incidence solve left a fraction")
            rows[i][r + pos] = int(val)
    return MatroidMatrix(
        GRAPHIC,
        tuple(tuple(row) for row in rows),
        tuple(order),
        tree.mask,
        graph,
    )


def dual_matrix(mm: MatroidMatrix) -> MatroidMatrix:
    """[-L^T | I] on the same edge order; swaps graphic and cographic."""
    if mm.kind != GRAPHIC:
        raise GraphError("dualization starts from a graphic matrix")
    r = mm.rank
    n = mm.n_columns
    corank = n - r
    rows = []
    for i in range(corank):
        row = [-mm.rows[j][r + i] for j in range(r)]
        row += [1 if k == i else 0 for k in range(corank)]
        rows.append(tuple(row))
    return MatroidMatrix(COGRAPHIC, tuple(rows), mm.edge_order, mm.tree_mask, mm.graph)


def is_totally_unimodular(mm: MatroidMatrix) -> bool:
    """Check every square minor lies in {-1, 0, 1}.  Exhaustive, desk scale."""
    m = mm.rank
    n = mm.n_columns
    for k in range(1, min(m, n) + 1):
        for rsel in itertools.combinations(range(m), k):
            for csel in itertools.combinations(range(n), k):
                minor = [[mm.rows[i][j] for j in csel] for i in rsel]
                if determinant(minor) not in (-1, 0, 1):
                    return False
    return True


@dataclass(frozen=True)
class LawrencePolytope:
    """Doubled point configuration of a matroid matrix.

    Point j (0 <= j < n) is (column j, e_j); point n + j is (0, e_j).
    All 2n points live on the hyperplane where the last n coordinates
    sum to 1, so affine independence is plain linear independence.
    """

    matrix: MatroidMatrix

    @classmethod
    def of_graph(cls, graph: Graph, kind: str = COGRAPHIC) -> "LawrencePolytope":
        mm = graphic_matrix(graph)
        if kind == COGRAPHIC:
            mm = dual_matrix(mm)
        elif kind != GRAPHIC:
            raise GraphError(f"unknown matrix kind {kind!r}")
        return cls(mm)

    @property
    def graph(self) -> Graph:
        return self.matrix.graph

    @property
    def kind(self) -> str:
        return self.matrix.kind

    @property
    def n_slots(self) -> int:
        return self.matrix.n_columns

    @property
    def ambient_dim(self) -> int:
        return self.matrix.rank + self.matrix.n_columns

    @property
    def simplex_size(self) -> int:
        return self.ambient_dim

    @cached_property
    def points(self) -> tuple[tuple[int, ...], ...]:
        mm = self.matrix
        n = mm.n_columns
        out = []
        for j in range(n):
            out.append(mm.column(j) + tuple(1 if k == j else 0 for k in range(n)))
        for j in range(n):
            out.append((0,) * mm.rank + tuple(1 if k == j else 0 for k in range(n)))
        return tuple(out)

    def point_name(self, idx: int) -> str:
        n = self.n_slots
        e = self.matrix.edge_order[idx % n]
        return f"P({e})" if idx < n else f"P(-{e})"


def _base_flavor(kind: str) -> str:
    return EXTERNAL if kind == GRAPHIC else INTERNAL


def simplex_of_base(p: LawrencePolytope, base: OrientedBase) -> frozenset[int]:
    """Doubled edges give both points, one-way edges pick their side."""
    if base.flavor != _base_flavor(p.kind):
        raise GraphError(
            f"{base.flavor} bases pair with the {_base_flavor(p.kind)} polytope kind"
        )
    n = p.n_slots
    picks = set()
    for j, e in enumerate(p.matrix.edge_order):
        state = base.four.states[e]
        if state == BIORIENTED:
            picks.add(j)
            picks.add(n + j)
        elif state == FORWARD:
            picks.add(j)
        elif state == BACKWARD:
            picks.add(n + j)
        else:  # pragma: no cover - OrientedBase forbids unoriented edges
            raise GraphError("oriented base has an unoriented edge")
    return frozenset(picks)


def decode_simplex(p: LawrencePolytope, simplex: frozenset[int]) -> OrientedBase:
    """Invert ``simplex_of_base``; raises when the set is not a base simplex."""
    g = p.graph
    n = p.n_slots
    states = [None] * g.n_edges
    doubled_mask = 0
    for j, e in enumerate(p.matrix.edge_order):
        plus = j in simplex
        minus = (n + j) in simplex
        if plus and minus:
            states[e] = BIORIENTED
            doubled_mask |= 1 << e
        elif plus:
            states[e] = FORWARD
        elif minus:
            states[e] = BACKWARD
        else:
            raise GraphError("simplex leaves an edge with no point")
    tree_mask = doubled_mask if p.kind == GRAPHIC else (
        (1 << g.n_edges) - 1 - doubled_mask
    )
    by_mask = {t.mask: t for t in g.spanning_trees()}
    if tree_mask not in by_mask:
        raise GraphError("doubled edges of the simplex are not a matroid base")
    tree = by_mask[tree_mask]
    return OrientedBase(tree, Fourientation(tuple(states), g), _base_flavor(p.kind))


@dataclass(frozen=True)
class SimplexSet:
    """A set of candidate simplices on a Lawrence polytope's points."""

    polytope: LawrencePolytope = field(compare=False, repr=False)
    simplices: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        canon = tuple(sorted(self.simplices, key=sorted))
        if canon != self.simplices:
            object.__setattr__(self, "simplices", canon)
        size = self.polytope.simplex_size
        for s in self.simplices:
            if len(s) != size:
                raise GraphError(
                    f"simplices on this polytope have {size} points, got {len(s)}"
                )

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def volume(self, simplex: frozenset[int]) -> int:
        pts = [self.polytope.points[i] for i in sorted(simplex)]
        det = determinant([list(row) for row in pts])
        return abs(int(det))

    def total_volume(self) -> int:
        return sum(self.volume(s) for s in self.simplices)

    def covers(self, point: Sequence) -> bool:
        """Is the point inside some simplex (boundary included)?"""
        target = [Fraction(x) for x in point]
        for s in self.simplices:
            idx = sorted(s)
            cols = [self.polytope.points[i] for i in idx]
            mat = [[Fraction(cols[j][i]) for j in range(len(idx))] for i in range(len(target))]
            lam = solve_square(mat, target)
            # affine, not just conic: the weights must sum to one
            if lam is not None and all(l >= 0 for l in lam) and sum(lam) == 1:
                return True
        return False

    def to_json_obj(self) -> list[list[int]]:
        return [sorted(s) for s in self.simplices]


def triangulation_of_atlas(p: LawrencePolytope, atlas: Atlas) -> SimplexSet:
    if atlas.graph is not p.graph:
        raise GraphError("atlas and polytope live on different graphs")
    return SimplexSet(p, tuple(simplex_of_base(p, b) for b in atlas.bases))


def atlas_of_simplexset(sset: SimplexSet) -> Atlas:
    """Decode every simplex; raises when the result is not one base per tree."""
    p = sset.polytope
    bases = sorted(
        (decode_simplex(p, s) for s in sset.simplices), key=lambda b: b.tree.mask
    )
    return Atlas(_base_flavor(p.kind), tuple(bases), p.graph)


def _interiors_intersect(p: LawrencePolytope, s1, s2) -> bool:
    """Exact LP: do the open simplices share a point?"""
    idx1, idx2 = sorted(s1), sorted(s2)
    k1, k2 = len(idx1), len(idx2)
    dim = p.ambient_dim
    nvars = k1 + k2 + 1  # lambdas, mus, t
    t = nvars - 1
    prob = LpProblem(objective=[Fraction(0)] * (nvars - 1) + [Fraction(1)])
    for i in range(k1 + k2):
        row = [Fraction(0)] * nvars
        row[i] = Fraction(1)
        row[t] = Fraction(-1)
        prob.add(row, ">=", Fraction(0))
    row = [Fraction(1)] * k1 + [Fraction(0)] * k2 + [Fraction(0)]
    prob.add(row, "=", Fraction(1))
    row = [Fraction(0)] * k1 + [Fraction(1)] * k2 + [Fraction(0)]
    prob.add(row, "=", Fraction(1))
    for d in range(dim):
        row = [Fraction(0)] * nvars
        for a, i in enumerate(idx1):
            row[a] = Fraction(p.points[i][d])
        for a, i in enumerate(idx2):
            row[k1 + a] = Fraction(-p.points[i][d])
        prob.add(row, "=", Fraction(0))
    prob.add([Fraction(0)] * (nvars - 1) + [Fraction(1)], "<=", Fraction(1))
    res = solve_lp(prob)
    return res.status == "optimal" and res.value > 0


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of checking a simplex set against the polytope."""

    verdict: str  # "triangulation" | "dissection-only" | "overlap" | "incomplete"
    total_volume: int
    expected_volume: int
    overlap: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    signature: Optional[Signature] = None
    reason: str = ""

    def to_json_obj(self) -> dict:
        out = {
            "verdict": self.verdict,
            "volume": self.total_volume,
            "expected_volume": self.expected_volume,
        }
        if self.overlap is not None:
            out["overlap"] = [list(self.overlap[0]), list(self.overlap[1])]
        if self.reason:
            out["reason"] = self.reason
        return out


def verify_triangulation(
    sset: SimplexSet, budget_edges: int = 6
) -> VerifyResult:
    """Classify a simplex set: overlap, incomplete, dissection-only, or triangulation.

    Pairwise open-intersection tests and the volume count settle the
    dissection question; the common-face property is settled by
    decoding the set to an atlas and asking whether a single
    triangulating signature induces it.
    """
    p = sset.polytope
    g = p.graph
    if g.n_edges > budget_edges:
        raise GraphError(
            f"verification budget exceeded: {g.n_edges} edges > {budget_edges}"
        )
    expected = g.spanning_tree_count()
    for s in sset.simplices:
        if sset.volume(s) == 0:
            raise GraphError("degenerate simplex in the set")
    total = sset.total_volume()
    sims = sset.simplices
    for i in range(len(sims)):
        for j in range(i + 1, len(sims)):
            if _interiors_intersect(p, sims[i], sims[j]):
                return VerifyResult(
                    "overlap",
                    total,
                    expected,
                    overlap=(tuple(sorted(sims[i])), tuple(sorted(sims[j]))),
                    reason="two simplices share an interior point",
                )
    if total < expected:
        return VerifyResult(
            "incomplete", total, expected, reason="volume falls short of the base count"
        )
    try:
        atlas = atlas_of_simplexset(sset)
    except GraphError as exc:
        return VerifyResult("dissection-only", total, expected, reason=str(exc))
    sig = signature_of_atlas(atlas)
    if sig is None:
        return VerifyResult(
            "dissection-only", total, expected, reason="no single signature induces the atlas"
        )
    if not is_triangulating_signature(sig):
        return VerifyResult(
            "dissection-only",
            total,
            expected,
            signature=sig,
            reason="inducing signature is not triangulating",
        )
    return VerifyResult("triangulation", total, expected, signature=sig)


def _oriented_bases(p: LawrencePolytope):
    g = p.graph
    flavor = _base_flavor(p.kind)
    for tree in g.spanning_trees():
        free = (
            sorted(tree.external_indices)
            if flavor == EXTERNAL
            else sorted(tree.edge_indices)
        )
        for choice in itertools.product((FORWARD, BACKWARD), repeat=len(free)):
            states = [BIORIENTED] * g.n_edges
            for e, st in zip(free, choice):
                states[e] = st
            yield OrientedBase(tree, Fourientation(tuple(states), g), flavor)


def regular_triangulation(p: LawrencePolytope, heights: Sequence) -> SimplexSet:
    """Lower-hull triangulation for an exact height per point.

    A base simplex survives when every point outside it sits strictly
    above the simplex's lifted affine span; a tie means the heights are
    degenerate for this polytope and is reported as an error.
    """
    if len(heights) != 2 * p.n_slots:
        raise GraphError("one height per polytope point is required")
    omega = [Fraction(h) for h in heights]
    k = p.simplex_size
    kept = []
    for base in _oriented_bases(p):
        simplex = simplex_of_base(p, base)
        idx = sorted(simplex)
        mat = [[Fraction(p.points[j][i]) for j in idx] for i in range(k)]
        good = True
        for v in range(2 * p.n_slots):
            if v in simplex:
                continue
            lam = solve_square(mat, [Fraction(x) for x in p.points[v]])
            if lam is None:  # pragma: no cover - base simplices are invertible
                raise GraphError("base simplex is singular")
            delta = omega[v] - sum(l * omega[j] for l, j in zip(lam, idx))
            if delta == 0:
                raise GraphError(
                    "heights are degenerate: point "
                    f"{p.point_name(v)} lies on the lifted span of {sorted(simplex)}"
                )
            if delta < 0:
                good = False
                break
        if good:
            kept.append(simplex)
    out = SimplexSet(p, tuple(kept))
    if out.total_volume() != p.graph.spanning_tree_count():
        raise GraphError("regular triangulation misses the base count")
    return out


def heights_for_signature_weights(p: LawrencePolytope, weights: Sequence) -> tuple:
    """Heights whose regular triangulation matches the weight signature.

    The forward point of each edge slot is lifted to 0 and the reverse
    point to that edge's weight.
    """
    if len(weights) != p.graph.n_edges:
        raise GraphError("one weight per edge is required")
    n = p.n_slots
    out = [Fraction(0)] * (2 * n)
    for j, e in enumerate(p.matrix.edge_order):
        out[n + j] = Fraction(weights[e])
    return tuple(out)
