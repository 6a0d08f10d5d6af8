"""Exact rational linear algebra and linear programming.

Determinants, linear solves, Smith normal form, and a small two-phase
simplex solver with Bland's rule, all over ``fractions.Fraction``.  No
floating point anywhere: the combinatorial certificates built on top
(signature acyclicity, chamber membership, lower-facet tests, interior
disjointness) need exact sign decisions, where rounding would silently
corrupt results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

__all__ = [
    "LpError",
    "LpProblem",
    "LpResult",
    "determinant",
    "smith_normal_form",
    "solve_lp",
    "solve_square",
]


class LpError(ValueError):
    """Malformed linear program or internal certification failure."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def solve_square(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[list[Fraction]]:
    """Solve ``A x = b`` for square ``A`` exactly; ``None`` if singular."""
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise LpError("solve_square needs a square system")
    aug = [[_frac(matrix[i][j]) for j in range(n)] + [_frac(rhs[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            return None
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                row, prow = aug[r], aug[col]
                aug[r] = [a - f * b for a, b in zip(row, prow)]
    return [aug[i][n] for i in range(n)]


def determinant(matrix: Sequence[Sequence]):
    """Exact determinant; returns an ``int`` when the value is integral."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise LpError("determinant needs a square matrix")
    a = [[_frac(x) for x in row] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] / p
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return int(det) if det.denominator == 1 else det


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors ``d1 | d2 | ...`` of an integer matrix.

    Returns the full diagonal (length ``min(m, n)``), nonnegative, with
    every entry dividing the next; trailing zeros mark rank deficiency.
    """
    a = [[int(x) for x in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise LpError("ragged matrix")
    k = min(m, n)
    for t in range(k):
        while True:
            best = None
            pos = None
            for i in range(t, m):
                for j in range(t, n):
                    v = abs(a[i][j])
                    if v and (best is None or v < best):
                        best, pos = v, (i, j)
            if pos is None:
                break  # lower-right block is zero
            i, j = pos
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if dirty:
                continue
            # pivot must divide every remaining entry for d_t | d_{t+1}
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
    return [abs(a[i][i]) for i in range(k)]


@dataclass
class LpProblem:
    """Maximize ``objective . x`` subject to rows ``(coeffs, rel, rhs)``.

    ``rel`` is one of ``"<="``, ``">="``, ``"="``.  Bounds default to free
    variables; entries of ``lower``/``upper`` may be None for unbounded.
    """

    objective: list
    rows: list = field(default_factory=list)
    lower: Optional[list] = None
    upper: Optional[list] = None

    def add(self, coeffs: Sequence, rel: str, rhs) -> None:
        if rel not in ("<=", ">=", "="):
            raise LpError(f"unknown relation {rel!r}")
        if len(coeffs) != len(self.objective):
            raise LpError("row length does not match variable count")
        self.rows.append((list(coeffs), rel, rhs))


@dataclass
class LpResult:
    status: str  # optimal | infeasible | unbounded
    value: Optional[Fraction] = None
    point: Optional[list[Fraction]] = None
    dual: Optional[list[Fraction]] = None
    dual_verified: bool = False


class _Tableau:
    """Dense simplex tableau over Fractions; Bland's rule throughout."""

    def __init__(self, a: list[list[Fraction]], b: list[Fraction]):
        self.a = a
        self.b = b
        self.m = len(a)
        self.ncols = len(a[0]) if a else 0
        self.basis: list[int] = [-1] * self.m

    def pivot(self, row: int, col: int) -> None:
        inv = Fraction(1) / self.a[row][col]
        self.a[row] = [x * inv for x in self.a[row]]
        self.b[row] *= inv
        prow = self.a[row]
        pb = self.b[row]
        for r in range(self.m):
            if r != row and self.a[r][col]:
                f = self.a[r][col]
                self.a[r] = [x - f * y for x, y in zip(self.a[r], prow)]
                self.b[r] -= f * pb
        self.basis[row] = col

    def reduced_costs(self, costs: list[Fraction]) -> tuple[list[Fraction], Fraction]:
        # r_j = c_B . B^-1 A_j - c_j ; optimal (max) when all r_j >= 0
        red = [-c for c in costs]
        val = Fraction(0)
        for i, bi in enumerate(self.basis):
            cb = costs[bi]
            if cb:
                row = self.a[i]
                for j in range(self.ncols):
                    if row[j]:
                        red[j] += cb * row[j]
                val += cb * self.b[i]
        return red, val

    def run(self, costs: list[Fraction], banned: set[int]) -> str:
        """Iterate pivots until optimal or unbounded."""
        red, _ = self.reduced_costs(costs)
        while True:
            enter = None
            for j in range(self.ncols):
                if j not in banned and red[j] < 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            leave = None
            best = None
            for i in range(self.m):
                aij = self.a[i][enter]
                if aij > 0:
                    ratio = self.b[i] / aij
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best, leave = ratio, i
            if leave is None:
                return "unbounded"
            self.pivot(leave, enter)
            red, _ = self.reduced_costs(costs)


def solve_lp(problem: LpProblem) -> LpResult:
    """Two-phase exact simplex.  Optimal results carry a verified dual.

    The dual certificate is checked against the standardized equality
    form (weak duality: y.A >= c on every column and y.b equal to the
    optimum); a failure raises ``LpError`` since it would mean the
    solver itself is broken.
    """
    nvars = len(problem.objective)
    lower = problem.lower or [None] * nvars
    upper = problem.upper or [None] * nvars
    if len(lower) != nvars or len(upper) != nvars:
        raise LpError("bounds length does not match variable count")

    # Substitute x_j = offset + sum(coef * new_var) with new vars >= 0.
    subs: list[tuple[Fraction, list[tuple[int, int]]]] = []
    ncols = 0
    extra_rows: list[tuple[list, str, object]] = []
    for j in range(nvars):
        lo = None if lower[j] is None else _frac(lower[j])
        hi = None if upper[j] is None else _frac(upper[j])
        if lo is not None:
            subs.append((lo, [(ncols, 1)]))
            if hi is not None:
                coeffs = [Fraction(0)] * nvars
                coeffs[j] = Fraction(1)
                extra_rows.append((coeffs, "<=", hi))
            ncols += 1
        elif hi is not None:
            subs.append((hi, [(ncols, -1)]))
            ncols += 1
        else:
            subs.append((Fraction(0), [(ncols, 1), (ncols + 1, -1)]))
            ncols += 2

    const = Fraction(0)
    costs = [Fraction(0)] * ncols
    for j, c in enumerate(problem.objective):
        cj = _frac(c)
        if not cj:
            continue
        off, terms = subs[j]
        const += cj * off
        for col, sgn in terms:
            costs[col] += cj * sgn

    rows = [(list(co), rel, rhs) for co, rel, rhs in problem.rows] + extra_rows
    m = len(rows)
    amat: list[list[Fraction]] = []
    bvec: list[Fraction] = []
    rels: list[str] = []
    for coeffs, rel, rhs in rows:
        if len(coeffs) != nvars:
            raise LpError("row length does not match variable count")
        arow = [Fraction(0)] * ncols
        brhs = _frac(rhs)
        for j, c in enumerate(coeffs):
            cj = _frac(c)
            if not cj:
                continue
            off, terms = subs[j]
            brhs -= cj * off
            for col, sgn in terms:
                arow[col] += cj * sgn
        if brhs < 0:
            arow = [-x for x in arow]
            brhs = -brhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        amat.append(arow)
        bvec.append(brhs)
        rels.append(rel)

    # Append slack / surplus / artificial columns; every row gets a unit column.
    art_cols: set[int] = set()
    unit_col: list[int] = [0] * m
    for i in range(m):
        if rels[i] == "<=":
            col = ncols
            ncols += 1
            for r in range(m):
                amat[r].append(Fraction(1 if r == i else 0))
            unit_col[i] = col
        elif rels[i] == ">=":
            scol = ncols
            ncols += 1
            for r in range(m):
                amat[r].append(Fraction(-1 if r == i else 0))
            acol = ncols
            ncols += 1
            for r in range(m):
                amat[r].append(Fraction(1 if r == i else 0))
            art_cols.add(acol)
            unit_col[i] = acol
            del scol
        else:
            col = ncols
            ncols += 1
            for r in range(m):
                amat[r].append(Fraction(1 if r == i else 0))
            art_cols.add(col)
            unit_col[i] = col
    costs += [Fraction(0)] * (ncols - len(costs))

    orig_a = [row[:] for row in amat]
    orig_b = bvec[:]
    tab = _Tableau(amat, bvec)
    tab.ncols = ncols
    tab.basis = unit_col[:]

    if art_cols:
        phase1 = [Fraction(-1) if j in art_cols else Fraction(0) for j in range(ncols)]
        status = tab.run(phase1, banned=set())
        if status != "optimal":  # pragma: no cover - phase 1 is always bounded
            raise LpError("phase 1 did not terminate at an optimum")
        _, val = tab.reduced_costs(phase1)
        if val != 0:
            return LpResult(status="infeasible")
        # Drive basic artificials out on any nonzero entry; rhs is 0 in such
        # rows, so pivoting on either sign preserves feasibility.
        for i in range(tab.m):
            if tab.basis[i] in art_cols:
                col = next(
                    (j for j in range(ncols) if j not in art_cols and tab.a[i][j]),
                    None,
                )
                if col is not None:
                    tab.pivot(i, col)

    status = tab.run(costs, banned=art_cols)
    if status == "unbounded":
        return LpResult(status="unbounded")
    red, val = tab.reduced_costs(costs)

    # Primal point, mapped back through the substitutions.
    colval = [Fraction(0)] * ncols
    for i, bi in enumerate(tab.basis):
        colval[bi] = tab.b[i]
    point = []
    for j in range(nvars):
        off, terms = subs[j]
        point.append(off + sum(colval[col] * sgn for col, sgn in terms))

    # Dual from the final basis against the *original* standardized system.
    bt = [[orig_a[i][tab.basis[r]] for i in range(m)] for r in range(m)]
    y = solve_square(bt, [costs[bi] for bi in tab.basis])
    if y is None:  # pragma: no cover - a basis matrix is never singular
        raise LpError("basis matrix singular during dual extraction")
    ok = sum(yi * bi for yi, bi in zip(y, orig_b)) == val
    if ok:
        for j in range(ncols):
            if j in art_cols:
                continue
            lhs = sum(y[i] * orig_a[i][j] for i in range(m))
            if lhs < costs[j]:
                ok = False
                break
    if not ok:  # pragma: no cover - indicates a solver bug
        raise LpError("dual certificate failed verification")
    return LpResult(
        status="optimal",
        value=val + const,
        point=point,
        dual=y,
        dual_verified=True,
    )
