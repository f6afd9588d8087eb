"""Exact rational linear programming.

A small two-phase primal simplex over ``Fraction`` entries.  Bland's rule is
used for both the entering and the leaving variable, so the method cannot
cycle and every answer is a deterministic function of the input data (not of
row order in ties).  This is the workhorse behind witness recovery,
redundancy certification, relative-interior tests and minimality checks;
desk-scale instances only, no attempt at sparsity or revised-simplex speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Mat, Vec, ZERO, ONE, dot, solve_linear, transpose, vec

GE = "ge"
EQ = "eq"
FREE = "free"
NONNEG = "nonneg"


@dataclass(frozen=True)
class LinearProgram:
    """maximise objective . x  subject to row_i x {>=,=} rhs_i and bounds."""

    objective: Vec
    matrix: Mat
    rhs: Vec
    kinds: tuple[str, ...]
    bounds: tuple[str, ...]

    def __post_init__(self):
        n = len(self.objective)
        if any(len(row) != n for row in self.matrix):
            raise ValueError("constraint width != objective dimension")
        if not (len(self.matrix) == len(self.rhs) == len(self.kinds)):
            raise ValueError("row count mismatch")
        if len(self.bounds) != n:
            raise ValueError("bounds count mismatch")
        if any(k not in (GE, EQ) for k in self.kinds):
            raise ValueError("row kind must be 'ge' or 'eq'")
        if any(b not in (FREE, NONNEG) for b in self.bounds):
            raise ValueError("bound must be 'free' or 'nonneg'")


@dataclass(frozen=True)
class LpOutcome:
    status: str  # 'optimal' | 'infeasible' | 'unbounded'
    x: Vec | None
    value: Fraction | None
    dual: Vec | None  # per original row; present only on 'optimal'

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(rows, cost, basis, r, c):
    piv = rows[r][c]
    rows[r] = [x / piv for x in rows[r]]
    for i in range(len(rows)):
        if i != r and rows[i][c] != 0:
            f = rows[i][c]
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
    if cost[c] != 0:
        f = cost[c]
        for j in range(len(cost)):
            cost[j] -= f * rows[r][j]
    basis[r] = c


def _run_simplex(rows, cost, basis) -> str:
    """Bland's rule; cost row holds reduced costs, last entry -value."""
    ncols = len(cost) - 1
    while True:
        enter = None
        for j in range(ncols):
            if cost[j] > 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        leave = None
        best = None
        for i in range(len(rows)):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded"
        _pivot(rows, cost, basis, leave, enter)


def _reduced_cost_row(rows, basis, costs, ncols):
    cost = list(costs) + [ZERO]
    for i, b in enumerate(basis):
        cb = costs[b]
        if cb != 0:
            for j in range(ncols + 1):
                cost[j] -= cb * rows[i][j]
    return cost


def lp_solve(lp: LinearProgram) -> LpOutcome:
    n = len(lp.objective)
    m = len(lp.matrix)

    # Standard form: split free variables, add a surplus column per >= row.
    col_of: list[tuple[int, int]] = []  # (original var, sign)
    for j, bound in enumerate(lp.bounds):
        col_of.append((j, 1))
        if bound == FREE:
            col_of.append((j, -1))
    n_struct = len(col_of)
    n_ge = sum(1 for k in lp.kinds if k == GE)
    ncols = n_struct + n_ge

    std_rows: list[list[Fraction]] = []
    row_sign: list[Fraction] = []
    surplus_at = 0
    for i in range(m):
        row = [lp.matrix[i][j] * Fraction(s) for (j, s) in col_of]
        row += [ZERO] * n_ge
        if lp.kinds[i] == GE:
            row[n_struct + surplus_at] = -ONE
            surplus_at += 1
        row.append(lp.rhs[i])
        if row[-1] < 0:
            row = [-x for x in row]
            row_sign.append(-ONE)
        else:
            row_sign.append(ONE)
        std_rows.append(row)

    # Keep a pristine copy for dual extraction.
    pristine = [tuple(r[:ncols]) for r in std_rows]

    # Phase 1: artificial basis.
    art0 = ncols
    rows = []
    for i, row in enumerate(std_rows):
        full = row[:ncols] + [ZERO] * m + [row[-1]]
        full[art0 + i] = ONE
        rows.append(full)
    basis = [art0 + i for i in range(m)]
    costs1 = [ZERO] * ncols + [-ONE] * m
    cost = _reduced_cost_row(rows, basis, costs1, ncols + m)
    status = _run_simplex(rows, cost, basis)
    assert status == "optimal"  # phase-1 objective is bounded above by 0
    if -cost[-1] != 0:
        return LpOutcome("infeasible", None, None, None)

    # Drive artificials out of the basis; drop redundant rows.
    alive = list(range(m))
    i = 0
    while i < len(rows):
        if basis[i] >= art0:
            piv = None
            for j in range(ncols):
                if rows[i][j] != 0:
                    piv = j
                    break
            if piv is None:
                del rows[i], basis[i], alive[i]
                continue
            _pivot(rows, cost, basis, i, piv)
        i += 1

    # Phase 2 on structural columns only.
    rows = [r[:ncols] + [r[-1]] for r in rows]
    costs2 = [ZERO] * ncols
    for idx, (j, s) in enumerate(col_of):
        costs2[idx] = lp.objective[j] * Fraction(s)
    cost = _reduced_cost_row(rows, basis, costs2, ncols)
    status = _run_simplex(rows, cost, basis)
    if status == "unbounded":
        return LpOutcome("unbounded", None, None, None)

    x_std = [ZERO] * ncols
    for i, b in enumerate(basis):
        x_std[b] = rows[i][-1]
    x = [ZERO] * n
    for idx, (j, s) in enumerate(col_of):
        x[j] += Fraction(s) * x_std[idx]
    value = dot(vec(lp.objective), tuple(x))

    # Dual multipliers: solve B^T y = c_B over the surviving rows.
    dual = [ZERO] * m
    if rows:
        bmat = tuple(tuple(pristine[alive[i]][b] for b in basis) for i in range(len(rows)))
        cb = tuple(costs2[b] for b in basis)
        sol = solve_linear(transpose(bmat), cb)
        assert sol is not None  # basis columns are independent
        for k, orig in enumerate(alive):
            dual[orig] = row_sign[orig] * sol[0][k]
    return LpOutcome("optimal", tuple(x), value, tuple(dual))


def feasible_point(matrix: Mat, rhs: Vec, kinds, bounds) -> Vec | None:
    """Phase-1 only: any feasible point, or None."""
    n = len(bounds)
    lp = LinearProgram(vec([0] * n), matrix, rhs, tuple(kinds), tuple(bounds))
    out = lp_solve(lp)
    return out.x if out.optimal else None


def canonical_feasible_point(matrix: Mat, rhs: Vec, kinds, bounds) -> Vec | None:
    """A feasible point that does not depend on constraint order.

    Minimises sum |x_j| first, then lexicographically minimises x.  Both
    stages are sequences of LP values, which are row-order independent, so
    the returned point is a canonical function of the feasible set.
    """
    n = len(bounds)
    if n == 0:
        ok = all(
            (r <= 0 if k == GE else r == 0) for r, k in zip(rhs, kinds)
        )
        return () if ok else None
    # variables: x_0..x_{n-1}, t_0..t_{n-1} with t_j >= +-x_j
    width = 2 * n
    rows = [list(row) + [ZERO] * n for row in matrix]
    kind_list = list(kinds)
    rhs_list = list(rhs)
    for j in range(n):
        row = [ZERO] * width
        row[j] = -ONE
        row[n + j] = ONE
        rows.append(list(row))  # t_j - x_j >= 0
        kind_list.append(GE)
        rhs_list.append(ZERO)
        row = [ZERO] * width
        row[j] = ONE
        row[n + j] = ONE
        rows.append(list(row))  # t_j + x_j >= 0
        kind_list.append(GE)
        rhs_list.append(ZERO)
    obj = [ZERO] * n + [-ONE] * n
    bnds = list(bounds) + [NONNEG] * n
    out = lp_solve(
        LinearProgram(vec(obj), mat_rows(rows), vec(rhs_list), tuple(kind_list), tuple(bnds))
    )
    if not out.optimal:
        return None
    # pin the attained absolute sum, then minimise coordinates in order
    row = [ZERO] * n + [ONE] * n
    rows.append(row)
    kind_list.append(EQ)
    rhs_list.append(-out.value)
    fixed: list[Fraction] = []
    for j in range(n):
        obj = [ZERO] * width
        obj[j] = -ONE
        out_j = lp_solve(
            LinearProgram(vec(obj), mat_rows(rows), vec(rhs_list), tuple(kind_list), tuple(bnds))
        )
        assert out_j.optimal  # feasible and |x_j| bounded by the pinned sum
        fixed.append(-out_j.value)
        row = [ZERO] * width
        row[j] = ONE
        rows.append(row)
        kind_list.append(EQ)
        rhs_list.append(fixed[-1])
    return tuple(fixed)


def mat_rows(rows) -> Mat:
    return tuple(tuple(r) for r in rows)


def max_min_slack(
    strict: Mat,
    strict_rhs: Vec,
    eqs: Mat,
    eq_rhs: Vec,
    n: int,
    bounds=None,
) -> tuple[Fraction, Vec] | None:
    """maximise t  s.t.  strict_i . x - t >= rhs_i, eqs hold, t <= 1.

    Returns (t*, x*), or None when the equality block alone is infeasible.
    t* > 0 certifies a point satisfying every 'strict' row strictly; t* < 0
    means the non-strict system has no solution at all.
    """
    if bounds is None:
        bounds = (FREE,) * n
    rows = []
    kinds = []
    rhs = []
    for row, r in zip(strict, strict_rhs):
        rows.append(tuple(row) + (-ONE,))
        kinds.append(GE)
        rhs.append(r)
    for row, r in zip(eqs, eq_rhs):
        rows.append(tuple(row) + (ZERO,))
        kinds.append(EQ)
        rhs.append(r)
    rows.append(tuple([ZERO] * n) + (-ONE,))  # -t >= -1
    kinds.append(GE)
    rhs.append(-ONE)
    obj = tuple([ZERO] * n) + (ONE,)
    out = lp_solve(
        LinearProgram(obj, mat_rows(rows), vec(rhs), tuple(kinds), tuple(bounds) + (FREE,))
    )
    if not out.optimal:
        return None
    return out.value, out.x[:n]
