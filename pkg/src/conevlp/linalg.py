"""Exact rational linear algebra kernels.

Everything downstream (cone projection, LP, face lattices) runs on
arbitrary-precision rationals.  Vectors are tuples of ``Fraction`` and
matrices are row-major tuples of such tuples; all routines return
deterministic normal forms so results can be compared structurally
instead of "equal up to scaling".
"""

from __future__ import annotations

import re
from fractions import Fraction

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse the text format: optional sign, digits, optional '/'+digits."""
    token = text.strip()
    if not _RATIONAL_RE.match(token):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in token:
        num, den = token.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(token))


def format_rational(value: Fraction) -> str:
    return str(value)


def vec(values) -> Vec:
    return tuple(Fraction(v) for v in values)


def mat(rows) -> Mat:
    out = tuple(vec(r) for r in rows)
    if out:
        width = len(out[0])
        if any(len(r) != width for r in out):
            raise ValueError("ragged matrix")
    return out


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def identity(n: int) -> Mat:
    return tuple(unit(n, i) for i in range(n))


def dot(a: Vec, b: Vec) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def scale(a: Vec, s: Fraction) -> Vec:
    return tuple(x * s for x in a)


def neg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(dot(row, v) for row in m)


def mat_t_vec(m: Mat, v: Vec) -> Vec:
    """Transpose-apply: returns m^T v."""
    if not m:
        return ()
    cols = len(m[0])
    return tuple(sum((m[i][j] * v[i] for i in range(len(m))), ZERO) for j in range(cols))


def transpose(m: Mat) -> Mat:
    if not m:
        return ()
    return tuple(tuple(row[j] for row in m) for j in range(len(m[0])))


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def hstack(a: Mat, b: Mat) -> Mat:
    if not a:
        return b
    if not b:
        return a
    return tuple(ra + rb for ra, rb in zip(a, b))


def rref(m: Mat) -> tuple[Mat, tuple[int, ...], int]:
    """Reduced row echelon form.

    Returns (R, pivot column indices, rank).  Pivot rows are normalised to a
    leading 1, which keeps intermediate entries reduced (Fraction arithmetic
    cancels gcds on every operation).
    """
    rows = [list(r) for r in m]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in rows), tuple(pivots), len(pivots)


def rank(m: Mat) -> int:
    return rref(m)[2]


def null_space_basis(m: Mat, dim: int | None = None) -> tuple[Vec, ...]:
    """Canonical kernel basis: free columns in ascending order, free entry 1."""
    if not m:
        if dim is None:
            raise ValueError("dimension required for empty matrix")
        return identity(dim)
    ncols = len(m[0])
    red, pivots, _ = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for i, p in enumerate(pivots):
            v[p] = -red[i][free]
        basis.append(tuple(v))
    return tuple(basis)


def orth_complement_basis(vectors: Mat, dim: int | None = None) -> tuple[Vec, ...]:
    """Basis of {z : v^T z = 0 for all v}.  Span of no vectors is {0}."""
    if not vectors:
        if dim is None:
            raise ValueError("dimension required for empty vector list")
        return identity(dim)
    return null_space_basis(vectors)


def solve_linear(m: Mat, b: Vec) -> tuple[Vec, tuple[Vec, ...]] | None:
    """Solve m x = b exactly.

    Returns (particular solution, kernel basis) or None when inconsistent.
    The particular solution sets all free variables to zero, so it is a
    deterministic function of the row space.
    """
    if not m:
        return (), ()
    ncols = len(m[0])
    if len(b) != len(m):
        raise ValueError("rhs dimension mismatch")
    aug = tuple(row + (bi,) for row, bi in zip(m, b))
    red, pivots, _ = rref(aug)
    # inconsistency shows as a pivot in the augmented column
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for i, p in enumerate(pivots):
        x[p] = red[i][ncols]
    kernel = null_space_basis(m)
    return tuple(x), kernel


def span_basis(vectors: Mat) -> tuple[Vec, ...]:
    """Canonical (RREF-row) basis of the span of the given vectors."""
    nonzero = tuple(v for v in vectors if not is_zero_vec(v))
    if not nonzero:
        return ()
    red, _, rk = rref(nonzero)
    return red[:rk]


def in_span(basis: Mat, v: Vec) -> bool:
    if is_zero_vec(v):
        return True
    if not basis:
        return False
    return solve_linear(transpose(basis), v) is not None


def project_off(v: Vec, basis: Mat) -> Vec:
    """Orthogonal projection of v onto the complement of span(basis)."""
    if not basis:
        return v
    gram = tuple(tuple(dot(bi, bj) for bj in basis) for bi in basis)
    rhs = tuple(dot(bi, v) for bi in basis)
    sol = solve_linear(gram, rhs)
    assert sol is not None  # Gram matrix of independent vectors is regular
    coeffs = sol[0]
    out = v
    for coef, b in zip(coeffs, basis):
        out = sub(out, scale(b, coef))
    return out


def normalize_ray(v: Vec) -> Vec:
    """Scale by a positive factor so the first nonzero entry is +-1."""
    for x in v:
        if x != 0:
            return scale(v, ONE / abs(x))
    return v


def same_subspace(basis_a: Mat, basis_b: Mat) -> bool:
    return span_basis(basis_a) == span_basis(basis_b)
