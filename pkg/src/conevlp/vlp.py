"""Linear vector optimisation instances and their cone-projection data.

A problem instance is  min_C Px  s.t.  Ax >= b  with a pointed, nontrivial
ordering cone C = {y : Z^T y >= 0}.  The instance carries the augmented
objective-cone vector c in R^{q+1} with c_q = 1 and c_{q+1} = 0; when the
raw direction does not satisfy the normalisation, image coordinates are
permuted (and c positively scaled), the permutation being recorded so that
reported results live in the user's original coordinates.

The module also builds the projection data (G, H), the upper and lower
images as canonical H-reps, and the coordinate-transform matrix pairing
the dual image with the polar cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import lp
from .linalg import (
    Mat,
    Vec,
    ZERO,
    ONE,
    dot,
    identity,
    is_zero_vec,
    mat,
    mat_mul,
    mat_vec,
    neg,
    null_space_basis,
    rank,
    rref,
    solve_linear,
    transpose,
    unit,
    vec,
    zeros,
)
from .polyhedra import HRep, canonical_hrep, dd_cone, fm_eliminate
from .projection import ConeHRep


class VlpValidationError(Exception):
    """Instance data violates a structural assumption."""


class InfeasibleProblemError(Exception):
    """The primal feasible set (or the dual one) is empty."""


def cone_implicit_rows(z_mat: Mat) -> tuple[int, ...]:
    """Rows of Z^T that hold with equality on all of C."""
    zt = transpose(z_mat)
    q = len(z_mat)
    out = []
    for i, row in enumerate(zt):
        res = lp.lp_solve(
            lp.LinearProgram(row, zt, zeros(len(zt)), (lp.GE,) * len(zt), (lp.FREE,) * q)
        )
        # bounded support over the cone means identically zero on it
        if res.optimal and res.value == 0:
            out.append(i)
    return tuple(out)


def in_relative_interior_of_cone(z_mat: Mat, d: Vec, implicit: tuple[int, ...] | None = None) -> bool:
    """d in ri C for C = {y : Z^T y >= 0}."""
    zt = transpose(z_mat)
    if implicit is None:
        implicit = cone_implicit_rows(z_mat)
    imp = set(implicit)
    for i, row in enumerate(zt):
        v = dot(row, d)
        if i in imp:
            if v != 0:
                return False
        elif v <= 0:
            return False
    return True


def cone_generators(z_mat: Mat) -> Mat:
    """Extreme rays of the pointed cone {y : Z^T y >= 0}."""
    q = len(z_mat)
    rays, lin = dd_cone(transpose(z_mat), (), q)
    if lin:
        raise VlpValidationError("ordering cone is not pointed")
    return rays


def normalize_c(z_mat: Mat, c_raw: Vec) -> tuple[tuple[int, ...], Fraction, Vec]:
    """Permutation + positive scale bringing the last entry of c to 1.

    Returns (perm, scale, c) with c in R^{q+1}: internal coordinate i holds
    original coordinate perm[i], c = scale * permuted(c_raw) extended by a
    zero.  Identity permutation whenever the last raw entry is positive;
    otherwise the last positive entry is swapped into place.
    """
    q = len(c_raw)
    if is_zero_vec(c_raw):
        raise VlpValidationError("objective-cone direction must be nonzero")
    if not in_relative_interior_of_cone(z_mat, c_raw):
        raise VlpValidationError("objective-cone direction must lie in ri C")
    pivot = None
    if c_raw[q - 1] > 0:
        pivot = q - 1
    else:
        for j in range(q - 1, -1, -1):
            if c_raw[j] > 0:
                pivot = j
                break
    if pivot is None:
        raise VlpValidationError(
            "no positive entry in the objective-cone direction; "
            "orientation-reversing scalings are not supported"
        )
    perm = list(range(q))
    perm[pivot], perm[q - 1] = perm[q - 1], perm[pivot]
    perm_t = tuple(perm)
    permuted = tuple(c_raw[j] for j in perm_t)
    s = ONE / permuted[q - 1]
    c = tuple(x * s for x in permuted) + (ZERO,)
    return perm_t, s, c


@dataclass(frozen=True)
class TransformM:
    m: Mat
    m_inv: Mat


@lru_cache(maxsize=None)
def transform_m(c: Vec) -> TransformM:
    """The regular (q+1)x(q+1) coordinate transform built from c (c_q = 1)."""
    q = len(c) - 1
    if c[q - 1] != 1:
        raise VlpValidationError("transform requires c_q = 1")
    rows = []
    for i in range(q - 1):
        rows.append(tuple(-ONE if j == i else ZERO for j in range(q + 1)))
    rows.append(tuple(c[: q - 1]) + (ZERO, -ONE))
    rows.append(tuple(ZERO for _ in range(q - 1)) + (ONE, ZERO))
    m = tuple(rows)
    inv_cols = []
    for i in range(q + 1):
        sol = solve_linear(m, unit(q + 1, i))
        assert sol is not None and not sol[1]
        inv_cols.append(sol[0])
    m_inv = transpose(tuple(inv_cols))
    assert mat_mul(m, m_inv) == identity(q + 1)
    return TransformM(m, m_inv)


def proj_p(y: Vec) -> Vec:
    """Drop the homogenising coordinate: (y_1 .. y_q)."""
    return y[:-1]


def proj_p_star(w: Vec) -> Vec:
    """Keep (w_1 .. w_{q-1}, w_{q+1})."""
    return w[:-2] + (w[-1],)


@dataclass(frozen=True)
class VlpInstance:
    """Normalised instance; `perm`/`scale` map results back to user space."""

    a_mat: Mat
    b: Vec
    p_mat: Mat
    z_mat: Mat
    c: Vec
    perm: tuple[int, ...]
    scale: Fraction
    c_defaulted: bool = False

    @property
    def q(self) -> int:
        return len(self.p_mat)

    @property
    def n(self) -> int:
        return len(self.p_mat[0]) if self.p_mat and self.p_mat[0] else 0

    @property
    def m(self) -> int:
        return len(self.a_mat)

    @property
    def r(self) -> int:
        return len(self.z_mat[0]) if self.z_mat else 0

    @property
    def p_c(self) -> Vec:
        return proj_p(self.c)

    def to_original_image(self, y: Vec) -> Vec:
        out = [ZERO] * self.q
        for i, j in enumerate(self.perm):
            out[j] = y[i]
        return tuple(out)

    def to_original_dual_w(self, w: Vec) -> Vec:
        return self.to_original_image(tuple(x * self.scale for x in w))


def make_instance(a_rows, b, p_rows, z_rows, c_raw=None) -> VlpInstance:
    """Validate, normalise and freeze an instance.

    `c_raw` is the raw objective-cone direction in R^q; when omitted the sum
    of the extreme rays of C is used (always relatively interior).
    """
    a_mat = mat(a_rows)
    b_vec = vec(b)
    p_mat = mat(p_rows)
    z_mat = mat(z_rows)
    q = len(p_mat)
    if q < 2:
        raise VlpValidationError("vector objectives require q >= 2")
    if len(z_mat) != q:
        raise VlpValidationError("Z must have q rows")
    if len(a_mat) != len(b_vec):
        raise VlpValidationError("A and b disagree on the constraint count")
    n = len(p_mat[0]) if p_mat[0] else 0
    if a_mat and len(a_mat[0]) != n:
        raise VlpValidationError("A and P disagree on the variable count")
    if rank(transpose(z_mat)) != q:
        raise VlpValidationError("ordering cone is not pointed")
    zt = transpose(z_mat)
    if lp.feasible_point(
        zt + (tuple(sum(col) for col in zip(*zt)),),
        zeros(len(zt)) + (ONE,),
        (lp.GE,) * len(zt) + (lp.EQ,),
        (lp.FREE,) * q,
    ) is None:
        raise VlpValidationError("ordering cone is trivial")
    defaulted = c_raw is None
    if defaulted:
        gens = cone_generators(z_mat)
        c_raw_vec = tuple(sum(col, ZERO) for col in zip(*gens))
    else:
        c_raw_vec = vec(c_raw)
        if len(c_raw_vec) != q:
            raise VlpValidationError("objective-cone direction must have q entries")
    perm, s, c = normalize_c(z_mat, c_raw_vec)
    a_p = a_mat
    p_p = tuple(p_mat[j] for j in perm)
    z_p = tuple(z_mat[j] for j in perm)
    inst = VlpInstance(a_p, b_vec, p_p, z_p, c, perm, s, defaulted)
    if lp.feasible_point(inst.a_mat, inst.b, (lp.GE,) * inst.m, (lp.FREE,) * inst.n) is None:
        raise InfeasibleProblemError("the feasible set {x : Ax >= b} is empty")
    return inst


def build_gh(v: VlpInstance) -> ConeHRep:
    """Projection data: G = [A; -Z^T P; 0], H = [[0,-b],[Z^T,0],[0,1]]."""
    q, n, m, r = v.q, v.n, v.m, v.r
    zt = transpose(v.z_mat)
    ztp = mat_mul(zt, v.p_mat) if n else tuple(() for _ in range(r))
    g_rows = list(v.a_mat) + [neg(row) for row in ztp] + [zeros(n)]
    h_rows = [zeros(q) + (-bi,) for bi in v.b]
    h_rows += [row + (ZERO,) for row in zt]
    h_rows.append(zeros(q) + (ONE,))
    return ConeHRep(tuple(g_rows), tuple(h_rows))


@lru_cache(maxsize=None)
def upper_image_hrep(v: VlpInstance) -> HRep:
    """Canonical H-rep of P[S] + C, by eliminating x from the lifted system."""
    q, n = v.q, v.n
    zt = transpose(v.z_mat)
    ztp = mat_mul(zt, v.p_mat) if n else tuple(() for _ in range(v.r))
    # variables (y, x)
    rows = [zeros(q) + row for row in v.a_mat]
    rhs = list(v.b)
    for zrow, zprow in zip(zt, ztp):
        rows.append(tuple(zrow) + tuple(-x for x in zprow))
        rhs.append(ZERO)
    lifted = HRep.polyhedron(tuple(rows), tuple(rhs), q + n)
    return canonical_hrep(fm_eliminate(lifted, q))


@lru_cache(maxsize=None)
def dual_feasible_hrep(v: VlpInstance) -> HRep:
    """Feasible set of the dual problem in variables (u, w, vz)."""
    m, q, r, n = v.m, v.q, v.r, v.n
    width = m + q + r
    rows: list[Vec] = []
    rhs: list[Fraction] = []
    eqs: list[Vec] = []
    eq_rhs: list[Fraction] = []
    # w = Z vz
    for i in range(q):
        row = [ZERO] * width
        row[m + i] = ONE
        for j in range(r):
            row[m + q + j] = -v.z_mat[i][j]
        eqs.append(tuple(row))
        eq_rhs.append(ZERO)
    # A^T u = P^T w
    at = transpose(v.a_mat) if v.a_mat else tuple(() for _ in range(n))
    pt = transpose(v.p_mat)
    for jv in range(n):
        row = [ZERO] * width
        for i in range(m):
            row[i] = at[jv][i] if at else ZERO
        for i in range(q):
            row[m + i] = -pt[jv][i]
        eqs.append(tuple(row))
        eq_rhs.append(ZERO)
    # p(c)^T w = 1
    row = [ZERO] * width
    for i in range(q):
        row[m + i] = v.p_c[i]
    eqs.append(tuple(row))
    eq_rhs.append(ONE)
    # u >= 0, vz >= 0
    for i in range(m):
        row = [ZERO] * width
        row[i] = ONE
        rows.append(tuple(row))
        rhs.append(ZERO)
    for j in range(r):
        row = [ZERO] * width
        row[m + q + j] = ONE
        rows.append(tuple(row))
        rhs.append(ZERO)
    return HRep.polyhedron(tuple(rows), tuple(rhs), width, tuple(eqs), tuple(eq_rhs))


def dual_is_feasible(v: VlpInstance) -> bool:
    h = dual_feasible_hrep(v)
    return (
        lp.feasible_point(
            h.ineqs + h.eqs,
            h.ineq_rhs + h.eq_rhs,
            (lp.GE,) * len(h.ineqs) + (lp.EQ,) * len(h.eqs),
            (lp.FREE,) * h.dim,
        )
        is not None
    )


@lru_cache(maxsize=None)
def lower_image_hrep(v: VlpInstance) -> HRep:
    """Canonical H-rep of D[T] - R* in the dual image space.

    Coordinates are (w_1 .. w_{q-1}, t); the auxiliary variables u, vz and
    w_q are eliminated from the lifted description.
    """
    if not dual_is_feasible(v):
        raise InfeasibleProblemError("the dual feasible set is empty")
    m, q, r = v.m, v.q, v.r
    # variables: (w_1..w_{q-1}, t, u_1..u_m, vz_1..vz_r, w_q)
    width = (q - 1) + 1 + m + r + 1
    u0 = q
    vz0 = q + m
    wq = q + m + r

    def wcoef(i: int) -> int:
        return i if i < q - 1 else wq

    rows: list[Vec] = []
    rhs: list[Fraction] = []
    eqs: list[Vec] = []
    eq_rhs: list[Fraction] = []
    # t <= b^T u
    row = [ZERO] * width
    row[q - 1] = -ONE
    for i in range(m):
        row[u0 + i] = v.b[i]
    rows.append(tuple(row))
    rhs.append(ZERO)
    # w = Z vz
    for i in range(q):
        row = [ZERO] * width
        row[wcoef(i)] = ONE
        for j in range(r):
            row[vz0 + j] = -v.z_mat[i][j]
        eqs.append(tuple(row))
        eq_rhs.append(ZERO)
    # A^T u = P^T w
    at = transpose(v.a_mat) if v.a_mat else tuple(() for _ in range(v.n))
    pt = transpose(v.p_mat)
    for jv in range(v.n):
        row = [ZERO] * width
        for i in range(m):
            row[u0 + i] = at[jv][i] if at else ZERO
        for i in range(q):
            row[wcoef(i)] -= pt[jv][i]
        eqs.append(tuple(row))
        eq_rhs.append(ZERO)
    # p(c)^T w = 1
    row = [ZERO] * width
    for i in range(q):
        row[wcoef(i)] += v.p_c[i]
    eqs.append(tuple(row))
    eq_rhs.append(ONE)
    # u >= 0, vz >= 0
    for i in range(m + r):
        row = [ZERO] * width
        row[u0 + i] = ONE
        rows.append(tuple(row))
        rhs.append(ZERO)
    lifted = HRep.polyhedron(tuple(rows), tuple(rhs), width, tuple(eqs), tuple(eq_rhs))
    return canonical_hrep(fm_eliminate(lifted, q))


def homogenize_hrep(h: HRep) -> HRep:
    """H-rep of cl cone(B x {1}): shift rhs into a new last coordinate."""
    rows = [row + (-r,) for row, r in zip(h.ineqs, h.ineq_rhs)]
    rows.append(zeros(h.dim) + (ONE,))
    eqs = [row + (-r,) for row, r in zip(h.eqs, h.eq_rhs)]
    return HRep.cone(tuple(rows), h.dim + 1, tuple(eqs))
