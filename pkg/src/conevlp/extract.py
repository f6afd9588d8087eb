"""From cone solutions to vector-optimisation solutions.

The primal direction: a solution of the projection problem for (G, H)
built from a VLP instance is turned into a finite set of minimising
points, directions and lineality directions whose generated set (plus the
ordering cone) reproduces the upper image.  The extraction fails exactly
when the lineality of the upper image meets the ordering cone outside the
origin, in which case a certificate direction is returned instead.

The dual direction mirrors this for the polar cone, producing elements of
the dual feasible set whose objective values generate the lower image.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import lp
from .linalg import (
    Mat,
    Vec,
    ZERO,
    ONE,
    dot,
    is_zero_vec,
    mat_vec,
    neg,
    scale,
    span_basis,
    transpose,
    unit,
    vec,
    zeros,
)
from .polyhedra import GeneratorRep, HRep, canonical_hrep, generators_to_hrep
from .projection import ConeHRep, ConeSolution
from .vlp import (
    VlpInstance,
    build_gh,
    cone_generators,
    lower_image_hrep,
    proj_p,
    proj_p_star,
    transform_m,
    upper_image_hrep,
)


class InconsistentInputError(Exception):
    """The supplied cone solution fails its feasibility re-checks."""


@dataclass(frozen=True)
class VlpSolution:
    s_poi: Mat
    s_dir: Mat
    s_lin: Mat


@dataclass(frozen=True)
class DualVlpSolution:
    t_poi: tuple[tuple[Vec, Vec], ...]
    t_dir: tuple[tuple[Vec, Vec], ...]
    t_lin: tuple[tuple[Vec, Vec], ...]


@dataclass(frozen=True)
class NoSolutionCertificate:
    """A nonzero direction in (C intersect lineality of the image)."""

    witness: Vec
    side: str  # 'primal' | 'dual'
    condition: str


def _check_cone_pairs(cone: ConeHRep, cs: ConeSolution) -> None:
    for x, y in cs.x_dir + cs.x_lin:
        gx = mat_vec(cone.g, x) if cone.n else zeros(cone.k)
        hy = mat_vec(cone.h, y)
        if any(a + b < 0 for a, b in zip(gx, hy)):
            raise InconsistentInputError("pair violates G x + H y >= 0")


def _lineality_meets_cone(z_mat: Mat, basis: Mat) -> Vec | None:
    """Nonzero z in span(basis) with Z^T z >= 0, or None.

    Pointedness of C turns z != 0 into the normalisation 1^T Z^T z = 1.
    """
    if not basis:
        return None
    zt = transpose(z_mat)
    cols = len(basis)
    rows = [tuple(dot(zrow, b) for b in basis) for zrow in zt]
    norm_row = tuple(sum(col, ZERO) for col in zip(*rows))
    point = lp.feasible_point(
        tuple(rows) + (norm_row,),
        zeros(len(rows)) + (ONE,),
        (lp.GE,) * len(rows) + (lp.EQ,),
        (lp.FREE,) * cols,
    )
    if point is None:
        return None
    z = zeros(len(z_mat))
    for coef, b in zip(point, basis):
        z = tuple(a + coef * x for a, x in zip(z, b))
    return z


def _in_cone_plus_span(z_mat: Mat, span: Mat, target: Vec) -> bool:
    """target in C + span(basis): one feasibility LP in (lambda) variables."""
    zt = transpose(z_mat)
    cols = len(span)
    # Z^T (target - span . lambda) >= 0
    rows = [tuple(-dot(zrow, b) for b in span) for zrow in zt]
    rhs = [-dot(zrow, target) for zrow in zt]
    point = lp.feasible_point(
        tuple(rows), vec(rhs), (lp.GE,) * len(rows), (lp.FREE,) * cols
    )
    return point is not None


def extract_primal(v: VlpInstance, cs: ConeSolution) -> VlpSolution | NoSolutionCertificate:
    """Assemble (S_poi, S_dir, S_lin) or certify that no minimiser exists."""
    cone = build_gh(v)
    _check_cone_pairs(cone, cs)
    q = v.q
    l_upper = span_basis(tuple(proj_p(y) for _, y in cs.x_lin))
    witness = _lineality_meets_cone(v.z_mat, l_upper)
    if witness is not None:
        return NoSolutionCertificate(witness, "primal", "L(P) ∩ C ≠ {0}")
    s_poi, s_dir = [], []
    for x, y in cs.x_dir:
        h = y[q]
        if h > 0:
            s_poi.append(scale(x, ONE / h))
        else:
            if not _in_cone_plus_span(v.z_mat, l_upper, proj_p(y)):
                s_dir.append(x)
    s_lin = [x for x, _ in cs.x_lin]
    if not s_poi:
        raise InconsistentInputError("no extreme direction crosses the image level")
    return VlpSolution(tuple(sorted(s_poi)), tuple(sorted(s_dir)), tuple(s_lin))


def extract_dual(v: VlpInstance, ds: ConeSolution) -> DualVlpSolution | NoSolutionCertificate:
    """Assemble (T_poi, T_dir, T_lin) from a solution of the polar problem.

    Pairs are rebuilt from the witness components so that T_poi lies in the
    dual feasible set and T_dir in its recession cone exactly; the duality
    transform only determines the objective values.
    """
    q, m, r = v.q, v.m, v.r
    c = v.c
    e_q = unit(q, q - 1)
    l_lower = span_basis(tuple(proj_p_star(w) for _, w in ds.x_lin))
    # condition: lineality of the lower image meets the dual ordering ray
    from .linalg import in_span

    if in_span(l_lower, e_q):
        return NoSolutionCertificate(e_q, "dual", "L(D) ∩ R* ≠ {0}")

    def t_pair(u_full: Vec, w_cone: Vec, factor: Fraction) -> tuple[Vec, Vec]:
        u = tuple(u_full[:m])
        w_t = neg(w_cone[:q])
        return (scale(u, factor), scale(w_t, factor))

    t_poi, t_dir = [], []
    for u, w in ds.x_dir:
        cw = dot(c, w)
        if cw < 0:
            t_poi.append(t_pair(u, w, -ONE / cw))
        elif cw == 0:
            # mirrored direction test: p(M^-1 w) outside -R* + L(D)
            minus_r_dir = neg(e_q)
            d_dir = _p_m_inv(w, c)
            if not _affine_member(d_dir, l_lower, minus_r_dir):
                t_dir.append(t_pair(u, w, ONE))
    t_lin = [t_pair(u, w, ONE) for u, w in ds.x_lin]
    if not t_poi:
        raise InconsistentInputError("no polar direction with negative pairing")
    return DualVlpSolution(tuple(sorted(t_poi)), tuple(sorted(t_dir)), tuple(t_lin))


def _p_m_inv(w: Vec, c: Vec) -> Vec:
    """p(M^-1 w) = (-w_1, ..., -w_{q-1}, w_{q+1})."""
    q = len(c) - 1
    return tuple(-w[i] for i in range(q - 1)) + (w[q],)


def _affine_member(target: Vec, span: Mat, ray: Vec) -> bool:
    """target in cone{ray} + span(basis)?"""
    cols = len(span) + 1
    rows = []
    for i in range(len(target)):
        rows.append(tuple(b[i] for b in span) + (ray[i],))
    point = lp.feasible_point(
        tuple(rows),
        target,
        (lp.EQ,) * len(rows),
        (lp.FREE,) * len(span) + (lp.NONNEG,),
    )
    return point is not None


def d_value(v: VlpInstance, u: Vec, w: Vec) -> Vec:
    """Dual objective D(u, w) = (w_1, ..., w_{q-1}, b^T u)."""
    return tuple(w[: v.q - 1]) + (dot(v.b, u),)


def verify_minimizer(v: VlpInstance, x: Vec, kind: str = "point") -> bool:
    """Exact minimality test via one LP over the feasible set (or its
    recession cone for directions)."""
    n, m = v.n, v.m
    zt = transpose(v.z_mat)
    if kind == "point":
        rhs_a = v.b
        if any(dot(row, x) < r for row, r in zip(v.a_mat, v.b)):
            raise ValueError("x is not feasible")
    elif kind == "direction":
        rhs_a = zeros(m)
        if is_zero_vec(x):
            raise ValueError("a direction must be nonzero")
        if any(dot(row, x) < 0 for row in v.a_mat):
            raise ValueError("x is not a recession direction")
    else:
        raise ValueError("kind must be 'point' or 'direction'")
    px = mat_vec(v.p_mat, x)
    # variables x'; maximise 1^T Z^T (P x - P x') with Z^T(P x - P x') >= 0
    zp = tuple(tuple(dot(zrow, pcol) for pcol in transpose(v.p_mat)) for zrow in zt)
    rows = list(v.a_mat)
    rhs = list(rhs_a)
    for zrow, zprow in zip(zt, zp):
        rows.append(neg(zprow))
        rhs.append(-dot(zrow, px))
    obj = neg(tuple(sum(col, ZERO) for col in zip(*zp)))
    out = lp.lp_solve(
        lp.LinearProgram(
            obj,
            tuple(rows),
            vec(rhs),
            (lp.GE,) * len(rows),
            (lp.FREE,) * n,
        )
    )
    if out.status == "unbounded":
        return False
    assert out.optimal
    value = out.value + dot(tuple(sum(col, ZERO) for col in zip(*zp)), x)
    return value == 0


def verify_maximizer(v: VlpInstance, u: Vec, w: Vec, kind: str = "point") -> bool:
    """Dual maximality: no feasible pair dominates D(u, w) along the dual
    ordering ray.  One LP; unbounded improvement also refutes maximality."""
    from .vlp import dual_feasible_hrep

    h = dual_feasible_hrep(v)
    m, q, r = v.m, v.q, v.r
    rows = list(h.ineqs)
    rhs = list(h.ineq_rhs)
    eqs = list(h.eqs)
    eq_rhs = list(h.eq_rhs)
    if kind == "direction":
        # recession version: the normalisation p(c)^T w = 1 relaxes to = 0
        eq_rhs[-1] = ZERO
    # pin the first q-1 objective coordinates
    for i in range(q - 1):
        row = [ZERO] * h.dim
        row[m + i] = ONE
        eqs.append(tuple(row))
        eq_rhs.append(w[i])
    obj = [ZERO] * h.dim
    for i in range(m):
        obj[i] = v.b[i]
    out = lp.lp_solve(
        lp.LinearProgram(
            vec(obj),
            tuple(rows) + tuple(eqs),
            vec(rhs) + vec(eq_rhs),
            (lp.GE,) * len(rows) + (lp.EQ,) * len(eqs),
            (lp.FREE,) * h.dim,
        )
    )
    if out.status == "unbounded":
        return False
    if not out.optimal:
        raise ValueError("(u, w) is not dual feasible at its own coordinates")
    return out.value == dot(v.b, u)


def upper_image_from_solution(v: VlpInstance, sol: VlpSolution) -> HRep:
    points = tuple(mat_vec(v.p_mat, x) for x in sol.s_poi)
    rays = tuple(mat_vec(v.p_mat, x) for x in sol.s_dir) + cone_generators(v.z_mat)
    lin = tuple(mat_vec(v.p_mat, x) for x in sol.s_lin)
    return generators_to_hrep(GeneratorRep(points, rays, lin), v.q)


def verify_infimizer(v: VlpInstance, sol: VlpSolution) -> bool:
    """conv P[S_poi] + cone P[S_dir] + span P[S_lin] + C == upper image."""
    for x in sol.s_poi:
        if any(dot(row, x) < r for row, r in zip(v.a_mat, v.b)):
            return False
    for x in sol.s_dir + sol.s_lin:
        if any(dot(row, x) < 0 for row in v.a_mat):
            return False
    for x in sol.s_lin:
        if any(dot(row, x) != 0 for row in v.a_mat):
            return False
    return upper_image_from_solution(v, sol) == upper_image_hrep(v)


def lower_image_from_solution(v: VlpInstance, sol: DualVlpSolution) -> HRep:
    e_q = unit(v.q, v.q - 1)
    points = tuple(d_value(v, u, w) for u, w in sol.t_poi)
    rays = tuple(d_value(v, u, w) for u, w in sol.t_dir) + (neg(e_q),)
    lin = tuple(d_value(v, u, w) for u, w in sol.t_lin)
    return generators_to_hrep(GeneratorRep(points, rays, lin), v.q)


def verify_supremizer(v: VlpInstance, sol: DualVlpSolution) -> bool:
    """conv D[T_poi] + cone D[T_dir] + span D[T_lin] - R* == lower image."""
    return lower_image_from_solution(v, sol) == lower_image_hrep(v)


def pair_form(sol: VlpSolution) -> tuple[Mat, Mat]:
    """Collapse the lineality component into +- direction pairs."""
    s_h = tuple(sol.s_dir) + tuple(x for l in sol.s_lin for x in (l, neg(l)))
    return sol.s_poi, s_h


def solve_primal(v: VlpInstance, cs: ConeSolution | None = None):
    from .projection import solve_p

    if cs is None:
        cs = solve_p(build_gh(v))
    return extract_primal(v, cs)


def solve_dual(v: VlpInstance, ds: ConeSolution | None = None):
    from .projection import solve_p_star
    from .vlp import InfeasibleProblemError, dual_is_feasible

    if not dual_is_feasible(v):
        raise InfeasibleProblemError("the dual feasible set is empty")
    if ds is None:
        ds = solve_p_star(build_gh(v))
    return extract_dual(v, ds)
