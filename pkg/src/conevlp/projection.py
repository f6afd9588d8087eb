"""The two cone problems: project a cone, and generate its polar.

Given matrices G (k x n) and H (k x p) the primal problem asks for the
projected cone K = {y : exists x, Gx + Hy >= 0}; the dual problem asks for
K* = {w : w = -H^T u, G^T u = 0, u >= 0}, which by Farkas' lemma is the
polar cone of K.  A solution of either problem is a lineality basis plus
the extreme directions of the pointed part, each paired with a feasibility
witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import lp
from .linalg import (
    Mat,
    Vec,
    ZERO,
    dot,
    hstack,
    identity,
    is_zero_vec,
    mat_t_vec,
    neg,
    normalize_ray,
    null_space_basis,
    project_off,
    span_basis,
    transpose,
    vec,
)
from .polyhedra import (
    GeneratorRep,
    HRep,
    canonical_hrep,
    dd_cone,
    in_cone_of,
)


@dataclass(frozen=True)
class ConeHRep:
    """Data (G, H) of the projection problem; n = 0 (no x variables) is legal."""

    g: Mat
    h: Mat

    def __post_init__(self):
        if len(self.g) != len(self.h):
            raise ValueError("G and H must have the same number of rows")

    @property
    def k(self) -> int:
        return len(self.h)

    @property
    def n(self) -> int:
        return len(self.g[0]) if self.g and self.g[0] else 0

    @property
    def p(self) -> int:
        if not self.h:
            raise ValueError("empty system has no ambient dimension")
        return len(self.h[0])


@dataclass(frozen=True)
class ConeSolution:
    """Feasible pairs: extreme directions of the pointed part + lineality basis."""

    x_dir: tuple[tuple[Vec, Vec], ...]
    x_lin: tuple[tuple[Vec, Vec], ...]


@lru_cache(maxsize=None)
def projected_hrep_canonical(cone: ConeHRep) -> HRep:
    """Canonical H-rep of K (facets + implicit equations) via elimination."""
    p, n = cone.p, cone.n
    rows = hstack(cone.h, cone.g)  # variables ordered (y, x); x gets eliminated
    from .polyhedra import fm_eliminate

    lifted = HRep.cone(rows, p + n)
    projected = fm_eliminate(lifted, p)
    return canonical_hrep(projected)


def projected_hrep(cone: ConeHRep) -> Mat:
    """Irredundant inequality list for K; implicit equations appear as +- pairs."""
    canon = projected_hrep_canonical(cone)
    rows = list(canon.ineqs)
    for e in canon.eqs:
        rows.append(e)
        rows.append(neg(e))
    return tuple(sorted(normalize_ray(r) for r in rows))


def cone_lineality(cone: ConeHRep) -> Mat:
    """Canonical basis of the lineality space of K."""
    canon = projected_hrep_canonical(cone)
    rows = canon.ineqs + canon.eqs
    if not rows:
        return identity(cone.p)
    return null_space_basis(rows, cone.p)


def stacked_kernel_lineality(cone: ConeHRep) -> Mat:
    """Span of {y : exists x with Gx + Hy = 0} (the algebraic description).

    Coincides with the lineality of K whenever every two-sided direction of
    K admits an exact equality witness; the solvers use the geometric
    lineality, this is kept as a cross-check oracle.
    """
    stacked = hstack(cone.g, cone.h)
    kernel = null_space_basis(stacked, cone.n + cone.p)
    return span_basis(tuple(v[cone.n :] for v in kernel))


def _witness_for(cone: ConeHRep, y: Vec, prefer_equality: bool) -> Vec:
    """x with Gx + Hy >= 0; tries Gx = -Hy first for lineality directions."""
    from .linalg import mat_vec, solve_linear

    rhs = neg(mat_vec(cone.h, y))  # -H y
    if cone.n == 0:
        return ()
    if prefer_equality:
        sol = solve_linear(cone.g, rhs)
        if sol is not None:
            return sol[0]
    point = lp.canonical_feasible_point(
        cone.g, rhs, (lp.GE,) * cone.k, (lp.FREE,) * cone.n
    )
    assert point is not None  # y lies in K, so a witness exists
    return point


def pair_up_primal(cone: ConeHRep, rays: Mat, lin_basis: Mat) -> ConeSolution:
    """Attach canonical witnesses to known directions of the projected cone."""
    x_lin = tuple((_witness_for(cone, y, prefer_equality=True), y) for y in lin_basis)
    x_dir = tuple((_witness_for(cone, y, prefer_equality=False), y) for y in rays)
    return ConeSolution(x_dir, x_lin)


def solve_p(cone: ConeHRep) -> ConeSolution:
    """Lineality basis of K and extreme directions of K intersected with its
    orthogonal complement, each with a feasibility witness."""
    canon = projected_hrep_canonical(cone)
    p = cone.p
    lin_basis = cone_lineality(cone)
    eqs = canon.eqs + lin_basis  # pointed part: restrict to the complement
    rays, residual_lin = dd_cone(canon.ineqs, eqs, p)
    assert residual_lin == ()
    return pair_up_primal(cone, rays, lin_basis)


def _u_witness(cone: ConeHRep, w: Vec) -> Vec:
    """u >= 0 with G^T u = 0 and -H^T u = w (exists for every w in K*);
    deterministic for fixed input data."""
    k = cone.k
    gt = transpose(cone.g)
    ht = transpose(cone.h)
    rows = tuple(gt) + tuple(neg(r) for r in ht)
    rhs = vec([0] * cone.n) + w
    point = lp.feasible_point(rows, rhs, (lp.EQ,) * len(rows), (lp.NONNEG,) * k)
    assert point is not None
    return point


def solve_p_star(cone: ConeHRep) -> ConeSolution:
    """Solve the polar-generation problem.

    Extreme rays of {u >= 0 : G^T u = 0} are mapped through -H^T; images
    spanning two-sided directions form the lineality of K*, the remaining
    images are projected onto its complement and filtered down to extreme
    directions by cone-membership LPs.  Every surviving direction keeps one
    witness u.
    """
    k, p = cone.k, cone.p
    u_rays, u_lin = dd_cone(identity(k), transpose(cone.g), k)
    assert u_lin == ()  # subset of the nonnegative orthant is pointed
    images = []
    for u in u_rays:
        w = neg(mat_t_vec(cone.h, u))  # -H^T u
        if not is_zero_vec(w):
            images.append(normalize_ray(w))
    all_images = tuple(images)
    lin_members = tuple(
        w for w in all_images if in_cone_of(neg(w), all_images)
    )
    lin_basis = span_basis(lin_members)
    pointed = []
    for w in all_images:
        pw = project_off(w, lin_basis)
        if not is_zero_vec(pw):
            pointed.append(normalize_ray(pw))
    unique = sorted(set(pointed))
    extreme = []
    for i, w in enumerate(unique):
        others = tuple(x for j, x in enumerate(unique) if j != i)
        if not others or not in_cone_of(w, others):
            extreme.append(w)
    return pair_up_polar(cone, tuple(extreme), lin_basis)


def pair_up_polar(cone: ConeHRep, dirs: Mat, lin_basis: Mat) -> ConeSolution:
    """Attach canonical witnesses to known directions of the polar cone."""
    x_dir = tuple((_u_witness(cone, w), w) for w in dirs)
    x_lin = tuple((_u_witness(cone, w), w) for w in lin_basis)
    return ConeSolution(x_dir, x_lin)


def polar_check(ineq_rows: Mat, cand: GeneratorRep) -> bool:
    """Decide cone(cand) == {w : w.y <= 0 for all y in K} for K = {y : rows y >= 0}.

    Containment one way: every candidate generator must price out on K
    (bounded support LP).  The other way: the polar is generated by the
    negated inequality rows, each of which must lie in cone(cand).
    """
    rows = tuple(r for r in ineq_rows if not is_zero_vec(r))
    if not rows:
        # K is the whole space; the polar is {0}
        return all(is_zero_vec(r) for r in cand.rays) and all(
            is_zero_vec(l) for l in cand.lin
        )
    dim = len(rows[0])
    gens = tuple(cand.rays) + tuple(cand.lin) + tuple(neg(l) for l in cand.lin)
    for g in gens:
        out = lp.lp_solve(
            lp.LinearProgram(g, rows, (ZERO,) * len(rows), (lp.GE,) * len(rows), (lp.FREE,) * dim)
        )
        if out.status == "unbounded" or (out.optimal and out.value > 0):
            return False
    for r in rows:
        if not in_cone_of(neg(r), gens):
            return False
    return True
