"""Outer-approximation route to the cone solutions.

The cone and its polar are reduced to their pointed parts, which are polar
to each other inside the subspace orthogonal to both lineality spaces.
Cutting each pointed part with a hyperplane through a relative-interior
normal of the other yields a pair of mutually polar polytopes; their
vertex sets are computed by a cutting loop that starts from a bounding box
in chart coordinates and adds one violated cone inequality per step.  The
result must coincide exactly with the direct double-description route,
which is what the oracle-equivalence tests assert.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import (
    Mat,
    Vec,
    ZERO,
    ONE,
    add,
    dot,
    is_zero_vec,
    neg,
    normalize_ray,
    orth_complement_basis,
    scale,
    solve_linear,
    sub,
    transpose,
    vec,
    zeros,
)
from .polyhedra import HRep, dd_cone
from .projection import (
    ConeHRep,
    ConeSolution,
    cone_lineality,
    projected_hrep_canonical,
    solve_p,
    solve_p_star,
)


class DegenerateConeError(Exception):
    """The cone (or its polar) is a subspace; the bounded bases degenerate."""


class ApproximationError(Exception):
    """Internal consistency failure of the cutting loop (bug trap)."""


@dataclass(frozen=True)
class Chart:
    """Affine chart of the slice {normal . y = -1} inside the working subspace."""

    origin: Vec
    basis: Mat  # rows span the slice directions

    def to_ambient(self, t: Vec) -> Vec:
        y = self.origin
        for coef, b in zip(t, self.basis):
            y = add(y, scale(b, coef))
        return y

    def to_chart(self, y: Vec) -> Vec:
        if not self.basis:
            return ()
        diff = sub(y, self.origin)
        sol = solve_linear(transpose(self.basis), diff)
        assert sol is not None
        return sol[0]


@dataclass(frozen=True)
class DualPairSetup:
    lin_k: Mat
    lin_kstar: Mat
    v_basis: Mat
    xi: Vec
    eta: Vec
    k_ineqs: Mat  # facets of the projected cone (cut oracle, primal side)
    kstar_ineqs: Mat  # facets of the polar (cut oracle, dual side)
    b_hrep: HRep
    bstar_hrep: HRep
    chart: Chart  # primal slice chart; its basis is dual to chart_star's
    chart_star: Chart
    epsilon: Fraction
    epsilon_star: Fraction


def _dual_basis(primal: Mat, target_space: Mat) -> Mat:
    """Rows v*_j in span(target_space) with v_i . v*_j = delta_ij."""
    if not primal:
        return ()
    k = len(primal)
    pairing = tuple(tuple(dot(vi, uj) for uj in target_space) for vi in primal)
    cols = []
    for j in range(k):
        rhs = tuple(ONE if i == j else ZERO for i in range(k))
        sol = solve_linear(pairing, rhs)
        assert sol is not None and not sol[1]  # the pairing is nondegenerate
        w = zeros(len(primal[0]))
        for coef, u in zip(sol[0], target_space):
            w = add(w, scale(u, coef))
        cols.append(w)
    return tuple(cols)


def build_setup(cone: ConeHRep) -> DualPairSetup:
    """Pointed parts, interior normals with pairing -1, slice charts.

    Raises DegenerateConeError for the zero cone and for subspaces, where a
    bounded base does not exist; callers fall back to the direct route.
    """
    p = cone.p
    canon = projected_hrep_canonical(cone)
    lin_k = cone_lineality(cone)
    k_ineqs = canon.ineqs
    seed_rays, residual = dd_cone(canon.ineqs, canon.eqs + lin_k, p)
    assert residual == ()
    if not seed_rays:
        raise DegenerateConeError("cone is a subspace; no pointed part")
    # polar: facets of K* are the negated extreme rays of the pointed part,
    # its membership equations come from the lineality of K, and its own
    # lineality is spanned by the implicit-equation rows of K
    lin_kstar = canon.eqs
    kstar_ineqs = tuple(sorted(normalize_ray(neg(r)) for r in seed_rays))
    dual_rays, dual_residual = dd_cone(kstar_ineqs, tuple(lin_k) + tuple(lin_kstar), p)
    assert dual_residual == ()
    if not dual_rays:
        raise DegenerateConeError("polar cone is a subspace; no pointed part")

    xi = zeros(p)
    for r in seed_rays:
        xi = add(xi, r)
    eta0 = zeros(p)
    for r in dual_rays:
        eta0 = add(eta0, r)
    pairing = dot(xi, eta0)
    if pairing >= 0:
        raise ApproximationError("interior normals do not pair negatively")
    eta = scale(eta0, -ONE / pairing)

    v_basis = orth_complement_basis(tuple(lin_k) + tuple(lin_kstar), p)
    w_basis = orth_complement_basis(tuple(lin_k) + tuple(lin_kstar) + (eta,), p)
    wstar_space = orth_complement_basis(tuple(lin_k) + tuple(lin_kstar) + (xi,), p)
    wstar_basis = _dual_basis(w_basis, wstar_space)
    chart = Chart(xi, w_basis)
    chart_star = Chart(eta, wstar_basis)

    def shrink(center: Vec, dirs: Mat, ineqs: Mat, eqs: Mat) -> Fraction:
        eps = ONE
        while True:
            ok = True
            for d in dirs:
                for s in (eps, -eps):
                    pt = add(center, scale(d, s))
                    if any(dot(row, pt) < 0 for row in ineqs) or any(
                        dot(row, pt) != 0 for row in eqs
                    ):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return eps
            eps = eps / 2

    # perturbed normals stay inside the pointed parts
    eps_star = shrink(eta, wstar_basis, kstar_ineqs, tuple(lin_kstar) + tuple(lin_k))
    eps = shrink(xi, w_basis, k_ineqs, canon.eqs + lin_k)

    b_hrep = HRep.polyhedron(
        k_ineqs,
        (ZERO,) * len(k_ineqs),
        p,
        canon.eqs + lin_k + (eta,),
        (ZERO,) * (len(canon.eqs) + len(lin_k)) + (-ONE,),
    )
    bstar_hrep = HRep.polyhedron(
        kstar_ineqs,
        (ZERO,) * len(kstar_ineqs),
        p,
        tuple(lin_kstar) + tuple(lin_k) + (xi,),
        (ZERO,) * (len(lin_kstar) + len(lin_k)) + (-ONE,),
    )
    # invariants of the setup
    assert dot(xi, eta) == -ONE
    assert all(dot(row, xi) > 0 for row in k_ineqs)
    assert all(dot(row, eta) > 0 for row in kstar_ineqs)
    return DualPairSetup(
        lin_k,
        lin_kstar,
        v_basis,
        xi,
        eta,
        k_ineqs,
        kstar_ineqs,
        b_hrep,
        bstar_hrep,
        chart,
        chart_star,
        eps,
        eps_star,
    )


@dataclass
class OuterApprox:
    """Mutable cutting state: H-rep rows (in chart coordinates) + vertices."""

    rows: list[tuple[Vec, Fraction]]  # a . t >= rhs
    vertices: list[Vec]
    cuts_applied: int = 0

    def tight_sets(self):
        return [
            frozenset(
                i for i, (a, r) in enumerate(self.rows) if dot(a, t) == r
            )
            for t in self.vertices
        ]


def _initial_box(dim: int, eps: Fraction) -> OuterApprox:
    rows: list[tuple[Vec, Fraction]] = []
    bound = ONE / eps
    for j in range(dim):
        e = tuple(ONE if i == j else ZERO for i in range(dim))
        rows.append((e, -bound))
        rows.append((neg(e), -bound))
    verts: list[Vec] = [()]
    for j in range(dim):
        verts = [t + (s,) for t in verts for s in (-bound, bound)]
    return OuterApprox(rows, sorted(verts))


def _apply_cut(approx: OuterApprox, row: Vec, rhs: Fraction) -> None:
    """One double-description step on the vertex set of a polytope."""
    vals = [dot(row, t) - rhs for t in approx.vertices]
    keep = [t for t, v in zip(approx.vertices, vals) if v >= 0]
    if len(keep) == len(approx.vertices):
        approx.rows.append((row, rhs))
        approx.cuts_applied += 1
        return
    tights = approx.tight_sets()
    new_pts: list[Vec] = []
    for i, ti in enumerate(approx.vertices):
        if vals[i] <= 0:
            continue
        for j, tj in enumerate(approx.vertices):
            if vals[j] >= 0:
                continue
            common = tights[i] & tights[j]
            edge_members = sum(1 for T in tights if common <= T)
            if edge_members > 2:
                continue  # not an edge of the current polytope
            lam = vals[i] / (vals[i] - vals[j])
            cut_pt = add(ti, scale(sub(tj, ti), lam))
            new_pts.append(cut_pt)
    approx.rows.append((row, rhs))
    approx.cuts_applied += 1
    approx.vertices = sorted(set(keep) | set(new_pts))


def outer_approximate(setup: DualPairSetup, side: str, trace=None, snapshots=None) -> Mat:
    """Vertices of the bounded base (primal side) or of its polar (dual side).

    Starts from the chart-coordinate box induced by the perturbed normals
    and repeatedly cuts with the most violated cone inequality at the
    lexicographically smallest outside vertex.
    """
    if side == "primal":
        chart, ineqs, eps = setup.chart, setup.k_ineqs, setup.epsilon_star
    elif side == "dual":
        chart, ineqs, eps = setup.chart_star, setup.kstar_ineqs, setup.epsilon
    else:
        raise ValueError("side must be 'primal' or 'dual'")
    dim = len(chart.basis)
    approx = _initial_box(dim, eps)
    if snapshots is not None:
        snapshots.append((list(approx.rows), list(approx.vertices)))
    # chart transport of the cone inequalities: a . (origin + B t) >= 0
    chart_rows = [
        (tuple(dot(a, b) for b in chart.basis), -dot(a, chart.origin)) for a in ineqs
    ]
    added = set()
    limit = 4 * max(1, len(ineqs)) + dim + 4
    while True:
        outside = None
        for t in approx.vertices:
            viol = [(dot(a, t) - r, idx) for idx, (a, r) in enumerate(chart_rows)]
            worst = min(viol) if viol else (ZERO, -1)
            if worst[0] < 0:
                outside = (t, worst[1])
                break
        if outside is None:
            break
        if approx.cuts_applied >= limit:
            raise ApproximationError("cut budget exceeded")
        t, idx = outside
        if idx in added:
            raise ApproximationError("repeated cut; vertex update is inconsistent")
        added.add(idx)
        if trace is not None:
            trace(approx.cuts_applied + 1, t, idx, len(approx.vertices))
        _apply_cut(approx, chart_rows[idx][0], chart_rows[idx][1])
        if snapshots is not None:
            snapshots.append((list(approx.rows), list(approx.vertices)))
    return tuple(sorted(chart.to_ambient(t) for t in approx.vertices))


def solve_via_benson(cone: ConeHRep, trace=None) -> tuple[ConeSolution, ConeSolution]:
    """Both cone solutions through the outer-approximation route.

    Degenerate cones (the zero cone and subspaces) bypass the cutting loop;
    everything else is assembled from the computed base vertices with the
    same canonical witness recovery as the direct route, so the two paths
    agree exactly whenever both are correct.
    """
    from .projection import pair_up_primal, pair_up_polar

    try:
        setup = build_setup(cone)
    except DegenerateConeError:
        return solve_p(cone), solve_p_star(cone)
    primal_vertices = outer_approximate(setup, "primal", trace=trace)
    dual_vertices = outer_approximate(setup, "dual", trace=trace)
    primal_rays = tuple(sorted(normalize_ray(y) for y in primal_vertices))
    dual_rays = tuple(sorted(normalize_ray(w) for w in dual_vertices))
    primal = pair_up_primal(cone, primal_rays, setup.lin_k)
    polar = pair_up_polar(cone, dual_rays, setup.lin_kstar)
    return primal, polar
