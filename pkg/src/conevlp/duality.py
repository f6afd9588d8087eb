"""Geometric duality between the upper and the lower image.

The coupling function phi is bi-affine; the duality map sends a face of
the lower image to the subset of the upper image on which phi vanishes
for every member of the face.  Because phi is affine in each argument the
infinite intersection collapses to one affine equation per face generator.

The same correspondence factors through cones: homogenise (phi_map), apply
the coordinate transform, take the orthogonal face of the polar
(gamma_map), and dehomogenise.  `verify_geometric_duality` checks on a
concrete instance that the direct map and the factored map agree, that the
map is an inclusion-reversing bijection between the maximal proper faces
of the lower image and the minimal proper faces of the upper image, and
that paired dimensions sum to q - 1.
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
    sub,
    unit,
    vec,
    zeros,
)
from .polyhedra import (
    Face,
    GeneratorRep,
    HRep,
    canonical_generators,
    dd_cone,
    dd_hull,
    face_lattice,
    EmptyPolyhedronError,
)
from .vlp import (
    VlpInstance,
    build_gh,
    lower_image_hrep,
    proj_p,
    transform_m,
    upper_image_hrep,
)
from .projection import projected_hrep_canonical


class DualityError(Exception):
    """A claimed correspondence failed on a concrete face pair."""


EMPTY_FACE = Face((), -1, GeneratorRep((), (), ()))


def phi(y: Vec, w: Vec, c: Vec) -> Fraction:
    """Coupling value: sum_{i<q} y_i w_i + y_q (1 - sum_{i<q} c_i w_i) - w_q."""
    q = len(c) - 1
    s = sum((y[i] * w[i] for i in range(q - 1)), ZERO)
    return s + y[q - 1] * (ONE - sum((c[i] * w[i] for i in range(q - 1)), ZERO)) - w[q - 1]


def _phi_y_equation(w: Vec, c: Vec) -> tuple[Vec, Fraction]:
    """phi(., w) = 0 as an affine equation a . y = rhs."""
    q = len(c) - 1
    a = tuple(w[i] for i in range(q - 1)) + (ONE - sum((c[i] * w[i] for i in range(q - 1)), ZERO),)
    return a, w[q - 1]


def _phi_y_linear_part(r: Vec, c: Vec) -> tuple[Vec, Fraction]:
    """Vanishing of the w-linear part of phi(., .) along a dual ray r."""
    q = len(c) - 1
    a = tuple(r[i] for i in range(q - 1)) + (-sum((c[i] * r[i] for i in range(q - 1)), ZERO),)
    return a, r[q - 1]


def _phi_w_equation(y: Vec, c: Vec) -> tuple[Vec, Fraction]:
    """phi(y, .) = 0 as an affine equation a . w = rhs."""
    q = len(c) - 1
    a = tuple(y[i] - y[q - 1] * c[i] for i in range(q - 1)) + (-ONE,)
    return a, -y[q - 1]


def _phi_w_linear_part(r: Vec, c: Vec) -> tuple[Vec, Fraction]:
    q = len(c) - 1
    a = tuple(r[i] - r[q - 1] * c[i] for i in range(q - 1)) + (ZERO,)
    return a, -r[q - 1]


def _cut_face(hrep: HRep, equations: list[tuple[Vec, Fraction]]) -> Face:
    """The (possibly empty) face cut out of a canonical H-rep by equations."""
    cut = hrep.with_extra_eqs(tuple(a for a, _ in equations), tuple(r for _, r in equations))
    try:
        gens = dd_hull(cut)
    except EmptyPolyhedronError:
        return EMPTY_FACE
    return _face_of(hrep, gens)


def _face_of(hrep: HRep, gens: GeneratorRep) -> Face:
    active = tuple(
        sorted(
            i
            for i in range(len(hrep.ineqs))
            if all(dot(hrep.ineqs[i], p) == hrep.ineq_rhs[i] for p in gens.points)
            and all(dot(hrep.ineqs[i], r) == 0 for r in gens.rays)
            and all(dot(hrep.ineqs[i], l) == 0 for l in gens.lin)
        )
    )
    canon = canonical_generators(gens.points, gens.rays, gens.lin)
    if canon.points:
        base = canon.points[0]
        dirs = [sub(p, base) for p in canon.points[1:]] + list(canon.rays) + list(canon.lin)
        dirs = [d for d in dirs if not is_zero_vec(d)]
        from .linalg import rank

        dim = rank(tuple(dirs)) if dirs else 0
    else:
        from .linalg import rank

        dirs = list(canon.rays) + list(canon.lin)
        dim = rank(tuple(dirs)) if dirs else 0
    return Face(active, dim, canon)


def psi(v: VlpInstance, dual_face: Face, upper: HRep | None = None) -> Face:
    """Duality map: intersect the upper image with one coupling equation per
    generator of the dual face."""
    if upper is None:
        upper = upper_image_hrep(v)
    eqs: list[tuple[Vec, Fraction]] = []
    for p in dual_face.gens.points:
        eqs.append(_phi_y_equation(p, v.c))
    for r in dual_face.gens.rays:
        eqs.append(_phi_y_linear_part(r, v.c))
    for l in dual_face.gens.lin:
        eqs.append(_phi_y_linear_part(l, v.c))
    return _cut_face(upper, eqs)


def psi_inverse(v: VlpInstance, primal_face: Face, lower: HRep | None = None) -> Face:
    if lower is None:
        lower = lower_image_hrep(v)
    eqs: list[tuple[Vec, Fraction]] = []
    for p in primal_face.gens.points:
        eqs.append(_phi_w_equation(p, v.c))
    for r in primal_face.gens.rays:
        eqs.append(_phi_w_linear_part(r, v.c))
    for l in primal_face.gens.lin:
        eqs.append(_phi_w_linear_part(l, v.c))
    return _cut_face(lower, eqs)


# ---------------------------------------------------------------------------
# the homogenisation and orthogonal-face maps
# ---------------------------------------------------------------------------


def phi_map(face: Face, cone_hrep: HRep) -> Face:
    """Lift a face of a polyhedron to the corresponding face of its
    homogenisation (a cone given by `cone_hrep`)."""
    if face.dim < 0:
        raise ValueError("the empty face does not homogenise")
    rays = tuple(p + (ONE,) for p in face.gens.points) + tuple(
        r + (ZERO,) for r in face.gens.rays
    )
    lin = tuple(l + (ZERO,) for l in face.gens.lin)
    origin = (zeros(cone_hrep.dim),)
    return _face_of(cone_hrep, GeneratorRep(origin, rays, lin))


def phi_inverse(face: Face, poly_hrep: HRep) -> Face:
    """Dehomogenise: points at level one, rays and lineality at level zero.

    Precondition: the cone face is not contained in the level-zero slab.
    """
    d = poly_hrep.dim
    points, rays = [], []
    for r in face.gens.rays:
        if r[d] > 0:
            points.append(scale(r[:d], ONE / r[d]))
        else:
            rays.append(r[:d])
    lin = []
    for l in face.gens.lin:
        if l[d] != 0:
            raise ValueError("cone-face lineality tilts into the level coordinate")
        lin.append(l[:d])
    if not points:
        raise ValueError("face lies in the recession slab; it has no level-one part")
    return _face_of(poly_hrep, GeneratorRep(tuple(points), tuple(rays), tuple(lin)))


def _cone_face_gens(face: Face) -> Mat:
    return tuple(face.gens.rays) + tuple(face.gens.lin) + tuple(neg(l) for l in face.gens.lin)


def gamma_map(face: Face, polar_hrep: HRep) -> Face:
    """Orthogonal face of the polar cone: all polar members vanishing on the
    given face (its generators suffice)."""
    eqs = tuple(g for g in face.gens.rays) + tuple(face.gens.lin)
    cut = polar_hrep.with_extra_eqs(eqs, (ZERO,) * len(eqs))
    gens = dd_hull(cut)
    return _face_of(polar_hrep, gens)


def gamma_inverse(face: Face, cone_hrep: HRep) -> Face:
    return gamma_map(face, cone_hrep)


def polar_cone_hrep(cone_hrep: HRep) -> HRep:
    """Canonical H-rep of the polar of a cone, from its generators."""
    gens = dd_hull(cone_hrep)
    rows = tuple(neg(r) for r in gens.rays)
    eqs = tuple(gens.lin)
    from .polyhedra import canonical_hrep

    return canonical_hrep(HRep.cone(rows, cone_hrep.dim, eqs))


# ---------------------------------------------------------------------------
# minimal / maximal proper faces
# ---------------------------------------------------------------------------


def _proper(faces) -> list[Face]:
    top = max(f.dim for f in faces)
    return [f for f in faces if f.dim < top or f.active]


def _face_max_step(hrep: HRep, face: Face, direction: Vec) -> Fraction | None:
    """max{t : y in face, y + t*direction in the polyhedron}; None if unbounded."""
    d = hrep.dim
    rows: list[Vec] = []
    rhs: list[Fraction] = []
    kinds: list[str] = []
    for i, (row, r) in enumerate(zip(hrep.ineqs, hrep.ineq_rhs)):
        if i in face.active:
            rows.append(row + (ZERO,))
            rhs.append(r)
            kinds.append(lp.EQ)
        else:
            rows.append(row + (ZERO,))
            rhs.append(r)
            kinds.append(lp.GE)
    for row, r in zip(hrep.eqs, hrep.eq_rhs):
        rows.append(row + (ZERO,))
        rhs.append(r)
        kinds.append(lp.EQ)
    # shifted copy: y + t d must satisfy the full H-rep
    for row, r in zip(hrep.ineqs, hrep.ineq_rhs):
        rows.append(row + (dot(row, direction),))
        rhs.append(r)
        kinds.append(lp.GE)
    for row, r in zip(hrep.eqs, hrep.eq_rhs):
        rows.append(row + (dot(row, direction),))
        rhs.append(r)
        kinds.append(lp.EQ)
    obj = zeros(d) + (ONE,)
    out = lp.lp_solve(
        lp.LinearProgram(obj, tuple(rows), vec(rhs), tuple(kinds), (lp.FREE,) * (d + 1))
    )
    if out.status == "unbounded":
        return None
    assert out.optimal
    return out.value


def r_minimal_faces(v: VlpInstance, upper: HRep | None = None, faces=None) -> tuple[Face, ...]:
    """Proper faces of the upper image every point of which is minimal along
    the objective-cone ray; decided by one LP per face."""
    if upper is None:
        upper = upper_image_hrep(v)
    if faces is None:
        faces = face_lattice(upper)
    pc = v.p_c
    out = []
    for f in _proper(faces):
        step = _face_max_step(upper, f, neg(pc))
        if step == 0:
            out.append(f)
    return tuple(sorted(out, key=lambda f: (f.dim, f.active)))


def r_star_maximal_faces(v: VlpInstance, lower: HRep | None = None, faces=None) -> tuple[Face, ...]:
    if lower is None:
        lower = lower_image_hrep(v)
    if faces is None:
        faces = face_lattice(lower)
    e_q = unit(v.q, v.q - 1)
    out = []
    for f in _proper(faces):
        step = _face_max_step(lower, f, e_q)
        if step == 0:
            out.append(f)
    return tuple(sorted(out, key=lambda f: (f.dim, f.active)))


def r_minimal_via_polar(v: VlpInstance, upper: HRep, faces, cones=None) -> tuple[Face, ...]:
    """Independent route: a proper face is minimal iff the orthogonal face of
    the polar cone contains a direction pairing negatively with c."""
    k_hrep, kstar_hrep = cones if cones is not None else _cone_pair(v)
    out = []
    for f in _proper(faces):
        lifted = phi_map(f, k_hrep)
        g = gamma_map(lifted, kstar_hrep)
        gens = _cone_face_gens(g)
        if any(dot(v.c, w) < 0 for w in gens):
            out.append(f)
    return tuple(sorted(out, key=lambda f: (f.dim, f.active)))


def r_star_maximal_via_polar(v: VlpInstance, lower: HRep, faces, cones=None) -> tuple[Face, ...]:
    """Mirror route through the transformed homogenised lower image."""
    k_hrep, kstar_hrep = cones if cones is not None else _cone_pair(v)
    tm = transform_m(v.c)
    q = v.q
    out = []
    for f in _proper(faces):
        lifted = _transformed_dual_face(f, tm.m, kstar_hrep)
        g = gamma_map(lifted, k_hrep)
        gens = _cone_face_gens(g)
        # c* = (0,...,0,-1): negative pairing means positive last coordinate
        if any(w[q] > 0 for w in gens):
            out.append(f)
    return tuple(sorted(out, key=lambda f: (f.dim, f.active)))


def _transformed_dual_face(face: Face, m: Mat, kstar_hrep: HRep) -> Face:
    rays = tuple(mat_vec(m, p + (ONE,)) for p in face.gens.points) + tuple(
        mat_vec(m, r + (ZERO,)) for r in face.gens.rays
    )
    lin = tuple(mat_vec(m, l + (ZERO,)) for l in face.gens.lin)
    origin = (zeros(kstar_hrep.dim),)
    return _face_of(kstar_hrep, GeneratorRep(origin, rays, lin))


def _cone_pair(v: VlpInstance) -> tuple[HRep, HRep]:
    k_hrep = projected_hrep_canonical(build_gh(v))
    return k_hrep, polar_cone_hrep(k_hrep)


def psi_factored(v: VlpInstance, dual_face: Face, upper: HRep, tm=None, cones=None) -> Face:
    """The factored duality map: homogenise, transform, take the orthogonal
    face of the polar pair, dehomogenise."""
    if tm is None:
        tm = transform_m(v.c)
    k_hrep, kstar_hrep = cones if cones is not None else _cone_pair(v)
    lifted = _transformed_dual_face(dual_face, tm.m, kstar_hrep)
    pulled = gamma_map(lifted, k_hrep)
    return phi_inverse(pulled, upper)


# ---------------------------------------------------------------------------
# the full verification report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FacePair:
    primal: Face
    dual: Face


@dataclass(frozen=True)
class DualityReport:
    pairs: tuple[FacePair, ...]
    q: int
    bijection_ok: bool
    inverse_ok: bool
    inclusion_ok: bool
    dim_ok: bool
    factorization_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.bijection_ok
            and self.inverse_ok
            and self.inclusion_ok
            and self.dim_ok
            and self.factorization_ok
        )


def verify_geometric_duality(v: VlpInstance) -> DualityReport:
    upper = upper_image_hrep(v)
    lower = lower_image_hrep(v)
    upper_faces = face_lattice(upper)
    lower_faces = face_lattice(lower)

    cones = _cone_pair(v)
    minimal = r_minimal_faces(v, upper, upper_faces)
    maximal = r_star_maximal_faces(v, lower, lower_faces)
    minimal_polar = r_minimal_via_polar(v, upper, upper_faces, cones)
    maximal_polar = r_star_maximal_via_polar(v, lower, lower_faces, cones)
    if tuple(f.active for f in minimal) != tuple(f.active for f in minimal_polar):
        raise DualityError("minimal-face characterisations disagree")
    if tuple(f.active for f in maximal) != tuple(f.active for f in maximal_polar):
        raise DualityError("maximal-face characterisations disagree")

    tm = transform_m(v.c)
    pairs = []
    images = {}
    for f_star in maximal:
        image = psi(v, f_star, upper)
        if image.dim < 0:
            raise DualityError(f"duality map sent a maximal face to the empty set: {f_star}")
        images[f_star.active] = image
        pairs.append(FacePair(image, f_star))

    minimal_actives = {f.active for f in minimal}
    image_actives = [f.active for f in images.values()]
    bijection_ok = (
        len(set(image_actives)) == len(image_actives)
        and set(image_actives) == minimal_actives
    )

    inverse_ok = True
    for f_star in maximal:
        back = psi_inverse(v, images[f_star.active], lower)
        if back.active != f_star.active:
            inverse_ok = False
    for f in minimal:
        pre = psi_inverse(v, f, lower)
        there = psi(v, pre, upper)
        if there.active != f.active:
            inverse_ok = False

    inclusion_ok = True
    for fa in maximal:
        for fb in maximal:
            sub_rel = set(fb.active) <= set(fa.active)  # fa included in fb
            sup_rel = set(images[fa.active].active) <= set(images[fb.active].active)
            if sub_rel != sup_rel:
                inclusion_ok = False

    dim_ok = all(p.dual.dim + p.primal.dim == v.q - 1 for p in pairs)

    factorization_ok = True
    for f_star in maximal:
        direct = images[f_star.active]
        factored = psi_factored(v, f_star, upper, tm, cones)
        if factored.active != direct.active:
            factorization_ok = False

    report = DualityReport(
        tuple(sorted(pairs, key=lambda p: (p.dual.dim, p.dual.active))),
        v.q,
        bijection_ok,
        inverse_ok,
        inclusion_ok,
        dim_ok,
        factorization_ok,
    )
    if not report.ok:
        raise DualityError(
            "geometric duality verification failed: "
            f"bijection={bijection_ok} inverse={inverse_ok} "
            f"inclusion={inclusion_ok} dims={dim_ok} factorization={factorization_ok}"
        )
    return report
