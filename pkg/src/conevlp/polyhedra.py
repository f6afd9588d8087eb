"""Polyhedral computations in exact arithmetic.

The module provides the geometric toolbox shared by the cone-projection
solvers and the duality machinery:

* double description (extreme rays + lineality) for cones given by
  inequalities/equations,
* homogenisation-based vertex/ray enumeration for general polyhedra,
* Fourier-Motzkin elimination with LP-certified redundancy removal,
* a canonical H-representation (affine hull in RREF form, facet
  inequalities reduced modulo the hull, normalised and sorted) under which
  two descriptions are equal iff they describe the same set,
* face lattices at desk scale.

All generator outputs are canonical: lineality bases are RREF rows, rays
and points are projected onto the orthogonal complement of the lineality,
rays are scaled to a +-1 leading entry, everything is sorted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import lp
from .linalg import (
    Mat,
    Vec,
    ZERO,
    ONE,
    add,
    dot,
    identity,
    is_zero_vec,
    neg,
    normalize_ray,
    null_space_basis,
    project_off,
    rank,
    rref,
    scale,
    span_basis,
    sub,
    vec,
)

MAX_LATTICE_INEQS = 12
MAX_LATTICE_DIM = 5


class DeskScaleError(Exception):
    """Raised when a face-lattice request exceeds the supported size."""


class EmptyPolyhedronError(Exception):
    """Raised when an operation needs a nonempty polyhedron."""


@dataclass(frozen=True)
class HRep:
    """{x : ineqs[i] . x >= ineq_rhs[i], eqs[j] . x = eq_rhs[j]} in R^dim."""

    ineqs: Mat
    ineq_rhs: Vec
    eqs: Mat
    eq_rhs: Vec
    dim: int

    @staticmethod
    def cone(rows: Mat, dim: int, eqs: Mat = ()) -> "HRep":
        return HRep(tuple(rows), (ZERO,) * len(rows), tuple(eqs), (ZERO,) * len(eqs), dim)

    @staticmethod
    def polyhedron(ineqs: Mat, ineq_rhs: Vec, dim: int, eqs: Mat = (), eq_rhs: Vec = ()) -> "HRep":
        return HRep(tuple(ineqs), tuple(ineq_rhs), tuple(eqs), tuple(eq_rhs), dim)

    def with_extra_eqs(self, eqs: Mat, eq_rhs: Vec) -> "HRep":
        return HRep(self.ineqs, self.ineq_rhs, self.eqs + tuple(eqs), self.eq_rhs + tuple(eq_rhs), self.dim)

    def is_homogeneous(self) -> bool:
        return all(r == 0 for r in self.ineq_rhs) and all(r == 0 for r in self.eq_rhs)


@dataclass(frozen=True)
class GeneratorRep:
    """conv(points) + cone(rays) + span(lin); for cones points == (origin,)."""

    points: Mat
    rays: Mat
    lin: Mat


@dataclass(frozen=True)
class Face:
    """A nonempty face: active inequality indices, dimension, generators."""

    active: tuple[int, ...]
    dim: int
    gens: GeneratorRep


def canonical_generators(points: Mat, rays: Mat, lin: Mat) -> GeneratorRep:
    lin_basis = span_basis(lin)
    pts = sorted({project_off(p, lin_basis) for p in points})
    rys = set()
    for r in rays:
        pr = project_off(r, lin_basis)
        if not is_zero_vec(pr):
            rys.add(normalize_ray(pr))
    return GeneratorRep(tuple(pts), tuple(sorted(rys)), lin_basis)


# ---------------------------------------------------------------------------
# double description
# ---------------------------------------------------------------------------


def dd_cone(ineq_rows: Mat, eq_rows: Mat, dim: int) -> tuple[Mat, Mat]:
    """Extreme rays and lineality basis of {y : A y >= 0, E y = 0}.

    The pair (rays, lineality) is maintained so that the rays are extreme
    modulo the current lineality after every step; adjacency is decided by
    the combinatorial zero-set criterion, which is exact for minimal pairs.
    """
    if dim == 0:
        return (), ()
    lin: list[Vec] = list(identity(dim))
    rays: list[Vec] = []
    processed: list[Vec] = []

    def tight(v: Vec) -> frozenset[int]:
        return frozenset(i for i, row in enumerate(processed) if dot(row, v) == 0)

    def combine(a: Vec, keep_plus: bool) -> None:
        vals = [dot(a, r) for r in rays]
        tights = [tight(r) for r in rays]
        plus = [i for i, v in enumerate(vals) if v > 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        minus = [i for i, v in enumerate(vals) if v < 0]
        new: list[Vec] = []
        for ip in plus:
            for im in minus:
                common = tights[ip] & tights[im]
                if any(
                    k != ip and k != im and common <= tights[k]
                    for k in range(len(rays))
                ):
                    continue
                w = sub(scale(rays[im], vals[ip]), scale(rays[ip], vals[im]))
                new.append(normalize_ray(w))
        kept = [rays[i] for i in (plus if keep_plus else [])] + [rays[i] for i in zero]
        rays[:] = kept + new

    for e in eq_rows:
        if is_zero_vec(e):
            continue
        piv = next((l for l in lin if dot(e, l) != 0), None)
        if piv is not None:
            d = dot(e, piv)
            lin[:] = [sub(l, scale(piv, dot(e, l) / d)) for l in lin if l is not piv]
            rays[:] = [normalize_ray(sub(r, scale(piv, dot(e, r) / d))) for r in rays]
        else:
            combine(e, keep_plus=False)

    for a in ineq_rows:
        if is_zero_vec(a):
            continue
        piv = next((l for l in lin if dot(a, l) != 0), None)
        if piv is not None:
            z = piv if dot(a, piv) > 0 else neg(piv)
            az = dot(a, z)
            lin[:] = [sub(l, scale(z, dot(a, l) / az)) for l in lin if l is not piv]
            rays[:] = [normalize_ray(sub(r, scale(z, dot(a, r) / az))) for r in rays]
            rays.append(normalize_ray(z))
        else:
            combine(a, keep_plus=True)
        processed.append(a)

    lin_basis = span_basis(tuple(lin))
    out = set()
    for r in rays:
        pr = project_off(r, lin_basis)
        if not is_zero_vec(pr):
            out.add(normalize_ray(pr))
    return tuple(sorted(out)), lin_basis


def dd_hull(hrep: HRep) -> GeneratorRep:
    """Vertices, extreme rays and lineality of a polyhedron (homogenisation).

    Raises EmptyPolyhedronError when the polyhedron is empty.
    """
    d = hrep.dim
    hom_ineqs = [row + (-r,) for row, r in zip(hrep.ineqs, hrep.ineq_rhs)]
    hom_ineqs.append(tuple([ZERO] * d) + (ONE,))  # homogenising coordinate >= 0
    hom_eqs = [row + (-r,) for row, r in zip(hrep.eqs, hrep.eq_rhs)]
    rays, lin = dd_cone(tuple(hom_ineqs), tuple(hom_eqs), d + 1)
    # lineality never tilts into the homogenising coordinate
    assert all(l[d] == 0 for l in lin)
    points, rec = [], []
    for r in rays:
        if r[d] > 0:
            points.append(scale(r[:d], ONE / r[d]))
        else:
            rec.append(r[:d])
    if not points:
        raise EmptyPolyhedronError("polyhedron has no points")
    return canonical_generators(tuple(points), tuple(rec), tuple(l[:d] for l in lin))


def is_empty(hrep: HRep) -> bool:
    rows = hrep.ineqs + hrep.eqs
    rhs = hrep.ineq_rhs + hrep.eq_rhs
    kinds = (lp.GE,) * len(hrep.ineqs) + (lp.EQ,) * len(hrep.eqs)
    return lp.feasible_point(rows, rhs, kinds, (lp.FREE,) * hrep.dim) is None


def contains(hrep: HRep, x: Vec) -> bool:
    return all(dot(row, x) >= r for row, r in zip(hrep.ineqs, hrep.ineq_rhs)) and all(
        dot(row, x) == r for row, r in zip(hrep.eqs, hrep.eq_rhs)
    )


def generators_to_hrep(gens: GeneratorRep, dim: int) -> HRep:
    """Canonical H-rep of conv(points)+cone(rays)+span(lin) (points required)."""
    if not gens.points:
        raise EmptyPolyhedronError("generator description has no points")
    w_ineqs = [p + (ONE,) for p in gens.points] + [r + (ZERO,) for r in gens.rays]
    w_eqs = [l + (ZERO,) for l in gens.lin]
    # generators of the dual cone are the facets of the homogenisation
    drays, dlin = dd_cone(tuple(w_ineqs), tuple(w_eqs), dim + 1)
    ineqs, ineq_rhs, eqs, eq_rhs = [], [], [], []
    for row in drays:
        a, a0 = row[:dim], row[dim]
        if is_zero_vec(a):
            continue  # 0 . y >= -a0 with a0 >= 0 is vacuous here
        ineqs.append(a)
        ineq_rhs.append(-a0)
    for row in dlin:
        a, a0 = row[:dim], row[dim]
        if is_zero_vec(a):
            continue
        eqs.append(a)
        eq_rhs.append(-a0)
    return canonical_hrep(HRep.polyhedron(tuple(ineqs), tuple(ineq_rhs), dim, tuple(eqs), tuple(eq_rhs)))


# ---------------------------------------------------------------------------
# canonical H-representation
# ---------------------------------------------------------------------------


def _maximize(hrep: HRep, obj: Vec) -> lp.LpOutcome:
    rows = hrep.ineqs + hrep.eqs
    rhs = hrep.ineq_rhs + hrep.eq_rhs
    kinds = (lp.GE,) * len(hrep.ineqs) + (lp.EQ,) * len(hrep.eqs)
    return lp.lp_solve(
        lp.LinearProgram(obj, rows, rhs, kinds, (lp.FREE,) * hrep.dim)
    )


def _row_is_redundant(others: HRep, row: Vec, rhs: Fraction) -> bool:
    """True iff min row.x over `others` stays >= rhs (the row cuts nothing)."""
    res = _maximize(others, neg(row))
    return res.optimal and -res.value >= rhs


def implicit_equality_rows(hrep: HRep) -> tuple[int, ...]:
    """Indices of inequality rows satisfied with equality on the whole set."""
    if not hrep.ineqs:
        return ()
    slack = lp.max_min_slack(hrep.ineqs, hrep.ineq_rhs, hrep.eqs, hrep.eq_rhs, hrep.dim)
    if slack is None or slack[0] < 0:
        raise EmptyPolyhedronError("implicit equalities of an empty set")
    if slack[0] > 0:
        return ()
    out = []
    for i, (row, r) in enumerate(zip(hrep.ineqs, hrep.ineq_rhs)):
        res = _maximize(hrep, row)
        if res.optimal and res.value == r:
            out.append(i)
    return tuple(out)


def canonical_hrep(hrep: HRep) -> HRep:
    """Unique H-rep of a nonempty polyhedron.

    Affine-hull equations in RREF form; every remaining inequality is a
    facet, reduced modulo the hull, scaled to a +-1 leading coefficient and
    sorted.  Two H-reps of the same set canonicalise identically.
    """
    implicit = set(implicit_equality_rows(hrep))
    eq_rows = [row + (r,) for row, r in zip(hrep.eqs, hrep.eq_rhs)]
    eq_rows += [hrep.ineqs[i] + (hrep.ineq_rhs[i],) for i in implicit]
    d = hrep.dim
    if eq_rows:
        red, pivots, rk = rref(tuple(eq_rows))
        eq_canon = red[:rk]
        if d in pivots:
            raise EmptyPolyhedronError("inconsistent equality system")
    else:
        eq_canon, pivots = (), ()

    seen = set()
    reduced: list[tuple[Vec, Fraction]] = []
    for i, (row, r) in enumerate(zip(hrep.ineqs, hrep.ineq_rhs)):
        if i in implicit:
            continue
        combo = row + (r,)
        for erow, p in zip(eq_canon, pivots):
            if combo[p] != 0:
                f = combo[p]
                combo = tuple(x - f * y for x, y in zip(combo, erow))
        a, rhs_v = combo[:d], combo[d]
        if is_zero_vec(a):
            continue  # 0 >= rhs_v with rhs_v <= 0: vacuous on a nonempty set
        lead = next(x for x in a if x != 0)
        f = ONE / abs(lead)
        key = (scale(a, f), rhs_v * f)
        if key not in seen:
            seen.add(key)
            reduced.append(key)

    eqs = tuple(r[:d] for r in eq_canon)
    eq_rhs = tuple(r[d] for r in eq_canon)

    # redundancy: a non-facet inequality can always be dropped
    kept = list(reduced)
    changed = True
    while changed:
        changed = False
        for i in range(len(kept)):
            others = kept[:i] + kept[i + 1 :]
            sub_h = HRep.polyhedron(
                tuple(a for a, _ in others), tuple(r for _, r in others), d, eqs, eq_rhs
            )
            a, r = kept[i]
            if _row_is_redundant(sub_h, a, r):
                del kept[i]
                changed = True
                break
    kept.sort()
    return HRep.polyhedron(tuple(a for a, _ in kept), tuple(r for _, r in kept), d, eqs, eq_rhs)


# ---------------------------------------------------------------------------
# Fourier-Motzkin elimination
# ---------------------------------------------------------------------------


def _drop_redundant_rows(rows: list[tuple[Vec, Fraction]], eqs, eq_rhs, d) -> list[tuple[Vec, Fraction]]:
    normed = []
    seen = set()
    for a, r in rows:
        if is_zero_vec(a):
            continue
        lead = next(x for x in a if x != 0)
        f = ONE / abs(lead)
        key = (scale(a, f), r * f)
        if key not in seen:
            seen.add(key)
            normed.append(key)
    kept = list(normed)
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1 :]
        sub_h = HRep.polyhedron(
            tuple(a for a, _ in others), tuple(r for _, r in others), d, tuple(eqs), tuple(eq_rhs)
        )
        a, r = kept[i]
        if _row_is_redundant(sub_h, a, r):
            del kept[i]
        else:
            i += 1
    return kept


def fm_eliminate(hrep: HRep, keep: int) -> HRep:
    """Project onto the first `keep` coordinates.

    Trailing variables are eliminated one at a time (last first): by
    substitution when an equation mentions the variable, otherwise by
    pairing opposite-sign inequalities.  After every step the inequality
    list is pruned with LP redundancy certificates to tame growth.
    """
    ineqs = [(row, r) for row, r in zip(hrep.ineqs, hrep.ineq_rhs)]
    eqs = [(row, r) for row, r in zip(hrep.eqs, hrep.eq_rhs)]
    d = hrep.dim
    while d > keep:
        col = d - 1
        pivot_idx = next((k for k, (row, _) in enumerate(eqs) if row[col] != 0), None)
        if pivot_idx is not None:
            prow, prhs = eqs.pop(pivot_idx)
            pc = prow[col]

            def subst(row: Vec, r: Fraction) -> tuple[Vec, Fraction]:
                f = row[col] / pc
                return (
                    tuple(x - f * y for x, y in zip(row[:col], prow[:col])),
                    r - f * prhs,
                )

            ineqs = [subst(row, r) for row, r in ineqs]
            eqs = [subst(row, r) for row, r in eqs]
        else:
            plus = [(row, r) for row, r in ineqs if row[col] > 0]
            minus = [(row, r) for row, r in ineqs if row[col] < 0]
            zero = [(row[:col], r) for row, r in ineqs if row[col] == 0]
            combos = []
            for prow, pr in plus:
                for nrow, nr in minus:
                    pc, nc = prow[col], nrow[col]
                    a = tuple(-nc * x + pc * y for x, y in zip(prow[:col], nrow[:col]))
                    combos.append((a, -nc * pr + pc * nr))
            ineqs = zero + combos
            eqs = [(row[:col], r) for row, r in eqs]
        d = col
        # consistency of the shrunken equality block
        ineqs = [(row, r) for row, r in ineqs]
        ineqs = _drop_redundant_rows(
            ineqs, [row for row, _ in eqs], [r for _, r in eqs], d
        )
    return HRep.polyhedron(
        tuple(a for a, _ in ineqs),
        tuple(r for _, r in ineqs),
        keep,
        tuple(row for row, _ in eqs),
        tuple(r for _, r in eqs),
    )


# ---------------------------------------------------------------------------
# face lattice
# ---------------------------------------------------------------------------


def _face_dim(points: Mat, rays: Mat, lin: Mat) -> int:
    base = points[0]
    dirs = [sub(p, base) for p in points[1:]] + list(rays) + list(lin)
    dirs = [v for v in dirs if not is_zero_vec(v)]
    if not dirs:
        return 0
    return rank(tuple(dirs))


def face_lattice(hrep: HRep) -> tuple[Face, ...]:
    """All nonempty faces of a canonical H-rep, the improper face included.

    Enumerates closed active sets: the closure of an index set A is the set
    of inequalities tight on every generator incident to all of A.  Desk
    scale only.
    """
    if len(hrep.ineqs) > MAX_LATTICE_INEQS or hrep.dim > MAX_LATTICE_DIM:
        raise DeskScaleError(
            f"face lattice limited to {MAX_LATTICE_INEQS} inequalities in dimension {MAX_LATTICE_DIM}"
        )
    gens = dd_hull(hrep)
    pt_active = [
        frozenset(i for i, (row, r) in enumerate(zip(hrep.ineqs, hrep.ineq_rhs)) if dot(row, p) == r)
        for p in gens.points
    ]
    ray_active = [
        frozenset(i for i, row in enumerate(hrep.ineqs) if dot(row, r) == 0)
        for r in gens.rays
    ]

    def closure(active: frozenset[int]) -> tuple[frozenset[int], tuple[int, ...], tuple[int, ...]] | None:
        pts = tuple(k for k, a in enumerate(pt_active) if active <= a)
        if not pts:
            return None  # every nonempty face contains a minimal face
        rys = tuple(k for k, a in enumerate(ray_active) if active <= a)
        closed = frozenset(range(len(hrep.ineqs)))
        for k in pts:
            closed &= pt_active[k]
        for k in rys:
            closed &= ray_active[k]
        return closed, pts, rys

    faces: dict[frozenset[int], Face] = {}
    start = closure(frozenset())
    assert start is not None
    queue = [start]
    while queue:
        closed, pts, rys = queue.pop()
        if closed in faces:
            continue
        sub_points = tuple(gens.points[k] for k in pts)
        sub_rays = tuple(gens.rays[k] for k in rys)
        faces[closed] = Face(
            tuple(sorted(closed)),
            _face_dim(sub_points, sub_rays, gens.lin),
            GeneratorRep(sub_points, sub_rays, gens.lin),
        )
        for i in range(len(hrep.ineqs)):
            if i not in closed:
                child = closure(closed | {i})
                if child is not None and child[0] not in faces:
                    queue.append(child)
    return tuple(sorted(faces.values(), key=lambda f: (f.dim, f.active)))


def face_from_generators(hrep: HRep, gens: GeneratorRep) -> Face:
    """Identify the face of a canonical H-rep spanned by given generators."""
    active = set(range(len(hrep.ineqs)))
    for p in gens.points:
        active &= {i for i in active if dot(hrep.ineqs[i], p) == hrep.ineq_rhs[i]}
    for r in gens.rays:
        active &= {i for i in active if dot(hrep.ineqs[i], r) == 0}
    for l in gens.lin:
        active &= {i for i in active if dot(hrep.ineqs[i], l) == 0}
    canon = canonical_generators(gens.points, gens.rays, gens.lin)
    return Face(tuple(sorted(active)), _face_dim(canon.points or ((ZERO,) * hrep.dim,), canon.rays, canon.lin), canon)


# ---------------------------------------------------------------------------
# brute-force oracles (used as independent cross-checks)
# ---------------------------------------------------------------------------


def brute_force_extreme_rays(ineq_rows: Mat, eq_rows: Mat, dim: int) -> Mat:
    """Extreme rays of a pointed cone by tight-subset enumeration.

    For every subset of inequality rows whose span together with the
    equations has rank dim-1, the one-dimensional kernel yields up to one
    feasible direction.  Exponential; test-sized cones only.
    """
    rows = [r for r in ineq_rows if not is_zero_vec(r)]
    eqs = [r for r in eq_rows if not is_zero_vec(r)]
    found = set()
    for size in range(0, len(rows) + 1):
        for subset in combinations(range(len(rows)), size):
            system = tuple(eqs) + tuple(rows[i] for i in subset)
            if system and rank(system) != dim - 1:
                continue
            if not system and dim != 1:
                continue
            kern = null_space_basis(system, dim) if system else identity(dim)
            if len(kern) != 1:
                continue
            v = kern[0]
            for cand in (v, neg(v)):
                if all(dot(r, cand) >= 0 for r in rows) and all(dot(e, cand) == 0 for e in eqs):
                    found.add(normalize_ray(cand))
    # drop rays that are nonnegative combinations of the others
    out = []
    rays = sorted(found)
    for i, r in enumerate(rays):
        others = tuple(x for j, x in enumerate(rays) if j != i)
        if not others or not _in_cone(r, others):
            out.append(r)
    return tuple(out)


def _in_cone(v: Vec, gens: Mat) -> bool:
    cols = tuple(gens)
    n = len(cols)
    rows = tuple(tuple(cols[j][i] for j in range(n)) for i in range(len(v)))
    return (
        lp.feasible_point(rows, v, (lp.EQ,) * len(v), (lp.NONNEG,) * n) is not None
    )


def in_cone_of(v: Vec, gens: Mat) -> bool:
    """Exact membership v in cone(gens) via one feasibility LP."""
    if is_zero_vec(v):
        return True
    if not gens:
        return False
    return _in_cone(v, gens)
