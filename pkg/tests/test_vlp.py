from fractions import Fraction

import pytest

from conevlp.linalg import dot, identity, mat, mat_vec, neg, unit, vec
from conevlp.polyhedra import canonical_hrep, dd_hull
from conevlp.projection import projected_hrep_canonical, solve_p_star
from conevlp.vlp import (
    InfeasibleProblemError,
    VlpValidationError,
    build_gh,
    cone_implicit_rows,
    homogenize_hrep,
    in_relative_interior_of_cone,
    lower_image_hrep,
    make_instance,
    normalize_c,
    proj_p,
    proj_p_star,
    transform_m,
    upper_image_hrep,
)

from conftest import load_vlp


def test_normalize_c_identity():
    z = identity(2)
    perm, scale, c = normalize_c(z, vec([1, 1]))
    assert perm == (0, 1) and scale == 1 and c == vec([1, 1, 0])


def test_normalize_c_swaps_for_flat_cone():
    # C = {y : y1 >= 0, y2 = 0}; the direction (1, 0) must move into the
    # last slot by a coordinate swap
    z = mat([[1, 0, 0], [0, 1, -1]])
    perm, scale, c = normalize_c(z, vec([1, 0]))
    assert perm == (1, 0) and scale == 1
    assert c == vec([0, 1, 0])


def test_normalize_c_scales():
    z = identity(2)
    perm, scale, c = normalize_c(z, vec([0, 3]))
    assert perm == (0, 1) and scale == Fraction(1, 3) and c == vec([0, 1, 0])


def test_normalize_c_rejections():
    z = identity(2)
    with pytest.raises(VlpValidationError):
        normalize_c(z, vec([0, 0]))
    with pytest.raises(VlpValidationError):
        normalize_c(z, vec([-1, 1]))  # outside ri C
    flipped = mat([[-1, 0], [0, -1]])
    with pytest.raises(VlpValidationError):
        normalize_c(flipped, vec([-1, -1]))  # no positive entry


def test_instance_validation():
    with pytest.raises(VlpValidationError):
        make_instance([[1]], [0], [[1]], [[1]], [1])  # q = 1
    with pytest.raises(VlpValidationError):
        # cone with lineality: Z^T y >= 0 with a single row
        make_instance([[1, 0]], [0], [[1, 0], [0, 1]], [[1], [0]], [1, 0])
    with pytest.raises(InfeasibleProblemError):
        make_instance([[1, 0], [-1, 0]], [1, 1], [[1, 0], [0, 1]], identity(2), [1, 1])


def test_build_gh_worked_instance(ex1):
    gh = build_gh(ex1)
    assert gh.g == mat([[2, 1], [1, 2], [1, 0], [0, 1], [-1, 0], [0, -1], [0, 0]])
    assert gh.h == mat(
        [
            [0, 0, -1],
            [0, 0, -1],
            [0, 0, 0],
            [0, 0, 0],
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
        ]
    )
    # the last row of H is the negated dual objective-cone direction
    assert gh.h[-1] == vec([0, 0, 1])


def test_build_gh_no_constraints():
    inst = make_instance([], [], [[1, 0], [0, 1]], identity(2), [1, 1])
    gh = build_gh(inst)
    assert len(gh.g) == 3  # r + 1 rows
    assert gh.h[-1] == vec([0, 0, 1])


def test_build_gh_single_objective_blocks():
    # n=1, q=2 sanity of block shapes
    inst = make_instance([[1]], [0], [[1], [0]], identity(2), [1, 1])
    gh = build_gh(inst)
    assert len(gh.g) == 1 + 2 + 1
    assert all(len(row) == 3 for row in gh.h)


def test_upper_image_worked_instance(ex1):
    up = upper_image_hrep(ex1)
    assert up.eqs == ()
    assert set(zip(up.ineqs, up.ineq_rhs)) == {
        (vec([1, 0]), Fraction(0)),
        (vec([0, 1]), Fraction(0)),
        (vec([1, Fraction(1, 2)]), Fraction(1, 2)),
        (vec([1, 2]), Fraction(1)),
    }


def test_upper_image_zero_objective_is_cone(ex1):
    inst = make_instance([[1, 0]], [0], [[0, 0], [0, 0]], identity(2), [1, 1])
    up = upper_image_hrep(inst)
    assert set(up.ineqs) == {vec([1, 0]), vec([0, 1])}
    assert set(up.ineq_rhs) == {Fraction(0)}


def test_upper_image_lineality(ex3):
    up = upper_image_hrep(ex3)
    assert up.ineqs == (vec([1, 1]),) and up.ineq_rhs == (Fraction(0),)


def test_lower_image_worked_instance(ex1):
    lo = lower_image_hrep(ex1)
    gens = dd_hull(lo)
    assert set(gens.points) == {
        vec([0, 0]),
        vec([Fraction(1, 3), Fraction(1, 3)]),
        vec([Fraction(2, 3), Fraction(1, 3)]),
        vec([1, 0]),
    }
    assert gens.rays == (vec([0, -1]),)
    assert len(lo.ineqs) == 5  # including the two vertical edges


def test_lower_image_capped_at_zero_when_rhs_vanishes():
    inst = make_instance([[1, 0]], [0], [[1, 0], [0, 1]], identity(2), [1, 1])
    lo = lower_image_hrep(inst)
    gens = dd_hull(lo)
    assert all(p[-1] == 0 for p in gens.points)
    assert all(r[-1] <= 0 for r in gens.rays)


def test_transform_m(ex1):
    tm = transform_m(ex1.c)
    assert tm.m == mat([[-1, 0, 0], [1, 0, -1], [0, 1, 0]])
    # closed form of the inverse action
    for w in (vec([1, 0, 0]), vec([0, 1, 0]), vec([0, 0, 1]), vec([2, -3, 5])):
        expect = (-w[0], w[2], -(dot(ex1.c, w)))
        assert mat_vec(tm.m_inv, w) == vec(expect)
    # the dual ordering ray maps onto the negated dual direction
    assert mat_vec(tm.m, vec([0, 1, 0])) == vec([0, 0, 1])


def test_projections():
    assert proj_p(vec([1, 2, 3])) == vec([1, 2])
    assert proj_p_star(vec([1, 2, 3])) == vec([1, 3])
    assert proj_p(vec([1, 1, 0])) == vec([1, 1])


def test_homogenisation_identity_on_corpus(vlp_corpus):
    for inst in vlp_corpus:
        up = upper_image_hrep(inst)
        lifted = canonical_hrep(homogenize_hrep(up))
        projected = projected_hrep_canonical(build_gh(inst))
        assert lifted == projected


def test_polar_generators_match_lifted_lower_image(vlp_corpus):
    from conevlp.linalg import normalize_ray, span_basis
    from conevlp.polyhedra import canonical_generators

    for inst in vlp_corpus:
        lo = lower_image_hrep(inst)
        tm = transform_m(inst.c)
        gens = dd_hull(lo)
        mapped_rays = [mat_vec(tm.m, p + (Fraction(1),)) for p in gens.points]
        mapped_rays += [mat_vec(tm.m, r + (Fraction(0),)) for r in gens.rays]
        mapped_lin = [mat_vec(tm.m, l + (Fraction(0),)) for l in gens.lin]
        expected = canonical_generators((), tuple(mapped_rays), tuple(mapped_lin))
        sol = solve_p_star(build_gh(inst))
        got = canonical_generators(
            (), tuple(w for _, w in sol.x_dir), tuple(w for _, w in sol.x_lin)
        )
        assert got == expected


def test_relative_minimality_matches_cone_minimality(vlp_corpus):
    """Point-level equivalence of relative minimality and ray minimality."""
    from conevlp import lp
    from conevlp.linalg import add, scale, sub

    for inst in vlp_corpus[:8]:
        up = upper_image_hrep(inst)
        gens = dd_hull(up)
        implicit = cone_implicit_rows(inst.z_mat)
        zt = tuple(zip(*inst.z_mat))
        samples = set(gens.points)
        pts = list(gens.points)
        for i, a in enumerate(pts):
            for b in pts[i + 1 :]:
                samples.add(scale(add(a, b), Fraction(1, 2)))
                samples.add(add(scale(a, Fraction(1, 3)), scale(b, Fraction(2, 3))))
        for p in pts:
            for r in gens.rays:
                samples.add(add(p, r))
                samples.add(add(p, scale(r, Fraction(2))))
            for l in gens.lin:
                samples.add(add(p, l))
                samples.add(sub(p, l))
        for y in sorted(samples)[:25]:
            ray_minimal = _ray_minimal(up, y, inst.p_c)
            rel_minimal = not _in_image_plus_ri_cone(up, inst, y, implicit)
            assert ray_minimal == rel_minimal


def _ray_minimal(up, y, pc):
    from conevlp import lp

    d = up.dim
    rows, rhs, kinds = [], [], []
    for row, r in zip(up.ineqs, up.ineq_rhs):
        rows.append((-dot(row, pc),))
        rhs.append(r - dot(row, y))
        kinds.append(lp.GE)
    for row, r in zip(up.eqs, up.eq_rhs):
        rows.append((-dot(row, pc),))
        rhs.append(r - dot(row, y))
        kinds.append(lp.EQ)
    out = lp.lp_solve(
        lp.LinearProgram(vec([1]), tuple(rows), vec(rhs), tuple(kinds), (lp.NONNEG,))
    )
    if out.status == "unbounded":
        return False
    return out.value == 0


def _in_image_plus_ri_cone(up, inst, y, implicit):
    """y in (upper image) + ri C via a strict-slack program over (z, s)."""
    from conevlp import lp

    q = inst.q
    zt = tuple(zip(*inst.z_mat))
    strict, strict_rhs, eqs, eq_rhs = [], [], [], []
    # z in the upper image (non-strict rows go in as strict-with-zero? no:
    # keep them as plain inequalities by pairing them with slack 0)
    rows, rhs, kinds = [], [], []
    width = q + 1  # z and the slack bound s
    for row, r in zip(up.ineqs, up.ineq_rhs):
        rows.append(tuple(row) + (Fraction(0),))
        rhs.append(r)
        kinds.append(lp.GE)
    for row, r in zip(up.eqs, up.eq_rhs):
        rows.append(tuple(row) + (Fraction(0),))
        rhs.append(r)
        kinds.append(lp.EQ)
    for i, zrow in enumerate(zt):
        coeffs = tuple(-x for x in zrow)
        if i in implicit:
            rows.append(coeffs + (Fraction(0),))
            rhs.append(-dot(vec(zrow), y))
            kinds.append(lp.EQ)
        else:
            rows.append(coeffs + (Fraction(-1),))
            rhs.append(-dot(vec(zrow), y))
            kinds.append(lp.GE)
    # s <= 1 and maximise s
    rows.append(tuple([Fraction(0)] * q) + (Fraction(-1),))
    rhs.append(Fraction(-1))
    kinds.append(lp.GE)
    obj = tuple([Fraction(0)] * q) + (Fraction(1),)
    out = lp.lp_solve(
        lp.LinearProgram(obj, tuple(rows), vec(rhs), tuple(kinds), (lp.FREE,) * width)
    )
    if not out.optimal:
        return False
    return out.value > 0
