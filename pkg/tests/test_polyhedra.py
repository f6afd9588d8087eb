from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conevlp import lp
from conevlp.linalg import dot, is_zero_vec, mat, vec
from conevlp.polyhedra import (
    DeskScaleError,
    EmptyPolyhedronError,
    GeneratorRep,
    HRep,
    brute_force_extreme_rays,
    canonical_hrep,
    dd_cone,
    dd_hull,
    face_lattice,
    fm_eliminate,
    generators_to_hrep,
    in_cone_of,
)

from conftest import random_cones
from helpers import feasible_in_cone_system


def square() -> HRep:
    return canonical_hrep(
        HRep.polyhedron(mat([[1, 0], [0, 1], [-1, 0], [0, -1]]), vec([0, 0, -1, -1]), 2)
    )


def test_dd_orthant():
    rays, lin = dd_cone(mat([[1, 0], [0, 1]]), (), 2)
    assert rays == (vec([0, 1]), vec([1, 0])) and lin == ()


def test_dd_half_plane():
    rays, lin = dd_cone(mat([[1, -1]]), (), 2)
    assert rays == (vec([1, -1]),)
    assert lin == (vec([1, 1]),)


def test_dd_subspace_and_zero():
    rays, lin = dd_cone((), (), 3)
    assert rays == () and len(lin) == 3
    rays, lin = dd_cone(mat([[1, 0], [-1, 0], [0, 1], [0, -1]]), (), 2)
    assert rays == () and lin == ()


def test_hull_square():
    gens = dd_hull(square())
    assert gens.points == (vec([0, 0]), vec([0, 1]), vec([1, 0]), vec([1, 1]))
    assert gens.rays == () and gens.lin == ()


def test_hull_empty():
    with pytest.raises(EmptyPolyhedronError):
        dd_hull(HRep.polyhedron(mat([[1], [-1]]), vec([1, 0]), 1))


def test_canonical_form_detects_implicit_equalities():
    # x >= 0 and -x >= 0 pin the first coordinate
    h = HRep.polyhedron(mat([[1, 0], [-1, 0], [0, 1]]), vec([0, 0, 0]), 2)
    canon = canonical_hrep(h)
    assert canon.eqs == (vec([1, 0]),) and canon.eq_rhs == (Fraction(0),)
    assert canon.ineqs == (vec([0, 1]),)


def test_canonical_form_is_representation_independent():
    a = HRep.polyhedron(
        mat([[2, 0], [0, 3], [-1, -1], [2, 1]]), vec([0, 0, -2, -1]), 2
    )
    b = HRep.polyhedron(
        mat([[1, 1], [0, 1], [1, 0], [-2, -2], [-3, -3]]),
        vec([-1, 0, 0, -4, -6]),
        2,
    )
    # same triangle described differently
    assert canonical_hrep(a) == canonical_hrep(b)


def test_generators_to_hrep_round_trip():
    sq = square()
    gens = dd_hull(sq)
    assert generators_to_hrep(gens, 2) == sq
    wedge = canonical_hrep(HRep.cone(mat([[1, 0], [1, 1]]), 2))
    assert generators_to_hrep(dd_hull(wedge), 2) == wedge


def test_fm_projection_examples():
    # variables ordered (y, x): x >= 0, x <= 1, y - x >= 0; eliminating x
    # leaves y >= 0 (the x <= 1 bound is inactive for the projection)
    h = HRep.polyhedron(mat([[0, 1], [0, -1], [1, -1]]), vec([0, -1, 0]), 2)
    out = canonical_hrep(fm_eliminate(h, 1))
    assert out.ineqs == (vec([1]),) and out.ineq_rhs == (Fraction(0),)
    # substitution path: an equation pinning x turns the bound into y >= 2
    h2 = HRep.polyhedron(
        mat([[1, -1]]), vec([0]), 2, eqs=mat([[0, 1]]), eq_rhs=vec([2])
    )
    out2 = canonical_hrep(fm_eliminate(h2, 1))
    assert out2.ineqs == (vec([1]),) and out2.ineq_rhs == (Fraction(2),)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_fm_projection_pointwise(data):
    cone = random_cones(1, seed=data.draw(st.integers(0, 10_000)))[0]
    from conevlp.projection import projected_hrep

    rows = projected_hrep(cone)
    y = vec([data.draw(st.integers(-3, 3)) for _ in range(cone.p)])
    in_proj = all(dot(r, y) >= 0 for r in rows)
    assert in_proj == feasible_in_cone_system(cone.g, cone.h, y)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_dd_matches_tight_subset_enumeration(seed):
    cone = random_cones(1, seed=seed)[0]
    from conevlp.projection import projected_hrep_canonical

    canon = projected_hrep_canonical(cone)
    if len(canon.ineqs) > 10 or cone.p > 4:
        return
    from conevlp.projection import cone_lineality

    lin = cone_lineality(cone)
    rays, residual = dd_cone(canon.ineqs, canon.eqs + lin, cone.p)
    assert residual == ()
    brute = brute_force_extreme_rays(canon.ineqs, canon.eqs + lin, cone.p)
    assert rays == brute


def test_face_lattice_square():
    faces = face_lattice(square())
    dims = sorted(f.dim for f in faces)
    assert dims == [0, 0, 0, 0, 1, 1, 1, 1, 2]


def test_face_lattice_orthant_cone():
    faces = face_lattice(canonical_hrep(HRep.cone(mat([[1, 0], [0, 1]]), 2)))
    assert sorted(f.dim for f in faces) == [0, 1, 1, 2]
    apex = [f for f in faces if f.dim == 0][0]
    assert apex.gens.points == (vec([0, 0]),)


def test_face_lattice_scale_guard():
    rows = mat([[1 if i == j else 0 for j in range(6)] for i in range(6)])
    with pytest.raises(DeskScaleError):
        face_lattice(HRep.cone(rows, 6))


def _closed_under_intersection(hrep, faces):
    by_active = {f.active: f for f in faces}
    for fa in faces:
        for fb in faces:
            merged = tuple(sorted(set(fa.active) | set(fb.active)))
            common_pts = set(fa.gens.points) & set(fb.gens.points)
            if not common_pts:
                continue  # empty intersection is not listed
            # the closure of the union of active sets must be present
            matches = [g for g in faces if set(g.active) >= set(merged)]
            assert matches
    return True


def test_face_lattice_graded_and_intersection_closed():
    for hrep in (square(), canonical_hrep(HRep.cone(mat([[1, 0], [0, 1], [1, 1]]), 2))):
        faces = face_lattice(hrep)
        _closed_under_intersection(hrep, faces)
        for f in faces:
            if f.dim <= 0:
                continue
            subs = [g for g in faces if set(g.active) > set(f.active)]
            if subs:  # minimal faces have no proper subfaces
                assert any(g.dim == f.dim - 1 for g in subs)


def test_in_cone_of():
    gens = mat([[1, 0], [0, 1]])
    assert in_cone_of(vec([2, 3]), gens)
    assert not in_cone_of(vec([-1, 0]), gens)
    assert in_cone_of(vec([0, 0]), ())
