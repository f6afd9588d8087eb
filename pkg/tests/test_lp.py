from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conevlp import lp
from conevlp.linalg import dot, mat, vec
from conevlp.polyhedra import HRep

from helpers import enumeration_max


def test_bounded_segment():
    out = lp.lp_solve(
        lp.LinearProgram(vec([1]), mat([[-1]]), vec([-1]), ("ge",), ("nonneg",))
    )
    assert out.status == "optimal" and out.x == vec([1]) and out.value == 1


def test_unbounded_ray():
    out = lp.lp_solve(lp.LinearProgram(vec([1]), mat([]), vec([]), (), ("nonneg",)))
    assert out.status == "unbounded"


def test_worked_support_lp():
    out = lp.lp_solve(
        lp.LinearProgram(
            vec([1, 1]),
            mat([[-2, -1], [-1, -2]]),
            vec([Fraction(-1, 2), Fraction(-1, 2)]),
            ("ge", "ge"),
            ("nonneg", "nonneg"),
        )
    )
    assert out.status == "optimal"
    assert out.value == Fraction(1, 3)
    assert out.x == vec([Fraction(1, 6), Fraction(1, 6)])


def test_feasible_point_examples():
    assert lp.feasible_point(mat([[1], [-1]]), vec([1, 0]), ("ge", "ge"), ("free",)) is None
    pt = lp.feasible_point(
        mat([[2, 1], [1, 2], [1, 0], [0, 1]]),
        vec([1, 1, 0, 0]),
        ("ge",) * 4,
        ("free", "free"),
    )
    assert pt is not None
    assert 2 * pt[0] + pt[1] >= 1 and pt[0] + 2 * pt[1] >= 1 and min(pt) >= 0
    assert lp.feasible_point(mat([]), vec([]), (), ("free", "free")) == vec([0, 0])


def test_canonical_point_is_row_order_independent():
    rows = [[2, 1], [1, 2], [1, 0], [0, 1]]
    rhs = [1, 1, 0, 0]
    a = lp.canonical_feasible_point(mat(rows), vec(rhs), ("ge",) * 4, ("free",) * 2)
    perm = [2, 0, 3, 1]
    b = lp.canonical_feasible_point(
        mat([rows[i] for i in perm]), vec([rhs[i] for i in perm]), ("ge",) * 4, ("free",) * 2
    )
    assert a == b


_small_lp = st.tuples(
    st.integers(1, 3),  # n
    st.integers(1, 5),  # m
    st.data(),
)


@settings(max_examples=50, deadline=None)
@given(_small_lp)
def test_agrees_with_generator_enumeration(args):
    n, m, data = args
    draw = data.draw
    obj = vec([draw(st.integers(-3, 3)) for _ in range(n)])
    rows = mat([[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(m)])
    rhs = vec([draw(st.integers(-3, 3)) for _ in range(m)])
    out = lp.lp_solve(lp.LinearProgram(obj, rows, rhs, ("ge",) * m, ("nonneg",) * n))
    # oracle: enumerate generators of the feasible set with double description
    bound_rows = tuple(rows) + tuple(
        vec([1 if j == i else 0 for j in range(n)]) for i in range(n)
    )
    bound_rhs = tuple(rhs) + (Fraction(0),) * n
    status, value = enumeration_max(obj, HRep.polyhedron(bound_rows, bound_rhs, n))
    assert out.status == status
    if status == "optimal":
        assert out.value == value


@settings(max_examples=40, deadline=None)
@given(_small_lp)
def test_duality_and_complementary_slackness(args):
    n, m, data = args
    draw = data.draw
    obj = vec([draw(st.integers(-3, 3)) for _ in range(n)])
    rows = mat([[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(m)])
    rhs = vec([draw(st.integers(-3, 3)) for _ in range(m)])
    kinds = tuple(draw(st.sampled_from(["ge", "eq"])) for _ in range(m))
    bounds = tuple(draw(st.sampled_from(["nonneg", "free"])) for _ in range(n))
    out = lp.lp_solve(lp.LinearProgram(obj, rows, rhs, kinds, bounds))
    if not out.optimal:
        return
    y = out.dual
    # strong duality
    assert dot(y, rhs) == out.value
    for i in range(m):
        slack = dot(rows[i], out.x) - rhs[i]
        if kinds[i] == "ge":
            assert y[i] <= 0  # maximisation dual sign for >= rows
            assert y[i] * slack == 0
        else:
            assert slack == 0
    # dual feasibility and complementary slackness on the columns
    for j in range(n):
        col = vec([rows[i][j] for i in range(m)])
        reduced = obj[j] - dot(y, col)
        if bounds[j] == "free":
            assert reduced == 0
        else:
            assert reduced <= 0
            assert reduced * out.x[j] == 0


def test_max_min_slack_strict_point():
    got = lp.max_min_slack(mat([[1, 0], [0, 1]]), vec([0, 0]), (), (), 2)
    assert got is not None
    t, x = got
    assert t == 1 and min(x) >= 1
    got = lp.max_min_slack(mat([[1], [-1]]), vec([0, 0]), (), (), 1)
    assert got is not None and got[0] == 0
    # infeasible strict system: the relaxed optimum goes negative
    got = lp.max_min_slack(mat([[1], [-1]]), vec([1, 0]), (), (), 1)
    assert got is not None and got[0] == Fraction(-1, 2)
