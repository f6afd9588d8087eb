"""Independent oracles used by the tests (never by the package itself)."""

from fractions import Fraction
from itertools import combinations

from conevlp import lp
from conevlp.linalg import Mat, Vec, ZERO, ONE, dot, is_zero_vec, rank, sub
from conevlp.polyhedra import EmptyPolyhedronError, HRep, dd_hull


def enumeration_max(objective: Vec, hrep: HRep):
    """Maximise over a polyhedron by enumerating its generators (no simplex).

    Returns ('infeasible', None), ('unbounded', None) or ('optimal', value).
    """
    try:
        gens = dd_hull(hrep)
    except EmptyPolyhedronError:
        return "infeasible", None
    for r in gens.rays:
        if dot(objective, r) > 0:
            return "unbounded", None
    for l in gens.lin:
        if dot(objective, l) != 0:
            return "unbounded", None
    return "optimal", max(dot(objective, p) for p in gens.points)


def _affine_rank(points: Mat) -> int:
    base = points[0]
    dirs = [sub(p, base) for p in points[1:]]
    dirs = [d for d in dirs if not is_zero_vec(d)]
    return rank(tuple(dirs)) if dirs else 0


def _triangulate(vertices: list[Vec], rows, tight, dim: int):
    """Simplices (lists of vertices) triangulating a polytope face."""
    if dim == 0:
        return [[vertices[0]]]
    base = min(vertices)
    simplices = []
    for i, (a, r) in enumerate(rows):
        if i in tight:
            continue
        sub_vs = [v for v in vertices if dot(a, v) == r]
        if not sub_vs or base in sub_vs:
            continue
        if _affine_rank(tuple(sub_vs)) != dim - 1:
            continue
        for s in _triangulate(sub_vs, rows, tight | {i}, dim - 1):
            simplices.append(s + [base])
    return simplices


def _det(mat_rows) -> Fraction:
    m = [list(r) for r in mat_rows]
    n = len(m)
    det = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = ONE / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f != 0:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def polytope_volume(vertices, rows, dim: int) -> Fraction:
    """Exact volume of a full-dimensional polytope given vertices + H-rep."""
    if dim == 0:
        return ONE
    total = ZERO
    for simplex in _triangulate(list(vertices), list(rows), frozenset(), dim):
        base = simplex[-1]
        edges = [sub(v, base) for v in simplex[:-1]]
        total += abs(_det(edges))
    fact = 1
    for i in range(2, dim + 1):
        fact *= i
    return total / fact


def feasible_in_cone_system(g: Mat, h: Mat, y: Vec) -> bool:
    """Membership of y in the projected cone, via a fresh feasibility LP."""
    k = len(h)
    n = len(g[0]) if g and g[0] else 0
    rhs = tuple(-dot(h[i], y) for i in range(k))
    if n == 0:
        return all(r <= 0 for r in rhs)
    return lp.feasible_point(g, rhs, (lp.GE,) * k, (lp.FREE,) * n) is not None
