import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_ej.polytope import (
    PolytopeSequence,
    convex_hull,
    interior_lattice_points,
    is_essential,
    is_indecomposable,
    minkowski_sum,
    mixed_volume,
    normal_fan,
    normalized_volume,
    simplex,
)

from conftest import prism_system, segment


def prism():
    return convex_hull([(0, 0, 0), (3, 0, 0), (0, 3, 0), (0, 0, 2), (3, 0, 2), (0, 3, 2)])


def test_simplex_facets():
    D = simplex(2)
    assert [(f.normal, f.offset) for f in D.facets] == [((1, 0), 0), ((0, 1), 0), ((-1, -1), 1)]
    assert D.vertices == ((0, 0), (0, 1), (1, 0))


def test_prism_volume_and_points():
    P = prism()
    assert normalized_volume(P) == 54
    assert len(P.lattice_points()) == 30
    fan = normal_fan(P)
    assert fan.rays == ((1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1))
    assert len(fan.maximal_cones) == 6


def test_lower_dimensional_hull():
    L = convex_hull([(0, 0, 0), (1, 1, 1), (2, 2, 2)])
    assert L.dim == 1 and L.vertices == ((0, 0, 0), (2, 2, 2))
    assert interior_lattice_points(L) == [(1, 1, 1)]
    assert not L.contains((1, 1, 0))
    pt = convex_hull([(2, -1)])
    assert pt.dim == 0 and interior_lattice_points(pt) == [(2, -1)]


def test_prism_system_sum_interior():
    P = PolytopeSequence(prism_system().supports()).total()
    assert interior_lattice_points(P) == [(1, 1, 1)]


def test_mixed_volume_fixtures():
    assert mixed_volume(prism_system().supports()) == 4
    assert mixed_volume([simplex(2, 2), simplex(2, 3)]) == 6
    assert mixed_volume([segment(0, 5)]) == 5


def test_mixed_volume_polarization():
    P, Q = simplex(2), convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    lhs = mixed_volume([P, Q])
    rhs = (normalized_volume(minkowski_sum(P, Q)) - normalized_volume(P) - normalized_volume(Q)) / 2
    assert lhs == rhs == 2


def test_essential_and_indecomposable():
    seq = prism_system().supports()
    ind = is_indecomposable(seq)
    assert not ind and ind.subset == (1, 2) and ind.point == (1, 1, 0)
    assert is_essential(seq)
    assert is_essential([simplex(2), simplex(2)])
    deg = [convex_hull([(0, 0), (1, 0)]), convex_hull([(0, 0), (2, 0)])]
    e = is_essential(deg)
    assert not e and e.subset == (1, 2)


def test_normal_fan_cones_and_vertices():
    fan = normal_fan(simplex(2))
    maxc = fan.maximal_cones
    assert len(maxc) == 3
    assert {c.vertex for c in maxc} == {(0, 0), (1, 0), (0, 1)}
    assert len(fan.cones_of_dim(1)) == 3


points2 = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=9)


@given(points2)
@settings(max_examples=80, deadline=None)
def test_hull_contains_inputs_and_vertices_are_inputs(pts):
    P = convex_hull(pts)
    assert all(P.contains(p) for p in pts)
    assert set(P.vertices) <= set(pts)
    # no vertex is a convex combination of other points: removing it shrinks the hull
    if P.dim == 2:
        for v in P.vertices:
            rest = [p for p in pts if p != v]
            if len(set(rest)) >= 3 and convex_hull(rest).dim == 2:
                assert not convex_hull(rest).contains(v)


@given(points2)
@settings(max_examples=60, deadline=None)
def test_pick_formula_in_the_plane(pts):
    P = convex_hull(pts)
    if P.dim != 2:
        return
    inner = len(interior_lattice_points(P))
    boundary = len(P.lattice_points()) - inner
    # Pick: 2 * area = 2i + b - 2
    assert normalized_volume(P) == 2 * inner + boundary - 2


boxes = st.tuples(st.integers(1, 3), st.integers(1, 3))


@given(boxes, boxes)
@settings(max_examples=25, deadline=None)
def test_mixed_volume_of_boxes(a, b):
    # MV of boxes is a permanent-like sum; for two factors in 2D: a1 b2 + a2 b1
    P = convex_hull(itertools.product(range(0, a[0] + 1, a[0]), range(0, a[1] + 1, a[1])))
    Q = convex_hull(itertools.product(range(0, b[0] + 1, b[0]), range(0, b[1] + 1, b[1])))
    assert mixed_volume([P, Q]) == a[0] * b[1] + a[1] * b[0]


def test_mixed_volume_symmetric_and_multilinear():
    A, B, C = simplex(3), convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]), simplex(3, 2)
    base = mixed_volume([A, B, C])
    for perm in itertools.permutations([A, B, C]):
        assert mixed_volume(list(perm)) == base
    assert mixed_volume([minkowski_sum(A, C), B, C]) == mixed_volume([A, B, C]) + mixed_volume([C, B, C])
    assert mixed_volume([A.dilate(3), B, C]) == 3 * base
    assert mixed_volume([A, A, A]) == normalized_volume(A)


points3 = st.lists(st.tuples(*(st.integers(-3, 3) for _ in range(3))), min_size=4, max_size=14)


@given(points3)
@settings(max_examples=40, deadline=None)
def test_hull_agrees_with_qhull(pts):
    from scipy.spatial import ConvexHull

    P = convex_hull(pts)
    if P.dim < 3:
        return
    ref = ConvexHull(sorted(set(pts)))
    ref_vertices = {tuple(int(x) for x in ref.points[i]) for i in ref.vertices}
    assert set(P.vertices) == ref_vertices
    assert float(normalized_volume(P)) == pytest.approx(6 * ref.volume)


def test_volume_rejects_bad_input():
    with pytest.raises(ValueError):
        convex_hull([])
    with pytest.raises(ValueError):
        mixed_volume([simplex(2)])
    assert normalized_volume(convex_hull([(0, 0), (1, 1)])) == Fraction(0)
