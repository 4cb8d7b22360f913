import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropica import lattice_polytope as lp

pts = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=12)


def brute_area2(P):
    # shoelace on the hull, independent of doubled_area's bookkeeping
    v = P.vertices
    return abs(sum(v[i][0] * v[(i + 1) % len(v)][1] - v[(i + 1) % len(v)][0] * v[i][1] for i in range(len(v))))


@settings(max_examples=150)
@given(pts)
def test_pick_matches_enumeration(points):
    P = lp.newton_polygon(points)
    if P.degenerate:
        return
    assert P.doubled_area() == brute_area2(P)
    lat = P.lattice_points()
    strict = [p for p in lat if P.contains(p, strict=True)]
    assert lp.interior_points(P) == len(strict)
    assert lp.boundary_points(P) == len(lat) - len(strict)


def test_simplex_counts():
    for d in range(1, 6):
        T = lp.simplex(d)
        assert len(T.lattice_points()) == (d + 1) * (d + 2) // 2
        assert lp.interior_points(T) == (d - 1) * (d - 2) // 2
        assert T.area() == Fraction(d * d, 2)


def test_degenerate_kinds():
    assert lp.newton_polygon([(1, 1)]).kind == "point"
    s = lp.newton_polygon([(0, 0), (2, 2), (1, 1)])
    assert s.kind == "segment"
    assert lp.edge_vectors(s) == [(1, 1), (1, 1), (-1, -1), (-1, -1)]
    with pytest.raises(ValueError):
        lp.interior_points(s)


def test_mixed_area_bezout():
    for a in range(1, 4):
        for b in range(1, 4):
            assert lp.mixed_area(lp.simplex(a), lp.simplex(b)) == a * b


@settings(max_examples=100)
@given(pts)
def test_edge_vectors_round_trip(points):
    P = lp.newton_polygon(points)
    if P.degenerate:
        return
    Q = lp.polygon_from_edge_vectors(lp.edge_vectors(P))
    assert Q.normalized() == P.normalized()


def test_upper_hull_1d():
    hull = lp.upper_hull_1d([(0, Fraction(0)), (1, Fraction(-1)), (2, Fraction(0)), (1, Fraction(-3))])
    assert hull == [(0, 0), (2, 0)]
    assert lp.interpolate_hull_1d(hull, 1) == 0


def test_regular_subdivision_unit_square():
    lift = {(0, 0): 1, (1, 0): 0, (0, 1): 0, (1, 1): 0}
    sub = lp.regular_subdivision(None, lift)
    assert len(sub.cells) == 2 and sub.is_unimodular()
    # the raised corner is on the upper hull of both cells: the cut runs through it
    assert list(sub.interior_edges()) == [((0, 0), (1, 1))]
    assert ((0, 1), (1, 0)) not in sub.edge_cells()


def test_regular_subdivision_lifted_out_point():
    lift = {(0, 0): 0, (2, 0): 0, (0, 2): 0, (1, 0): -5, (0, 1): -5, (1, 1): -5}
    sub = lp.regular_subdivision(None, lift)
    assert len(sub.cells) == 1
    assert set(sub.lifted_out()) == {(1, 0), (0, 1), (1, 1)}


def test_random_subdivisions_tile():
    rng = random.Random(7)
    for _ in range(40):
        d = rng.randint(1, 4)
        lift = {p: Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for p in lp.simplex(d).lattice_points()}
        sub = lp.regular_subdivision(lp.simplex(d), lift)
        assert sum(c.polygon.doubled_area() for c in sub.cells) == d * d
        # every cell lies on its own plane and every lattice point is on or below it
        for c in sub.cells:
            for p, v in lift.items():
                assert c.plane(p) >= v


def test_honeycomb_lift_is_unimodular():
    for d in range(1, 5):
        lift = {(i, j): -(i * i + i * j + j * j) for i, j in lp.simplex(d).lattice_points()}
        sub = lp.regular_subdivision(lp.simplex(d), lift)
        assert sub.is_unimodular() and len(sub.cells) == d * d


def test_serialization():
    P = lp.newton_polygon([(0, 0), (3, 1), (1, 2)])
    assert lp.LatticePolygon.from_dict(P.to_dict()) == P


def test_nd_helpers():
    cube = [(a, b, c) for a in (0, 2) for b in (0, 2) for c in (0, 2)]
    assert len(lp.lattice_points_nd(cube)) == 27
    assert lp.in_hull_nd(cube, (1, 1, 1)) and not lp.in_hull_nd(cube, (3, 0, 0))
