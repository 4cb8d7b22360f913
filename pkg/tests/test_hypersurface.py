import random
from fractions import Fraction

import pytest
from oracles import check_dual_structure, grid_scan_separation

from tropica.hypersurface import (
    PuiseuxLite,
    TropicalComplex,
    balancing_check,
    corner_locus,
    membership,
    tropicalize,
    univariate_trop_roots,
)
from tropica.trop_core import TropicalPolynomial


def line():
    return TropicalPolynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0})


def test_tropical_line():
    C = corner_locus(line())
    assert C.vertices == [(0, 0)]
    assert sorted(r.direction for r in C.rays) == [(-1, 0), (0, -1), (1, 1)]
    assert balancing_check(C) == []


def test_weight_two_ray():
    C = corner_locus(TropicalPolynomial({(0, 0): 0, (1, 0): 0, (0, 2): 0}))
    rays = sorted((r.direction, r.weight) for r in C.rays)
    assert rays == [((-1, 0), 2), ((0, -1), 1), ((2, 1), 1)]


def test_honeycomb_conic():
    F = TropicalPolynomial({(i, j): -(i * i + i * j + j * j) for i in range(3) for j in range(3 - i)})
    C = corner_locus(F)
    assert (len(C.vertices), len(C.edges), len(C.rays)) == (4, 3, 6)
    assert C.first_betti() == 0
    check_dual_structure(F, C)


def test_square_cells_from_other_lift():
    F = TropicalPolynomial({(i, j): -(i * i + j * j) for i in range(3) for j in range(3 - i)})
    C = corner_locus(F)
    assert len(C.vertices) == 3 and len(C.edges) == 2


def test_cubic_has_a_cycle():
    F = TropicalPolynomial({(i, j): -(i * i + i * j + j * j) for i in range(4) for j in range(4 - i)})
    C = corner_locus(F)
    assert C.first_betti() == 1
    assert len(C.rays) == 9


def test_degenerate_newton_polygons():
    assert corner_locus(TropicalPolynomial({(1, 2): 5})).empty
    C = corner_locus(TropicalPolynomial({(0, 0): 0, (1, 0): 2, (2, 0): -1, (3, 0): 3}))
    # upper hull (0,0), (1,2), (3,3): a weight-1 line at x=-2 and a weight-2 line at x=-1/2
    assert sorted((l.weight, l.point[0]) for l in C.lines) == [(1, -2), (2, Fraction(-1, 2))]
    assert C.hidden_terms == [(2, 0)]


def test_lines_location():
    C = corner_locus(TropicalPolynomial({(0, 0): 0, (0, 1): 3}))
    (l,) = C.lines
    assert l.direction in ((1, 0), (-1, 0))
    assert l.point[1] == -3


def test_membership():
    F = line()
    assert membership(F, (0, 0)) and membership(F, (-5, 0)) and membership(F, (2, 2))
    assert not membership(F, (1, 0))
    assert membership(F, (1e-9, 0.0), tol=1e-6)


def test_random_against_oracles():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(3, 8)
        terms = {(rng.randint(0, 4), rng.randint(0, 4)): Fraction(rng.randint(-30, 30), rng.randint(1, 4)) for _ in range(n)}
        F = TropicalPolynomial(terms)
        C = corner_locus(F)
        if C.empty or C.lines:
            continue
        assert balancing_check(C) == []
        check_dual_structure(F, C)
        grid_scan_separation(F, C)


def test_complex_round_trip():
    C = corner_locus(line())
    D = TropicalComplex.from_dict(C.to_dict())
    assert D.vertices == C.vertices and D.rays == C.rays


def test_valuation_bridge():
    # (t^2 + 3) z + t^-1 w + 1 has valuations 2, -1, 0
    f = {(1, 0): PuiseuxLite({2: 1, 0: 3}), (0, 1): PuiseuxLite({-1: 1}), (0, 0): 1}
    F = tropicalize(f)
    assert F.coefficients == {(1, 0): 2, (0, 1): -1, (0, 0): 0}
    assert PuiseuxLite({Fraction(1, 2): 2, -1: 1})(4.0) == pytest.approx(4.25)
    with pytest.raises(ValueError):
        PuiseuxLite({1: 0}).val()


def test_univariate_roots():
    F = TropicalPolynomial({(0,): 0, (1,): 1, (3,): -1})
    roots = univariate_trop_roots(F)
    assert roots == [(-1, 1), (1, 2)]
    assert sum(m for _, m in roots) == 3
