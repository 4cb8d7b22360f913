import random
from collections import Counter
from fractions import Fraction

import pytest

from tropica import enumeration as en
from tropica import lattice_polytope as lp


def box(a, b):
    return lp.newton_polygon([(0, 0), (a, 0), (0, b), (a, b)])


def test_kontsevich_oracle_values():
    assert [en.kontsevich_oracle(d) for d in range(1, 6)] == [1, 1, 12, 620, 87304]


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_rational_plane_curves_match_kontsevich(d):
    assert en.count_N_irr(0, lp.simplex(d)) == en.kontsevich_oracle(d)


def test_quartic_counts_by_genus():
    # classical characteristic numbers of plane quartics
    assert [en.count_N_irr(g, lp.simplex(4)) for g in range(4)] == [620, 225, 27, 1]
    assert [en.count_N(g, lp.simplex(4)) for g in range(4)] == [675, 225, 27, 1]


def test_reducible_quartics_are_line_cubic_pairs():
    # two components of total genus 0 need genera summing to 1: a line through
    # 2 of the 11 points and the unique smooth cubic through the other 9.
    assert en.count_N(0, lp.simplex(4)) - en.count_N_irr(0, lp.simplex(4)) == 55 == 11 * 10 // 2


def test_toric_surface_counts():
    assert en.count_N_irr(0, box(1, 1)) == 1
    assert en.count_N_irr(0, box(2, 2)) == 12
    assert en.count_N_irr(0, box(3, 2)) == 96
    assert en.count_N_irr(1, box(2, 2)) == 1


def test_path_audit_cubic():
    res = en.count_paths(0, lp.simplex(3))
    pos = res.positive()
    assert len(pos) == 5
    assert sorted(m.mu for _, m in pos) == [1, 2, 2, 3, 4]
    assert res.N == 12
    # every path runs from the lam-minimal to the lam-maximal point
    for path, _ in pos:
        assert path[0] == (3, 0) and path[-1] == (0, 3)
        assert len(path) == 9


def test_genus_one_cubic_single_path():
    res = en.count_paths(1, lp.simplex(3))
    assert res.N == 1 and len(res.positive()) == 1


def test_path_multiplicity_rejects_bad_paths():
    P = lp.simplex(2)
    with pytest.raises(ValueError):
        en.path_multiplicity([(0, 2), (2, 0)], P)
    assert en.path_multiplicity([(1, 0), (0, 1)], P).mu == 0


def test_lambda_order_injectivity():
    with pytest.raises(ValueError):
        en.LambdaOrder(-1, 1).check_injective([(0, 0), (1, 1)])
    lam = en.LambdaOrder.parse("1/1009")
    assert lam.a == Fraction(-1, 1009)
    assert en.LambdaOrder.parse("2,3") == en.LambdaOrder(2, 3)


def random_lambda(rng, points):
    while True:
        lam = en.LambdaOrder(Fraction(rng.randint(-97, 97), rng.randint(50, 997)), Fraction(rng.randint(1, 9), rng.randint(1, 7)))
        try:
            lam.check_injective(points)
            return lam
        except ValueError:
            continue


def test_lambda_invariance_small_polygons():
    rng = random.Random(5)
    polys = [lp.simplex(3), box(2, 2), lp.newton_polygon([(0, 0), (2, 0), (0, 1), (1, 2)]), lp.newton_polygon([(1, 0), (2, 1), (1, 2), (0, 1)])]
    for P in polys:
        pts = P.lattice_points()
        for g in range(lp.interior_points(P) + 1):
            vals = {en.count_N(g, P, random_lambda(rng, pts)) for _ in range(3)}
            assert len(vals) == 1, (P, g, vals)


def test_segment_counts():
    seg = lp.newton_polygon([(0, 0), (1, 0)])
    assert en.count_N(0, seg) == 1
    assert en.count_N_irr(0, seg) == 1
    assert en.count_N_irr(0, lp.newton_polygon([(0, 0), (2, 0)])) == 0


def test_threads_give_same_result(monkeypatch):
    monkeypatch.setenv("TROPICA_THREADS", "4")
    four = en.count_paths(0, lp.simplex(4))
    monkeypatch.setenv("TROPICA_THREADS", "1")
    one = en.count_paths(0, lp.simplex(4))
    assert four.N == one.N and four.paths == one.paths


def test_count_result_record():
    rec = en.count_paths(0, lp.simplex(3)).to_dict()
    assert rec["N"] == 12 and len(rec["paths"]) == 5
    assert Counter(p["mu_plus"] * p["mu_minus"] for p in rec["paths"]) == Counter({2: 2, 1: 1, 3: 1, 4: 1})
