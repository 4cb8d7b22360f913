import numpy as np
import pytest

from tropica import amoeba as am
from tropica.amoeba.ronkin import distance_outside

LINE = am.ComplexLaurentPolynomial({(0, 0): 1, (1, 0): 1, (0, 1): 1})
W6 = (-6, 6, -6, 6)


def mahler_line():
    # Smyth: m(1+z+w) = 3*sqrt(3)/(4*pi) * L(2, chi_-3)
    n = np.arange(0, 200000)
    L = np.sum(1 / (3 * n + 1) ** 2 - 1 / (3 * n + 2) ** 2)
    return 3 * np.sqrt(3) / (4 * np.pi) * L


def test_batch_roots_against_numpy():
    rng = np.random.default_rng(0)
    c = rng.normal(size=(20, 6)) + 1j * rng.normal(size=(20, 6))
    got = am.batch_roots(c)
    for row, r in zip(c, got):
        want = np.roots(row[::-1])
        assert np.allclose(np.sort_complex(r), np.sort_complex(want), atol=1e-8)


def test_line_slice_is_exact():
    for x in [-3.0, -0.2, 0.0, 0.7, 2.5]:
        (iv,) = am.slice_intervals(LINE, x)
        # |1 + e^(x+i theta)| sweeps [|1 - e^x|, 1 + e^x]
        if x != 0:
            assert iv[0] == pytest.approx(np.log(abs(1 - np.exp(x))), abs=1e-6)
        assert iv[1] == pytest.approx(np.log1p(np.exp(x)), abs=1e-9)


def test_raster_of_line():
    r = am.amoeba_raster(LINE, W6, 120)
    assert r.member.shape == (120, 120)
    assert r.contains((0.0, 0.0)) and r.contains((-4.0, 0.0)) and r.contains((3.0, 3.0))
    assert not r.contains((2.0, -2.0)) and not r.contains((-3.0, -3.0))


def test_ronkin_one_variable_jensen():
    f = am.ComplexLaurentPolynomial({(0, 0): 1, (1, 0): 1})
    xs = np.linspace(-3, 3, 61)
    err = max(abs(am.ronkin_value(f, x, M=4096).value - max(0.0, x)) for x in xs)
    assert err < 1e-6


def test_ronkin_constant_and_monomial():
    c = am.ComplexLaurentPolynomial({(0, 0): 3})
    assert am.ronkin_value(c, (0.4, -1.0)).value == pytest.approx(np.log(3))
    m = am.ComplexLaurentPolynomial({(2, -1): -2j})
    assert am.ronkin_value(m, (0.5, 0.25)).value == pytest.approx(np.log(2) + 1.0 - 0.25)


def test_ronkin_of_line_at_origin_is_mahler_measure():
    est = am.ronkin_value(LINE, (0.0, 0.0), M=512)
    assert est.value == pytest.approx(mahler_line(), abs=1e-4)


def test_ronkin_on_complement_is_affine():
    # component of index (1,0): N = x
    for p in [(3.0, 0.0), (4.0, -2.0), (2.5, 1.0)]:
        assert am.ronkin_value(LINE, p).value == pytest.approx(p[0], abs=1e-8)


def test_ronkin_convex_along_segments():
    rng = np.random.default_rng(1)
    f = am.ComplexLaurentPolynomial({(0, 0): 1, (1, 0): -2, (0, 1): 1.5, (1, 1): 0.7, (2, 0): 0.3})
    for _ in range(15):
        a, b = rng.uniform(-3, 3, 2), rng.uniform(-3, 3, 2)
        ea, eb, em = (am.ronkin_value(f, p, M=256) for p in (a, b, (a + b) / 2))
        slack = 3 * (ea.error + eb.error + em.error) + 1e-9
        assert em.value <= (ea.value + eb.value) / 2 + slack


def test_ronkin_gradient_inside_newton_polygon():
    f = am.ComplexLaurentPolynomial({(0, 0): 1, (2, 0): 1, (0, 1): 1, (1, 1): -3})
    P = f.newton_polygon()
    for p in [(0.0, 0.0), (0.3, -0.8), (-1.0, 1.2)]:
        g = am.ronkin_gradient(f, p)
        assert distance_outside(P, g) < 0.05


def test_line_components():
    res = am.complement_components(LINE, W6, 200)
    assert sorted(c.index for c in res.components) == [(0, 0), (0, 1), (1, 0)]
    for c in res.components:
        assert np.max(np.abs(np.asarray(c.gradient) - c.index)) < 0.05


def test_monomial_has_one_component():
    m = am.ComplexLaurentPolynomial({(1, 1): 2})
    res = am.complement_components(m, W6, 60)
    assert len(res.components) == 1 and res.components[0].index == (1, 1)


def test_conic_components_bounded_by_lattice_points():
    f = am.ComplexLaurentPolynomial({(0, 0): 1, (1, 0): 30, (0, 1): 30, (2, 0): 1, (1, 1): 30, (0, 2): 1})
    res = am.complement_components(f, (-10, 10, -10, 10), 240)
    idx = [c.index for c in res.components if c.index is not None]
    assert len(res.components) <= 6
    assert len(set(idx)) == len(idx)
    # vertices of the Newton polygon always have components
    assert {(0, 0), (2, 0), (0, 2)} <= set(idx)


def test_spine_of_line():
    sp = am.spine(LINE, W6, 200)
    assert sp.flag is None
    assert set(sp.coefficients) == {(0, 0), (1, 0), (0, 1)}
    assert max(abs(c) for c in sp.coefficients.values()) < 1e-3
    (v,) = sp.complex.vertices
    assert np.allclose(np.asarray(v, float), 0, atol=1e-3)


def test_spine_shifts_with_constant():
    f = am.ComplexLaurentPolynomial({(0, 0): 50, (1, 0): 1, (0, 1): 1})
    sp = am.spine(f, (-4, 10, -4, 10), 200)
    (v,) = sp.complex.vertices
    assert np.allclose(np.asarray(v, float), np.log(50), atol=1e-3)


def test_spine_lies_in_amoeba():
    f = am.ComplexLaurentPolynomial({(0, 0): 1, (1, 0): 20, (0, 1): 20, (1, 1): 1})
    sp = am.spine(f, (-8, 8, -8, 8), 200)
    r = sp.components.raster
    C = sp.complex
    pts = [np.asarray(C.vertices[e.u], float) / 2 + np.asarray(C.vertices[e.v], float) / 2 for e in C.edges]
    pts += [np.asarray(C.vertices[ray.vertex], float) + 2 * np.asarray(ray.direction, float) for ray in C.rays]
    for p in pts:
        assert r.contains(tuple(p))


def test_spine_monomial_flag():
    sp = am.spine(am.ComplexLaurentPolynomial({(0, 1): 2}), W6, 50)
    assert sp.flag == "monomial" and sp.complex is None


def test_area_monomial_zero():
    assert am.area_estimate(am.ComplexLaurentPolynomial({(3, 1): 1}), W6).value == 0.0


def test_area_of_line_rough():
    est = am.area_estimate(LINE, (-8, 8, -8, 8), samples=40_000)
    assert abs(est.value - np.pi**2 / 2) < 5 * est.sigma + 0.05


def test_area_bound_on_random_real_conics():
    rng = np.random.default_rng(3)
    for _ in range(5):
        coeffs = {(i, j): rng.choice([-1, 1]) * np.exp(rng.uniform(-1, 1)) for i in range(3) for j in range(3 - i)}
        f = am.ComplexLaurentPolynomial(coeffs)
        est = am.area_estimate(f, (-8, 8, -8, 8), samples=40_000)
        assert est.value <= np.pi**2 * 2 * (1 + 3 * est.relative_sigma)


def test_dequant_limit_and_monotone():
    coeffs = {(0, 0): 1, (1, 0): 1, (0, 1): 1}
    same = am.hausdorff_distance(np.array([[0.0, 0.0], [1.0, 1.0]]), np.array([[0.0, 0.0], [1.0, 1.0]]))
    assert same == 0.0
    d = am.dequant_distances(coeffs, [10.0, 100.0, 1000.0], resolution=200)
    assert d[0] > d[1] > d[2]
    for t, v in zip([10.0, 100.0, 1000.0], d):
        assert v <= np.log(3) / np.log(t) + 2 * 10 / 200 + 1e-9


def test_line_contour_is_real_locus():
    pts = am.log_gauss_contour(LINE, W6, 80)
    assert len(pts) > 50
    x, y = pts[:, 0], pts[:, 1]
    # real points of 1+z+w=0 have e^y = |1 +- e^x|
    resid = np.minimum.reduce([
        np.abs(np.exp(y) - (1 + np.exp(x))),
        np.abs(np.exp(y) - np.abs(1 - np.exp(x))),
    ])
    assert np.max(resid / np.exp(y)) < 1e-6


def test_contour_touches_boundary():
    f = am.ComplexLaurentPolynomial({(0, 0): 1, (1, 0): np.exp(0.4j) * 2, (0, 1): np.exp(1.1j), (1, 1): 0.5 + 0.5j})
    pts = am.log_gauss_contour(f, W6, 120)
    r = am.amoeba_raster(f, W6, 120)
    # the critical values of Log contain the boundary of the amoeba
    for p in pts[::7]:
        assert r.contains(tuple(p)) or min(
            np.hypot(*(np.asarray(r.center(iy, ix)) - p)) for iy, ix in np.argwhere(r.member)[::1]
        ) < 2 * max(r.hx, r.hy)


def test_determinism_across_threads(monkeypatch):
    f = am.ComplexLaurentPolynomial({(0, 0): 1, (1, 0): -2, (0, 1): 1.5, (1, 1): 0.7})
    out = []
    for n in ("1", "4"):
        monkeypatch.setenv("TROPICA_THREADS", n)
        r = am.amoeba_raster(f, W6, 100)
        a = am.area_estimate(f, W6, samples=10_000, seed=7)
        out.append((r.member.copy(), a.value, a.sigma))
    assert np.array_equal(out[0][0], out[1][0])
    assert out[0][1:] == out[1][1:]


def test_seeds_are_reproducible():
    a = am.area_estimate(LINE, W6, samples=10_000, seed=4)
    b = am.area_estimate(LINE, W6, samples=10_000, seed=4)
    c = am.area_estimate(LINE, W6, samples=10_000, seed=5)
    assert a == b and a.value != c.value
