"""Complement components, spine and area of plane amoebas."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .. import lattice_polytope as lp
from ..hypersurface import TropicalComplex, corner_locus
from ..trop_core import TropicalPolynomial, as_rational
from .poly import ComplexLaurentPolynomial
from .ronkin import NumericFailure, distance_outside, ronkin_gradient, ronkin_value
from .slices import AmoebaRaster, amoeba_raster, in_intervals, ordered_map, rng_for, slice_intervals_batch

log = logging.getLogger(__name__)

ROUND_TOL = 0.2
FOUR = ndimage.generate_binary_structure(2, 1)


@dataclass
class ComplementComponent:
    label: int
    cells: int
    index: tuple[int, int] | None  # None when the gradient did not round
    point: tuple[float, float]  # deepest interior cell centre
    gradient: tuple[float, float]
    depth: float  # distance from the amoeba, in cells

    @property
    def indeterminate(self) -> bool:
        return self.index is None


@dataclass
class ComponentResult:
    raster: AmoebaRaster
    labels: np.ndarray
    components: list[ComplementComponent]


def _window_check(f: ComplexLaurentPolynomial, window) -> None:
    P = f.newton_polygon()
    vs = np.asarray(P.vertices, float)
    diam = float(np.max(np.linalg.norm(vs[:, None] - vs[None], axis=2))) if len(vs) > 1 else 0.0
    logc = [np.log(abs(c)) for _, c in f.terms]
    spread = max(logc) - min(logc)
    need = 2 * max(diam, 1.0) + spread
    if min(window[1] - window[0], window[3] - window[2]) < need:
        log.warning("window may be too small to contain every bounded complement component")


def complement_components(
    f: ComplexLaurentPolynomial, window, resolution, M: int = 512, seed: int = 0, raster: AmoebaRaster | None = None
) -> ComponentResult:
    """Flood-fill the complement of the raster and index each piece by its Ronkin gradient."""
    _window_check(f, window)
    r = raster if raster is not None else amoeba_raster(f, window, resolution, M)
    labels, n = ndimage.label(~r.member, structure=FOUR)
    depth = ndimage.distance_transform_edt(labels > 0)
    P = f.newton_polygon()
    comps = []
    for lab in range(1, n + 1):
        mask = labels == lab
        dm = np.where(mask, depth, -1.0)
        iy, ix = np.unravel_index(int(np.argmax(dm)), dm.shape)
        p = r.center(iy, ix)
        h = min(r.hx, r.hy)
        step = float(min(0.05, max(dm[iy, ix] - 0.5, 0.1) * h / 2))
        try:
            g = ronkin_gradient(f, p, M=max(64, M // 2), step=step, seed=seed, tol=1.0)
        except NumericFailure:
            g = np.array([np.nan, np.nan])
        idx = None
        if np.all(np.isfinite(g)):
            cand = (int(round(g[0])), int(round(g[1])))
            if np.max(np.abs(g - cand)) <= ROUND_TOL and P.contains(cand):
                idx = cand
        if idx is None:
            log.warning("component %d at %s: gradient %s does not round to a lattice point", lab, p, g)
        comps.append(ComplementComponent(lab, int(mask.sum()), idx, p, (float(g[0]), float(g[1])), float(dm[iy, ix])))
    known = [c.index for c in comps if c.index is not None]
    if len(set(known)) != len(known):
        raise NumericFailure(f"two complement components share an index: {sorted(known)}")
    if len(comps) > len(P.lattice_points()):
        raise NumericFailure(f"{len(comps)} components exceed the {len(P.lattice_points())} lattice points of the Newton polygon")
    return ComponentResult(r, labels, comps)


@dataclass
class SpineResult:
    coefficients: dict  # index -> float constant term c_alpha
    polynomial: TropicalPolynomial | None
    complex: TropicalComplex | None
    components: ComponentResult | None = None
    residuals: dict = field(default_factory=dict)
    flag: str | None = None

    def to_dict(self) -> dict:
        return {
            "coefficients": [{"index": list(a), "c": repr(c)} for a, c in sorted(self.coefficients.items())],
            "flag": self.flag,
            "complex": self.complex.to_dict() if self.complex is not None else None,
        }


def spine(
    f: ComplexLaurentPolynomial, window, resolution, M: int = 256, seed: int = 0, samples: int = 25, tol: float = 1e-6,
    components: ComponentResult | None = None,
) -> SpineResult:
    """Affine pieces of the Ronkin function on the complement, and their max.

    Each constant term is the mean of ``N_f(x) - <alpha, x>`` over at least
    ``samples`` points well inside the component; the spread of those values
    is the fit residual.
    """
    if f.is_monomial():
        log.warning("monomial: the amoeba is empty and there is no spine")
        (e, c), = f.terms
        F = TropicalPolynomial({e: as_rational(float(np.log(abs(c))))})
        return SpineResult({e: float(np.log(abs(c)))}, F, None, None, flag="monomial")
    res = components if components is not None else complement_components(f, window, resolution, M=max(M, 256), seed=seed)
    r = res.raster
    depth = ndimage.distance_transform_edt(res.labels > 0)
    rng = rng_for(seed, 2)
    coefs, resid = {}, {}
    for comp in res.components:
        if comp.index is None:
            continue
        mask = (res.labels == comp.label) & (depth >= 2.5)
        cand = np.argwhere(mask)
        if len(cand) == 0:
            raise NumericFailure(f"component {comp.index} is too thin to sample; refine the raster")
        if len(cand) > samples:
            cand = cand[np.sort(rng.choice(len(cand), samples, replace=False))]
        a = np.asarray(comp.index, float)
        vals = []
        for iy, ix in cand:
            p = r.center(int(iy), int(ix))
            vals.append(ronkin_value(f, p, M, seed).value - float(a @ np.asarray(p)))
        vals = np.asarray(vals)
        c = float(vals.mean())
        spread = float(np.max(np.abs(vals - c)))
        if spread > tol:
            raise NumericFailure(
                f"affine fit on component {comp.index} has residual {spread:.3g} > {tol}; window under-resolved"
            )
        coefs[comp.index], resid[comp.index] = c, spread
    if len(coefs) < 2:
        return SpineResult(coefs, None, None, res, resid, flag="fewer than two indexed components")
    F = TropicalPolynomial({a: as_rational(c) for a, c in coefs.items()})
    return SpineResult(coefs, F, corner_locus(F), res, resid)


@dataclass(frozen=True)
class AreaEstimate:
    value: float
    sigma: float  # standard error of value
    samples: int
    window: tuple
    tail: float  # estimated area escaping the window

    @property
    def relative_sigma(self) -> float:
        return self.sigma / self.value if self.value else 0.0


def _interval_length(intervals, lo: float, hi: float) -> float:
    return sum(max(0.0, min(b, hi) - max(a, lo)) for a, b in intervals)


def _area_once(f, window, samples, seed, M):
    x0, x1, y0, y1 = window
    n = max(10, int(round(np.sqrt(samples))))
    rng = rng_for(seed, 3)
    hx, hy = (x1 - x0) / n, (y1 - y0) / n
    xs = x0 + (np.arange(n) + rng.random(n)) * hx
    ys = y0 + (np.arange(n)[None, :] + rng.random((n, n))) * hy
    chunks = [xs[i : i + 50] for i in range(0, n, 50)]
    ivs = sum(ordered_map(lambda c: slice_intervals_batch(f, c, M, 0), chunks), [])
    hits = np.array([in_intervals(ys[i], ivs[i]).mean() for i in range(n)])
    col_area = hits * (y1 - y0)
    groups = np.array([col_area[g::10].mean() for g in range(10)]) * (x1 - x0)
    value = float(col_area.mean() * (x1 - x0))
    sigma = float(groups.std(ddof=1) / np.sqrt(10))
    # tails: cross-section on the window edges, decaying at least like e^{-|t|}
    edges = slice_intervals_batch(f, [x0, x1], M, 0) + slice_intervals_batch(f, [y0, y1], M, 1)
    tail = _interval_length(edges[0], y0, y1) + _interval_length(edges[1], y0, y1)
    tail += _interval_length(edges[2], x0, x1) + _interval_length(edges[3], x0, x1)
    return AreaEstimate(value, sigma, n * n, tuple(window), tail)


def area_estimate(f: ComplexLaurentPolynomial, window, samples: int = 10**6, seed: int = 0, M: int = 512, retries: int = 2) -> AreaEstimate:
    """Monte Carlo area of the amoeba on a stratified jittered grid.

    Samples are grouped in ``sqrt(samples)`` vertical strips with one jittered
    abscissa each; membership is decided exactly against that column's slice.
    """
    if f.is_monomial():
        return AreaEstimate(0.0, 0.0, 0, tuple(window), 0.0)
    window = tuple(float(v) for v in window)
    for attempt in range(retries + 1):
        est = _area_once(f, window, samples, seed, M)
        if est.tail <= 0.01 * max(est.value, 1e-12) or attempt == retries:
            break
        log.warning("amoeba leaves the window with %.3g estimated tail area; enlarging and retrying", est.tail)
        cx, cy = (window[0] + window[1]) / 2, (window[2] + window[3]) / 2
        wx, wy = (window[1] - window[0]) * 0.75, (window[3] - window[2]) * 0.75
        window = (cx - wx, cx + wx, cy - wy, cy + wy)
    if est.tail > 0.01 * est.value:
        log.warning("window too small: estimated tail area %.3g", est.tail)
    bound = np.pi**2 * float(f.newton_polygon().area())
    if est.value > bound * (1 + 3 * est.relative_sigma):
        raise NumericFailure(f"area {est.value:.6g} exceeds the bound {bound:.6g}")
    return est
