"""Patchworking families ``f_t = sum a_j t^{v(j)} z^j`` and their rescaled amoebas."""

from __future__ import annotations

from typing import Mapping

import numpy as np
from scipy.spatial.distance import directed_hausdorff

from ..hypersurface import TropicalComplex, corner_locus
from ..trop_core import TropicalPolynomial, as_rational
from .poly import ComplexLaurentPolynomial
from .slices import amoeba_raster


def dequant_family(coeffs: Mapping, t: float, lift: Mapping | None = None) -> ComplexLaurentPolynomial:
    """The member at ``t > 1`` of the family with phases ``coeffs`` and exponent lift ``v``."""
    if not t > 1:
        raise ValueError("t must exceed 1")
    lift = lift or {}
    return ComplexLaurentPolynomial(
        {tuple(e): complex(a) * float(t) ** float(lift.get(tuple(e), 0)) for e, a in coeffs.items()}
    )


def limit_polynomial(coeffs: Mapping, lift: Mapping | None = None) -> TropicalPolynomial:
    lift = lift or {}
    return TropicalPolynomial({tuple(e): as_rational(lift.get(tuple(e), 0)) for e in coeffs})


def rescaled_amoeba_points(f: ComplexLaurentPolynomial, t: float, window, resolution: int, M: int = 512) -> np.ndarray:
    """Centres of member cells of ``Log_t(V(f)) ∩ window``, in rescaled coordinates."""
    s = np.log(t)
    r = amoeba_raster(f, tuple(float(v) * s for v in window), resolution, M)
    iy, ix = np.nonzero(r.member)
    return np.column_stack([r.xs[ix], r.ys[iy]]) / s


def _clip_segment(p, q, window):
    """Liang-Barsky clipping of the segment p + s (q - p), s in [0, 1]."""
    x0, x1, y0, y1 = window
    d = q - p
    lo, hi = 0.0, 1.0
    for pk, qk in ((-d[0], p[0] - x0), (d[0], x1 - p[0]), (-d[1], p[1] - y0), (d[1], y1 - p[1])):
        if pk == 0:
            if qk < 0:
                return None
            continue
        s = qk / pk
        if pk < 0:
            lo = max(lo, s)
        else:
            hi = min(hi, s)
    if lo > hi:
        return None
    return p + lo * d, p + hi * d


def complex_points(C: TropicalComplex, window, spacing: float) -> np.ndarray:
    """Points along the edges, rays and lines of ``C`` clipped to ``window``."""
    span = 4 * max(abs(float(v)) for v in window) + 1
    segs = []
    V = [np.asarray([float(c) for c in v]) for v in C.vertices]
    for e in C.edges:
        segs.append((V[e.u], V[e.v]))
    for r in C.rays:
        d = np.asarray(r.direction, float)
        segs.append((V[r.vertex], V[r.vertex] + span * d / np.linalg.norm(d)))
    for ln in C.lines:
        p = np.asarray([float(c) for c in ln.point])
        d = np.asarray(ln.direction, float)
        d = span * d / np.linalg.norm(d)
        segs.append((p - d, p + d))
    pts = [V_ for V_ in V if window[0] <= V_[0] <= window[1] and window[2] <= V_[1] <= window[3]]
    for p, q in segs:
        c = _clip_segment(p, q, window)
        if c is None:
            continue
        a, b = c
        n = max(2, int(np.ceil(np.linalg.norm(b - a) / spacing)) + 1)
        pts.extend(a + np.linspace(0, 1, n)[:, None] * (b - a))
    return np.asarray(pts, float).reshape(-1, 2)


def hausdorff_distance(A, B, window=None) -> float:
    """Symmetric Hausdorff distance between two point clouds clipped to ``window``."""
    A = np.asarray(A, float).reshape(-1, 2)
    B = np.asarray(B, float).reshape(-1, 2)
    if window is not None:
        x0, x1, y0, y1 = window

        def clip(P):
            return P[(P[:, 0] >= x0) & (P[:, 0] <= x1) & (P[:, 1] >= y0) & (P[:, 1] <= y1)]

        A, B = clip(A), clip(B)
    if len(A) == 0 and len(B) == 0:
        return 0.0
    if len(A) == 0 or len(B) == 0:
        return float("inf")
    return float(max(directed_hausdorff(A, B, seed=0)[0], directed_hausdorff(B, A, seed=0)[0]))


def dequant_distances(coeffs: Mapping, ts, window=(-5, 5, -5, 5), resolution: int = 400, lift: Mapping | None = None, M: int = 512) -> list[float]:
    """``d_H(Log_t(A_t) ∩ K, corner locus ∩ K)`` for each t."""
    C = corner_locus(limit_polynomial(coeffs, lift))
    pitch = (window[1] - window[0]) / resolution
    trop = complex_points(C, window, pitch / 4)
    out = []
    for t in ts:
        A = rescaled_amoeba_points(dequant_family(coeffs, t, lift), t, window, resolution, M)
        out.append(hausdorff_distance(A, trop, window))
    return out
