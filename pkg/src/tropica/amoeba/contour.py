"""Critical locus of the logarithmic Gauss map.

Along a column ``|z| = e^{x1}`` the roots ``w(θ)`` of ``f(e^{x1+iθ}, w)`` move
with ``d log|w| / dθ = Im(z f_z / (w f_w))``.  The critical points are the
zeros of that quantity; they are located by sign changes on the angle grid
and refined by bisection, following each root by nearest-neighbour matching.
"""

from __future__ import annotations

import itertools
import logging

import numpy as np
from scipy.optimize import linear_sum_assignment

from .poly import ComplexLaurentPolynomial
from .roots import batch_roots

log = logging.getLogger(__name__)

BISECT = 45
ZERO = 1e-12


def _gauss_ratio(f, ez, ew, z, w):
    with np.errstate(divide="ignore", invalid="ignore"):
        return (ez(z, w) / ew(z, w)).imag


def _match(prev: np.ndarray, cur: np.ndarray) -> np.ndarray:
    """Permutation of ``cur`` (per row) closest to ``prev``."""
    d = cur.shape[1]
    if d > 5:
        out = np.empty_like(cur)
        for b in range(cur.shape[0]):
            cost = np.abs(prev[b][:, None] - cur[b][None, :])
            _, col = linear_sum_assignment(np.where(np.isfinite(cost), cost, 1e300))
            out[b] = cur[b][col]
        return out
    perms = np.asarray(list(itertools.permutations(range(d))))
    cand = cur[:, perms]  # (B, P, d)
    cost = np.abs(cand - prev[:, None, :])
    cost = np.where(np.isfinite(cost), cost, 1e300).sum(axis=2)
    return cand[np.arange(cur.shape[0]), np.argmin(cost, axis=1)]


def _nearest(target: np.ndarray, roots: np.ndarray) -> np.ndarray:
    d = np.abs(roots - target[:, None])
    d = np.where(np.isfinite(d), d, np.inf)
    return roots[np.arange(len(target)), np.argmin(d, axis=1)]


def log_gauss_contour(f: ComplexLaurentPolynomial, window, resolution: int, M: int = 512) -> np.ndarray:
    """Points ``(x1, x2)`` of ``Log`` of the critical locus inside ``window``."""
    ez, ew = f.euler(0), f.euler(1)
    if ew is None or ez is None:
        log.warning("polynomial in one variable only; the amoeba has no curved boundary")
        return np.empty((0, 2))
    x0, x1, y0, y1 = map(float, window)
    xs = x0 + (np.arange(resolution) + 0.5) * (x1 - x0) / resolution
    thetas = 2 * np.pi * np.arange(M + 1) / M
    pts = []
    skipped = 0
    C = xs.size
    Z = np.exp(xs[:, None] + 1j * thetas[None, :])  # (C, M+1)
    R = batch_roots(f.slice_coeffs(Z.ravel(), 0)).reshape(C, M + 1, -1)
    d = R.shape[2]
    # follow the roots around the circle
    for k in range(1, M + 1):
        R[:, k] = _match(R[:, k - 1], R[:, k])
    ZZ = np.repeat(Z[:, :, None], d, axis=2)
    # roots at 0 from a Laurent shift and padded roots at infinity are not on V
    finite = np.isfinite(R) & (R != 0)
    g = np.where(finite, _gauss_ratio(f, ez, ew, ZZ, np.where(finite, R, 1.0)), np.nan)
    # exact zeros on the grid (real points of real curves land here)
    for c, k, i in zip(*np.nonzero(np.abs(g[:, :-1]) < ZERO)):
        pts.append((xs[c], float(np.log(abs(R[c, k, i])))))
    a, b = g[:, :-1], g[:, 1:]
    cs, ks, ids = np.nonzero((a * b < 0) & (np.abs(a) >= ZERO) & (np.abs(b) >= ZERO))
    if cs.size:
        xx = xs[cs]
        lo, hi = thetas[ks], thetas[ks + 1]
        glo = a[cs, ks, ids]
        wlo, whi = R[cs, ks, ids], R[cs, ks + 1, ids]
        for _ in range(BISECT):
            mid = (lo + hi) / 2
            zm = np.exp(xx + 1j * mid)
            wm = _nearest((wlo + whi) / 2, batch_roots(f.slice_coeffs(zm, 0)))
            gm = _gauss_ratio(f, ez, ew, zm, wm)
            left = np.sign(gm) == np.sign(glo)
            lo, hi = np.where(left, mid, lo), np.where(left, hi, mid)
            glo = np.where(left, gm, glo)
            wlo, whi = np.where(left, wm, wlo), np.where(left, whi, wm)
        wf = (wlo + whi) / 2
        zf = np.exp(xx + 1j * (lo + hi) / 2)
        res = np.abs(f(zf, wf)) / np.maximum(1.0, np.abs(f(np.abs(zf), np.abs(wf))))
        ok = res < 1e-8
        # a sign change across a pole of the ratio marks a branch point, not a fold
        gfin = np.abs(_gauss_ratio(f, ez, ew, zf, wf))
        ok &= gfin < 1e-6 * np.maximum(1.0, np.abs(a[cs, ks, ids]) + np.abs(b[cs, ks, ids]))
        skipped = int((~ok).sum())
        pts.extend(zip(xx[ok], np.log(np.abs(wf[ok]))))
    if skipped:
        log.info("discarded %d sign changes at poles of the Gauss ratio", skipped)
    P = np.asarray(pts, float).reshape(-1, 2)
    P = P[(P[:, 1] >= y0) & (P[:, 1] <= y1)]
    if len(P):
        P = np.unique(np.round(P, 12), axis=0)
    return P
