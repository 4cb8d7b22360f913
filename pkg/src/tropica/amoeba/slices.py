"""Amoeba slices and rasters.

For fixed ``x1`` the slice ``A ∩ {first coordinate = x1}`` is computed from the
roots ``w_1(θ), ..., w_d(θ)`` of ``f(e^{x1+iθ}, w)``.  Sorting ``log|w_i|``
gives d continuous order statistics ``r_(1)(θ) <= ... <= r_(d)(θ)``, and the
slice is exactly the union of their ranges ``[min r_(i), max r_(i)]``: the
number of roots inside ``|w| < e^{x2}`` is constant in θ precisely when x2
misses all of those ranges.  No branch tracking is needed.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .poly import ComplexLaurentPolynomial
from .roots import batch_roots

log = logging.getLogger(__name__)

ZOOM_POINTS = 24
ZOOM_ROUNDS = 5


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for one named stream of a run seed."""
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=tuple(stream))
    return np.random.Generator(np.random.Philox(ss))


def worker_count() -> int:
    cap = os.environ.get("TROPICA_THREADS")
    return max(1, int(cap)) if cap else 1


def ordered_map(fn, chunks):
    """Map over chunks, merging results in input order regardless of thread count."""
    n = worker_count()
    if n == 1 or len(chunks) < 2:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(n) as ex:
        return list(ex.map(fn, chunks))


def _log_abs(r: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(r))


def _sorted_logs(f: ComplexLaurentPolynomial, xs: np.ndarray, thetas: np.ndarray, axis: int) -> np.ndarray:
    """Sorted log-moduli of the free-variable roots; shape broadcast(xs, thetas) + (d,)."""
    xs, thetas = np.broadcast_arrays(xs, thetas)
    fixed = np.exp(xs + 1j * thetas).ravel()
    roots = batch_roots(f.slice_coeffs(fixed, axis))
    logs = np.sort(_log_abs(roots), axis=1)
    return logs.reshape(xs.shape + (roots.shape[1],))


def amoeba_slice(f: ComplexLaurentPolynomial, x1: float, M: int = 512, axis: int = 0) -> np.ndarray:
    """Log-moduli of all nonzero finite roots over M angles of the fixed variable."""
    if f.degree_range(1 - axis)[0] == f.degree_range(1 - axis)[1]:
        log.warning("polynomial does not depend on the free variable; slice is empty")
        return np.empty(0)
    thetas = 2 * np.pi * np.arange(M) / M
    logs = _sorted_logs(f, np.full(M, float(x1)), thetas, axis).ravel()
    return logs[np.isfinite(logs)]


def slice_intervals_batch(f: ComplexLaurentPolynomial, xs, M: int = 512, axis: int = 0) -> list[list[tuple[float, float]]]:
    """Merged slice intervals for each fixed coordinate in ``xs``.

    Extremes of every order statistic are located on an M-point angle grid and
    then refined by repeated local zooming.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    lo_k, hi_k = f.degree_range(1 - axis)
    if lo_k == hi_k:
        return [[] for _ in xs]
    C = xs.size
    h = 2 * np.pi / M
    thetas = h * np.arange(M)
    logs = _sorted_logs(f, xs[:, None], thetas[None, :], axis)  # (C, M, d)
    d = logs.shape[2]
    work = np.where(np.isfinite(logs), logs, np.nan)
    extremes = []
    for sign in (1.0, -1.0):  # 1: minimum, -1: maximum
        vals = sign * work
        filled = np.where(np.isnan(vals), np.inf, vals)
        idx = np.argmin(filled, axis=1)  # (C, d)
        best = np.take_along_axis(filled, idx[:, None, :], axis=1)[:, 0, :]
        centre = thetas[idx]
        width = h
        for _ in range(ZOOM_ROUNDS):
            offs = np.linspace(-width, width, ZOOM_POINTS)
            th = centre[:, :, None] + offs[None, None, :]  # (C, d, K)
            xx = np.broadcast_to(xs[:, None, None], th.shape)
            lg = _sorted_logs(f, xx, th, axis)  # (C, d, K, d)
            stat = np.take_along_axis(lg, np.arange(d)[None, :, None, None], axis=3)[..., 0]
            sv = sign * np.where(np.isfinite(stat), stat, np.nan)
            sv = np.where(np.isnan(sv), np.inf, sv)
            j = np.argmin(sv, axis=2)
            cand = np.take_along_axis(sv, j[:, :, None], axis=2)[..., 0]
            better = cand < best
            best = np.where(better, cand, best)
            centre = np.where(better, np.take_along_axis(th, j[:, :, None], axis=2)[..., 0], centre)
            width = 2 * width / (ZOOM_POINTS - 1)
        # roots escaping to 0 or infinity at some angle: unbounded range
        hit_inf = np.any(np.isinf(logs) & (np.sign(logs) == -sign), axis=1)
        best = np.where(hit_inf, -np.inf, best)
        extremes.append(sign * best)
    mins, maxs = extremes
    out = []
    for c in range(C):
        iv = sorted((float(a), float(b)) for a, b in zip(mins[c], maxs[c]) if not (np.isnan(a) or np.isnan(b)))
        merged: list[list[float]] = []
        for a, b in iv:
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        out.append([(a, b) for a, b in merged])
    return out


def slice_intervals(f: ComplexLaurentPolynomial, x1: float, M: int = 512, axis: int = 0):
    return slice_intervals_batch(f, [x1], M, axis)[0]


def in_intervals(values: np.ndarray, intervals, pad: float = 0.0) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    hit = np.zeros(values.shape, dtype=bool)
    for a, b in intervals:
        hit |= (values >= a - pad) & (values <= b + pad)
    return hit


@dataclass
class AmoebaRaster:
    window: tuple[float, float, float, float]  # x0, x1, y0, y1
    nx: int
    ny: int
    member: np.ndarray  # (ny, nx) bool, row index = y
    M: int
    column_intervals: list = field(default_factory=list, repr=False)
    row_intervals: list = field(default_factory=list, repr=False)

    @property
    def hx(self) -> float:
        return (self.window[1] - self.window[0]) / self.nx

    @property
    def hy(self) -> float:
        return (self.window[3] - self.window[2]) / self.ny

    @property
    def xs(self) -> np.ndarray:
        return self.window[0] + (np.arange(self.nx) + 0.5) * self.hx

    @property
    def ys(self) -> np.ndarray:
        return self.window[2] + (np.arange(self.ny) + 0.5) * self.hy

    def cell_of(self, p) -> tuple[int, int]:
        ix = int(np.floor((p[0] - self.window[0]) / self.hx))
        iy = int(np.floor((p[1] - self.window[2]) / self.hy))
        return min(max(iy, 0), self.ny - 1), min(max(ix, 0), self.nx - 1)

    def contains(self, p) -> bool:
        return bool(self.member[self.cell_of(p)])

    def center(self, iy: int, ix: int) -> tuple[float, float]:
        return float(self.xs[ix]), float(self.ys[iy])


def _chunks(arr, size=64):
    return [arr[i : i + size] for i in range(0, len(arr), size)]


def amoeba_raster(f: ComplexLaurentPolynomial, window, resolution, M: int = 512) -> AmoebaRaster:
    """Cell (x, y) is a member iff a slice through its centre, taken in either
    direction, passes within half a cell of the other coordinate."""
    x0, x1, y0, y1 = map(float, window)
    nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
    r = AmoebaRaster((x0, x1, y0, y1), int(nx), int(ny), np.zeros((int(ny), int(nx)), bool), M)
    xs, ys = r.xs, r.ys
    cols = sum(ordered_map(lambda c: slice_intervals_batch(f, c, M, 0), _chunks(xs)), [])
    rows = sum(ordered_map(lambda c: slice_intervals_batch(f, c, M, 1), _chunks(ys)), [])
    for ix, iv in enumerate(cols):
        r.member[:, ix] |= in_intervals(ys, iv, r.hy / 2)
    for iy, iv in enumerate(rows):
        r.member[iy, :] |= in_intervals(xs, iv, r.hx / 2)
    r.column_intervals, r.row_intervals = cols, rows
    return r
