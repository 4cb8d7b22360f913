"""Batched simultaneous root finding (Aberth-Ehrlich) with an eigenvalue fallback.

Numeric contract: every returned root satisfies a relative Newton-step
criterion of 1e-12 or comes from the companion-matrix eigenvalues.
Leading zero coefficients produce roots at infinity, trailing zeros roots
at the origin.
"""

from __future__ import annotations

import numpy as np

TOL = 1e-12
MAX_ITER = 200


def _companion_roots(c: np.ndarray) -> np.ndarray:
    return np.roots(c[::-1])


def _aberth(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Aberth iteration on a batch of monic-degree polynomials.

    ``c`` has shape (B, d+1), lowest power first, with nonzero ends.
    Returns (roots (B, d), converged mask (B,)).
    """
    B, n1 = c.shape
    d = n1 - 1
    lead = c[:, -1:]
    # radius guess from the geometric mean of root moduli
    r0 = np.abs(c[:, :1] / lead) ** (1.0 / d)
    ang = 2 * np.pi * (np.arange(d) + 0.25) / d + 0.4
    z = r0 * np.exp(1j * ang)[None, :]
    dc = c[:, 1:] * np.arange(1, n1)[None, :]
    active = np.ones(B, dtype=bool)
    for _ in range(MAX_ITER):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        zz = z[idx]
        p = np.zeros_like(zz)
        dp = np.zeros_like(zz)
        for m in range(d, -1, -1):
            p = p * zz + c[idx, m : m + 1]
        for m in range(d - 1, -1, -1):
            dp = dp * zz + dc[idx, m : m + 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = zz[:, :, None] - zz[:, None, :]
            np.einsum("bii->bi", diff)[...] = np.inf
            s = np.sum(1.0 / diff, axis=2)
            step = ratio / (1.0 - ratio * s)
        step = np.where(np.isfinite(step), step, 0.0)
        zz = zz - step
        z[idx] = zz
        scale = np.maximum(np.abs(zz), 1e-300)
        done = np.all(np.abs(step) <= TOL * scale, axis=1) & np.all(np.isfinite(zz), axis=1)
        active[idx[done]] = False
    return z, ~active


def _quadratic(c: np.ndarray) -> np.ndarray:
    """Cancellation-free quadratic formula for rows c0 + c1 u + c2 u^2 (c0, c2 != 0)."""
    c0, c1, c2 = c[:, 0], c[:, 1], c[:, 2]
    disc = np.sqrt(c1 * c1 - 4 * c0 * c2)
    # pick the sign that avoids subtracting nearly equal numbers
    sgn = np.where((np.conj(c1) * disc).real >= 0, 1.0, -1.0)
    q = -0.5 * (c1 + sgn * disc)
    return np.stack([q / c2, c0 / q], axis=1)


def batch_roots(coeffs) -> np.ndarray:
    """Roots of each row of ``coeffs`` (lowest power first).

    Output has shape (B, D) with D = number of columns - 1; rows of lower
    effective degree are padded with ``inf`` and zero roots are reported as 0.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    B, n1 = c.shape
    D = n1 - 1
    out = np.full((B, D), np.inf + 0j, dtype=complex)
    if D == 0:
        return out
    nz = c != 0
    lo = np.where(nz.any(axis=1), np.argmax(nz, axis=1), 0)
    hi = np.where(nz.any(axis=1), n1 - 1 - np.argmax(nz[:, ::-1], axis=1), -1)
    groups: dict[tuple[int, int], list[int]] = {}
    for b in range(B):
        if hi[b] < 0:
            raise ValueError("identically zero slice polynomial")
        groups.setdefault((int(lo[b]), int(hi[b])), []).append(b)
    for (l, h), rows in groups.items():
        rows = np.asarray(rows)
        out[rows, :l] = 0.0
        deg = h - l
        if deg == 0:
            continue
        sub = c[rows, l : h + 1]
        if deg == 1:
            out[rows, l] = -sub[:, 0] / sub[:, 1]
            continue
        if deg == 2:
            out[rows, l : l + 2] = _quadratic(sub)
            continue
        z, ok = _aberth(sub)
        for k in np.nonzero(~ok)[0]:
            z[k] = _companion_roots(sub[k])
        out[rows, l:h] = z
    return out
