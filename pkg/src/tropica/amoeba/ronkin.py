"""Ronkin function by quadrature over the torus.

One-variable circle averages use the trapezoid rule when every root of the
integrand is well away from the circle (exponential convergence), and a
graded composite Gauss-Legendre rule with breakpoints at the root angles
otherwise, so the integrable log singularity costs nothing in accuracy.

For two variables the inner average over ``w`` is taken from the roots of
the slice polynomial, ``log|c_top| + sum max(x2, log|w_i|)``, and the outer
average over the angle of ``z`` is a trapezoid rule whose nodes are shifted
by a seeded random offset.  Off the amoeba that outer integrand is smooth
and periodic; on it, it is Lipschitz and the jittered estimate is unbiased.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .poly import ComplexLaurentPolynomial
from .roots import batch_roots
from .slices import rng_for

log = logging.getLogger(__name__)

NEAR = 35.0  # roots within NEAR/M of the circle (in log-modulus) trigger the graded rule
GL_ORDER = 12
GRADING = 0.15
LEVELS = 40


class NumericFailure(RuntimeError):
    """A numerical tolerance was breached."""


@dataclass(frozen=True)
class RonkinEstimate:
    point: tuple
    value: float
    nodes: int
    error: float


def _gauss():
    x, w = np.polynomial.legendre.leggauss(GL_ORDER)
    return (x + 1) / 2, w / 2


def _graded_nodes(a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss nodes on [a, b], geometrically graded toward both endpoints."""
    gx, gw = _gauss()
    half = (b - a) / 2
    # panel boundaries as distances from an endpoint: 0, half*s^L, ..., half*s, half
    ds = half * GRADING ** np.arange(LEVELS, -1, -1.0)
    ds = np.concatenate([[0.0], ds])
    lo, hi = ds[:-1], ds[1:]
    width = hi - lo
    pts = lo[:, None] + width[:, None] * gx[None, :]
    wts = width[:, None] * gw[None, :]
    pts, wts = pts.ravel(), wts.ravel()
    return np.concatenate([a + pts, b - pts]), np.concatenate([wts, wts])


def circle_log_mean(coeffs, x: float, M: int = 4096, rng: np.random.Generator | None = None) -> tuple[float, int, float]:
    """``(1/2π) ∫ log|p(e^{x+iθ})| dθ`` for ``p = sum coeffs[m] u^m``.

    Returns (value, node count, error estimate).
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if c.size == 0:
        raise ValueError("zero polynomial")
    nz = np.nonzero(c)[0]
    low = int(nz[0])
    c = c[low:]
    lead = c[-1]
    roots = batch_roots(c[None, :])[0] if c.size > 1 else np.empty(0, complex)
    base = np.log(abs(lead)) + low * x

    def integrand(theta):
        u = np.exp(x + 1j * theta)
        return base + np.sum(np.log(np.abs(u[:, None] - roots[None, :])), axis=1)

    logr = np.log(np.abs(roots)) if roots.size else np.empty(0)
    near = np.abs(logr - x) < NEAR / M
    off = 0.0 if rng is None else float(rng.random())
    if not near.any():
        th = 2 * np.pi * (np.arange(M) + off) / M
        vals = integrand(th)
        v = float(np.mean(vals))
        err = abs(v - float(np.mean(vals[::2])))
        return v, M, err
    angles = np.sort(np.mod(np.angle(roots[near]), 2 * np.pi))
    angles = np.unique(angles)
    bps = np.concatenate([angles, [angles[0] + 2 * np.pi]])
    total, nodes = 0.0, 0
    coarse = 0.0
    gx, gw = _gauss()
    for a, b in zip(bps[:-1], bps[1:]):
        if b - a < 1e-14:
            continue
        pts, wts = _graded_nodes(a, b)
        vals = integrand(pts)
        bad = ~np.isfinite(vals)
        if bad.any():
            log.info("quadrature node on a zero of f; perturbing %d node(s)", int(bad.sum()))
            vals[bad] = integrand(pts[bad] + 1e-13)
        total += float(np.dot(wts, vals))
        nodes += pts.size
        # coarse check: drop the finest half of the grading levels
        keep = np.tile(np.repeat(np.arange(LEVELS + 1) >= LEVELS // 2, GL_ORDER), 2)
        coarse += float(np.dot(wts[keep], vals[keep]))
    v = total / (2 * np.pi)
    # the trapezoid part is exact to rounding away from the roots; the coarse
    # estimate bounds the truncation of the grading
    err = abs(v - coarse / (2 * np.pi))
    return v, nodes, err


def _depends(f: ComplexLaurentPolynomial, axis: int) -> bool:
    lo, hi = f.degree_range(axis)
    return lo != hi


def _univariate(f: ComplexLaurentPolynomial, axis: int):
    """Coefficients in the variable ``axis`` (lowest first) and the fixed other exponent."""
    lo, hi = f.degree_range(axis)
    c = np.zeros(hi - lo + 1, complex)
    for e, a in f.terms:
        c[e[axis] - lo] += a
    return c, lo, f.terms[0][0][1 - axis]


def _outer_trapezoid(f: ComplexLaurentPolynomial, x, M: int, offset: float) -> tuple[float, float]:
    x1, x2 = float(x[0]), float(x[1])
    th = 2 * np.pi * (np.arange(M) + offset) / M
    coeffs = f.slice_coeffs(np.exp(x1 + 1j * th), axis=0)
    kmin = f.degree_range(1)[0]
    nzc = coeffs != 0
    bad = ~nzc.any(axis=1)
    if bad.any():
        log.info("slice polynomial vanishes at %d node(s); perturbing", int(bad.sum()))
        th[bad] += 1e-9
        coeffs = f.slice_coeffs(np.exp(x1 + 1j * th), axis=0)
        nzc = coeffs != 0
    top = coeffs.shape[1] - 1 - np.argmax(nzc[:, ::-1], axis=1)
    lead = coeffs[np.arange(M), top]
    roots = batch_roots(coeffs)
    with np.errstate(divide="ignore"):
        lr = np.log(np.abs(roots))
    contrib = np.where(np.isfinite(lr) | (lr < 0), np.maximum(lr, x2), 0.0)
    contrib = np.where(np.isinf(lr) & (lr > 0), 0.0, contrib)
    vals = np.log(np.abs(lead)) + kmin * x2 + contrib.sum(axis=1)
    v = float(np.mean(vals))
    return v, abs(v - float(np.mean(vals[::2])))


def ronkin_value(f: ComplexLaurentPolynomial, x, M: int = 256, seed: int = 0) -> RonkinEstimate:
    """Estimate ``N_f(x)``; ``x`` may be a scalar for polynomials in ``z`` only."""
    if M < 16:
        raise ValueError("M must be at least 16")
    rng = rng_for(seed, 1)
    xs = (float(x),) if np.isscalar(x) else tuple(float(v) for v in x)
    if len(xs) == 1:
        xs = (xs[0], 0.0)
        if _depends(f, 1):
            raise ValueError("a scalar point needs a polynomial in z only")
    dz, dw = _depends(f, 0), _depends(f, 1)
    if not dz and not dw:
        (j, k), c = f.terms[0]
        return RonkinEstimate(xs, float(np.log(abs(c)) + j * xs[0] + k * xs[1]), 0, 0.0)
    if dz != dw:
        axis = 0 if dz else 1
        c, _, other = _univariate(f, axis)
        lo = f.degree_range(axis)[0]
        v, n, err = circle_log_mean(c, xs[axis], M, rng)
        v += lo * xs[axis] + other * xs[1 - axis]
        return RonkinEstimate(xs, v, n, err)
    v, err = _outer_trapezoid(f, xs, M, float(rng.random()))
    return RonkinEstimate(xs, v, M * (f.degree_range(1)[1] - f.degree_range(1)[0]), err)


def distance_outside(P, p) -> float:
    """Euclidean distance from p to the lattice polygon P (0 inside)."""
    verts = [tuple(float(c) for c in v) for v in P.vertices]
    p = np.asarray(p, dtype=float)
    if len(verts) >= 3 and P.contains((Fraction(p[0]), Fraction(p[1]))):
        return 0.0
    if len(verts) == 1:
        return float(np.linalg.norm(p - verts[0]))
    best = np.inf
    n = len(verts)
    for i in range(n if n > 2 else 1):
        a, b = np.asarray(verts[i]), np.asarray(verts[(i + 1) % n])
        ab = b - a
        t = np.clip(np.dot(p - a, ab) / np.dot(ab, ab), 0.0, 1.0)
        best = min(best, float(np.linalg.norm(p - (a + t * ab))))
    return best


def ronkin_gradient(f: ComplexLaurentPolynomial, x, M: int = 256, step: float = 0.05, seed: int = 0, tol: float = 0.05) -> np.ndarray:
    """Central differences of the Ronkin function; checked against the Newton polygon."""
    x = np.asarray(x, dtype=float)
    g = np.zeros(2)
    for i in range(2):
        e = np.zeros(2)
        e[i] = step
        g[i] = (ronkin_value(f, x + e, M, seed).value - ronkin_value(f, x - e, M, seed).value) / (2 * step)
    d = distance_outside(f.newton_polygon(), g)
    if d > tol:
        raise NumericFailure(f"Ronkin gradient {g.tolist()} lies {d:.3g} outside the Newton polygon")
    return g
