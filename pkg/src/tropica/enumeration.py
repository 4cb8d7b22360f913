"""Lattice-path count of plane tropical curves through points in general position.

Points placed on a line of generic slope induce a linear order ``lam`` on the
lattice points of the Newton polygon.  Curves of genus g through the x+g-1
points correspond to lam-increasing lattice paths with x+g points from the
lam-minimal to the lam-maximal point, each carrying a multiplicity
``mu_plus * mu_minus``.  The counts N(g, polygon) include reducible curves;
:func:`count_N_irr` strips those off by inclusion-exclusion over Minkowski
splittings.
"""

from __future__ import annotations

import itertools
import logging
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from threading import Lock
from typing import Sequence

from . import lattice_polytope as lp
from .lattice_polytope import LatticePolygon, cross

log = logging.getLogger(__name__)

Point = tuple[int, int]


@dataclass(frozen=True)
class LambdaOrder:
    """Linear functional ``a*x + b*y`` used as a total order on lattice points."""

    a: Fraction
    b: Fraction

    def __init__(self, a, b=1):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __call__(self, p: Sequence[int]) -> Fraction:
        return self.a * p[0] + self.b * p[1]

    def check_injective(self, points: Sequence[Point]):
        vals = [self(p) for p in points]
        if len(set(vals)) != len(vals):
            raise ValueError(f"lambda = {self.a}*x + {self.b}*y is not injective on the lattice points")

    @classmethod
    def parse(cls, text: str) -> "LambdaOrder":
        """``"a/b"`` sets the slope perturbation: lam = y - (a/b) x."""
        parts = text.split(",")
        if len(parts) == 2:
            return cls(Fraction(parts[0]), Fraction(parts[1]))
        return cls(-Fraction(text), 1)


DEFAULT_LAMBDA = LambdaOrder(Fraction(-1, 1009), 1)


@dataclass(frozen=True)
class PathMultiplicity:
    mu_plus: int
    mu_minus: int

    @property
    def mu(self) -> int:
        return self.mu_plus * self.mu_minus


class _PolygonPaths:
    """Per-(polygon, lam) data shared by path generation and multiplicities."""

    def __init__(self, P: LatticePolygon, lam: LambdaOrder):
        if P.degenerate:
            raise ValueError("lattice-path counting needs a two-dimensional polygon")
        self.P = P
        self.lam = lam
        pts = P.lattice_points()
        lam.check_injective(pts)
        self.points = sorted(pts, key=lam)
        self.pmin, self.pmax = self.points[0], self.points[-1]
        self.alpha_plus, self.alpha_minus = self._boundary_chains()
        self._memo: dict = {}
        self._lock = Lock()
        self.steps = 0

    def _boundary_chains(self):
        ring: list[Point] = []
        for a, b in self.P.edges():
            n = lp.lattice_length((a, b))
            step = ((b[0] - a[0]) // n, (b[1] - a[1]) // n)
            ring.extend((a[0] + k * step[0], a[1] + k * step[1]) for k in range(n))
        i = ring.index(self.pmin)
        ring = ring[i:] + ring[:i]
        j = ring.index(self.pmax)
        ccw = tuple(ring[: j + 1])
        cw = tuple([ring[0]] + ring[j:][::-1])
        # clockwise chain is the "+" side, counterclockwise the "-" side
        return cw, ccw

    def inside(self, p) -> bool:
        return self.P.contains(p)

    def mu_side(self, path: tuple, side: int) -> int:
        """Recursive multiplicity on one side (+1: clockwise chain, left turns)."""
        key = (path, side)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        target = self.alpha_plus if side > 0 else self.alpha_minus
        if path == target:
            val = 1
        else:
            val = 0
            for j in range(1, len(path) - 1):
                c = cross(path[j - 1], path[j], path[j + 1])
                if side * c > 0:
                    self.steps += 1
                    shortcut = path[:j] + path[j + 1:]
                    val = abs(c) * self.mu_side(shortcut, side)
                    a, b, q = path[j - 1], path[j + 1], path[j]
                    flip = (a[0] + b[0] - q[0], a[1] + b[1] - q[1])
                    lam = self.lam
                    if self.inside(flip) and lam(a) < lam(flip) < lam(b):
                        val += self.mu_side(path[:j] + (flip,) + path[j + 1:], side)
                    break
        with self._lock:
            self._memo[key] = val
        return val


@lru_cache(maxsize=64)
def _context(P: LatticePolygon, lam: LambdaOrder) -> _PolygonPaths:
    return _PolygonPaths(P, lam)


def end_count(P: LatticePolygon) -> int:
    return lp.boundary_points(P)


def generate_paths(P: LatticePolygon, lam: LambdaOrder = DEFAULT_LAMBDA, g: int = 0) -> list[tuple]:
    """All lam-increasing sequences of x+g lattice points from the lam-min to the lam-max point."""
    ctx = _context(P, lam)
    k = end_count(P) + g
    middle = ctx.points[1:-1]
    if k < 2 or k - 2 > len(middle):
        return []
    return [
        (ctx.pmin,) + combo + (ctx.pmax,)
        for combo in itertools.combinations(middle, k - 2)
    ]


def path_multiplicity(path: Sequence[Point], P: LatticePolygon, lam: LambdaOrder = DEFAULT_LAMBDA) -> PathMultiplicity:
    ctx = _context(P, lam)
    path = tuple(tuple(p) for p in path)
    vals = [lam(p) for p in path]
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValueError("path is not lambda-increasing")
    if not all(ctx.inside(p) for p in path):
        raise ValueError("path leaves the polygon")
    if path[0] != ctx.pmin or path[-1] != ctx.pmax:
        return PathMultiplicity(0, 0)
    return PathMultiplicity(ctx.mu_side(path, 1), ctx.mu_side(path, -1))


@dataclass
class CountResult:
    N: int
    paths: list[tuple[tuple, PathMultiplicity]]

    def positive(self):
        return [(p, m) for p, m in self.paths if m.mu > 0]

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "paths": [
                {"points": [list(p) for p in path], "mu_plus": m.mu_plus, "mu_minus": m.mu_minus}
                for path, m in self.positive()
            ],
        }


def max_workers() -> int:
    cap = os.environ.get("TROPICA_THREADS")
    return max(1, int(cap)) if cap else 1


def count_paths(g: int, P: LatticePolygon, lam: LambdaOrder = DEFAULT_LAMBDA) -> CountResult:
    """Sum of path multiplicities, with the per-path audit trail."""
    paths = generate_paths(P, lam, g)
    workers = max_workers()
    if workers > 1 and len(paths) > 256:
        with ThreadPoolExecutor(workers) as ex:
            mults = list(ex.map(lambda p: path_multiplicity(p, P, lam), paths))
    else:
        mults = [path_multiplicity(p, P, lam) for p in paths]
    pairs = list(zip(paths, mults))
    return CountResult(sum(m.mu for m in mults), pairs)


def count_N(g: int, P: LatticePolygon, lam: LambdaOrder = DEFAULT_LAMBDA) -> int:
    if P.degenerate:
        return _segment_count(g, P)
    return count_paths(g, P, lam).N


def _segment_count(g: int, P: LatticePolygon) -> int:
    # Curves with a segment Newton polygon of lattice length L are unions of
    # L parallel "lines", each through one point: genus 1 - L, one curve.
    if P.kind == "point":
        return 0
    L = lp.lattice_length(tuple(P.vertices))
    return 1 if g == 1 - L else 0


def kontsevich_oracle(d: int) -> int:
    """Rational plane curves of degree d through 3d-1 general points (WDVV recursion)."""
    if d < 1:
        raise ValueError("degree must be positive")
    N = {1: 1}
    for e in range(2, d + 1):
        total = 0
        for d1 in range(1, e):
            d2 = e - d1
            total += N[d1] * N[d2] * d1 * d1 * d2 * (
                d2 * comb(3 * e - 4, 3 * d1 - 2) - d1 * comb(3 * e - 4, 3 * d1 - 1)
            )
        N[e] = total
    return N[d]


# ----------------------------------------------------- irreducible counts


class Unsupported(Exception):
    """Raised when a requested count is outside what the splitting machinery covers."""


def _zero_sum_blocks(vectors: tuple) -> list[tuple]:
    """Nonempty sub-multisets (as sorted tuples) of ``vectors`` summing to zero."""
    counts = Counter(vectors)
    keys = sorted(counts)
    out = []
    for mult in itertools.product(*[range(counts[k] + 1) for k in keys]):
        if not any(mult):
            continue
        sx = sum(m * k[0] for m, k in zip(mult, keys))
        sy = sum(m * k[1] for m, k in zip(mult, keys))
        if sx == 0 and sy == 0:
            out.append(tuple(sorted(itertools.chain.from_iterable([k] * m for m, k in zip(mult, keys)))))
    return out


def _block_partitions(vectors: tuple, smallest: tuple = ()):
    """Multiset partitions of ``vectors`` into zero-sum blocks, blocks in sorted order."""
    if not vectors:
        yield ()
        return
    for block in _zero_sum_blocks(vectors):
        if block < smallest:
            continue
        rest = list(vectors)
        for v in block:
            rest.remove(v)
        for tail in _block_partitions(tuple(sorted(rest)), block):
            yield (block,) + tail


def _polygon_of(block) -> LatticePolygon:
    return lp.polygon_from_edge_vectors(block).normalized()


def _ends(P: LatticePolygon) -> int:
    if P.kind == "segment":
        return 2 * lp.lattice_length(tuple(P.vertices))
    return lp.boundary_points(P)


def _max_genus(P: LatticePolygon) -> int:
    return 0 if P.degenerate else lp.interior_points(P)


_irr_memo: dict = {}


def count_N_irr(g: int, P: LatticePolygon, lam: LambdaOrder = DEFAULT_LAMBDA) -> int:
    """Irreducible curves of genus g: N(g, P) minus all splittings into components.

    A union of components (P_i, g_i) has genus sum(g_i) - k + 1 and passes
    through sum(x_i + g_i - 1) points; the points are distributed among the
    components multinomially.
    """
    key = (g, P.normalized())
    if key in _irr_memo:
        return _irr_memo[key]
    Pn = P.normalized()
    if Pn.kind == "point":
        raise Unsupported("a point has no curves")
    if Pn.kind == "segment":
        val = 1 if (g == 0 and lp.lattice_length(tuple(Pn.vertices)) == 1) else 0
        _irr_memo[key] = val
        return val
    if g < 0 or g > _max_genus(Pn):
        _irr_memo[key] = 0
        return 0
    total = count_N(g, Pn, lam)
    vectors = tuple(sorted(lp.edge_vectors(Pn)))
    npts = _ends(Pn) + g - 1
    reducible = 0
    for blocks in _block_partitions(vectors):
        if len(blocks) < 2:
            continue
        polys = [_polygon_of(b) for b in blocks]
        reducible += _split_count(polys, g, npts, lam)
    val = total - reducible
    if val < 0:
        raise ArithmeticError(f"negative irreducible count for g={g}, {Pn.vertices}")
    _irr_memo[key] = val
    return val


def _split_count(polys, g, npts, lam) -> int:
    k = len(polys)
    target = g + k - 1  # sum of component genera
    ranges = [range(0, _max_genus(p) + 1) for p in polys]
    total = 0
    for genera in itertools.product(*ranges):
        if sum(genera) != target:
            continue
        sizes = [_ends(p) + gi - 1 for p, gi in zip(polys, genera)]
        if sum(sizes) != npts or any(s < 1 for s in sizes):
            continue
        prod = 1
        for p, gi in zip(polys, genera):
            prod *= count_N_irr(gi, p, lam)
            if not prod:
                break
        if not prod:
            continue
        ways = factorial(npts)
        for s in sizes:
            ways //= factorial(s)
        # identical (polygon, genus) components are unordered
        sym = Counter(zip((p.vertices for p in polys), genera))
        for c in sym.values():
            ways //= factorial(c)
        total += ways * prod
    return total
