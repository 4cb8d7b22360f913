"""Exact lattice polygons: hulls, lattice counts, mixed areas, regular subdivisions.

Everything here is integer/rational arithmetic.  Lifts follow the max-plus
convention: a subdivision is read off the *upper* hull of the lifted points.
To use a lower-hull (min-convention) lift, negate it first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Point = tuple[int, int]


def cross(o, a, b):
    """z-component of (a - o) x (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for c in v:
        g = gcd(g, int(c))
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(int(c) // g for c in v)


def convex_hull(points: Iterable[Sequence]) -> list:
    """Counterclockwise extreme points (Andrew's monotone chain), exact.

    Collinear boundary points are dropped.  Works for any exact number type.
    """
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


@dataclass(frozen=True)
class LatticePolygon:
    """Counterclockwise lattice polygon; ``kind`` flags the degenerate cases."""

    vertices: tuple[Point, ...]
    kind: str = "polygon"  # "polygon", "segment" or "point"

    @classmethod
    def from_vertices(cls, vertices: Iterable[Sequence[int]]) -> "LatticePolygon":
        return newton_polygon(vertices)

    @property
    def degenerate(self) -> bool:
        return self.kind != "polygon"

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        if self.kind == "point":
            return []
        if self.kind == "segment":
            return [(vs[0], vs[1])]
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def doubled_area(self) -> int:
        if self.degenerate:
            return 0
        vs = self.vertices
        return sum(det2(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    def area(self) -> Fraction:
        return Fraction(self.doubled_area(), 2)

    def contains(self, p: Sequence, strict: bool = False) -> bool:
        vs = self.vertices
        if self.kind == "point":
            return not strict and tuple(p) == vs[0]
        if self.kind == "segment":
            if strict or cross(vs[0], vs[1], p) != 0:
                return False
            return min(vs[0][0], vs[1][0]) <= p[0] <= max(vs[0][0], vs[1][0]) and min(
                vs[0][1], vs[1][1]
            ) <= p[1] <= max(vs[0][1], vs[1][1])
        for a, b in self.edges():
            c = cross(a, b, p)
            if c < 0 or (strict and c == 0):
                return False
        return True

    def lattice_points(self) -> list[Point]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return [
            (x, y)
            for x in range(min(xs), max(xs) + 1)
            for y in range(min(ys), max(ys) + 1)
            if self.contains((x, y))
        ]

    def translate(self, d: Sequence[int]) -> "LatticePolygon":
        return LatticePolygon(tuple((v[0] + d[0], v[1] + d[1]) for v in self.vertices), self.kind)

    def normalized(self) -> "LatticePolygon":
        """Translate so the lexicographically smallest vertex is the origin."""
        m = min(self.vertices)
        return self.translate((-m[0], -m[1]))

    def to_dict(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "LatticePolygon":
        return newton_polygon([tuple(v) for v in data["vertices"]])


def newton_polygon(support: Iterable[Sequence[int]]) -> LatticePolygon:
    pts = [(int(p[0]), int(p[1])) for p in support]
    if not pts:
        raise ValueError("empty support")
    hull = convex_hull(pts)
    if len(hull) == 1:
        return LatticePolygon((hull[0],), "point")
    if len(hull) == 2:
        return LatticePolygon(tuple(hull), "segment")
    return LatticePolygon(tuple(hull), "polygon")


def simplex(d: int) -> LatticePolygon:
    """The triangle with vertices (0,0), (d,0), (0,d)."""
    return LatticePolygon(((0, 0), (d, 0), (0, d)))


@dataclass(frozen=True)
class LatticeSegment:
    a: Point
    b: Point

    @property
    def degenerate(self) -> bool:
        return self.a == self.b


def lattice_length(s: LatticeSegment | tuple) -> int:
    a, b = (s.a, s.b) if isinstance(s, LatticeSegment) else s
    if tuple(a) == tuple(b):
        raise ValueError("degenerate segment has no lattice length")
    return gcd(abs(b[0] - a[0]), abs(b[1] - a[1]))


def boundary_points(P: LatticePolygon) -> int:
    if P.degenerate:
        raise ValueError("boundary count needs a two-dimensional polygon")
    return sum(lattice_length(e) for e in P.edges())


def interior_points(P: LatticePolygon) -> int:
    if P.degenerate:
        raise ValueError("interior count needs a two-dimensional polygon")
    # Pick: 2A = 2I + B - 2
    return (P.doubled_area() - boundary_points(P) + 2) // 2


def minkowski_sum(P: LatticePolygon, Q: LatticePolygon) -> LatticePolygon:
    return newton_polygon(
        (p[0] + q[0], p[1] + q[1]) for p in P.vertices for q in Q.vertices
    )


def mixed_area(P: LatticePolygon, Q: LatticePolygon) -> int:
    """Normalized mixed area Area(P+Q) - Area(P) - Area(Q); the Bernstein count."""
    d = minkowski_sum(P, Q).doubled_area() - P.doubled_area() - Q.doubled_area()
    assert d % 2 == 0
    return d // 2


def edge_vectors(P: LatticePolygon) -> list[Point]:
    """Primitive edge vectors of the boundary, each repeated by its lattice length."""
    out = []
    for a, b in P.edges():
        n = lattice_length((a, b))
        step = ((b[0] - a[0]) // n, (b[1] - a[1]) // n)
        out.extend([step] * n)
    if P.kind == "segment":
        a, b = P.vertices
        n = lattice_length((a, b))
        out.extend([((a[0] - b[0]) // n, (a[1] - b[1]) // n)] * n)
    return out


def polygon_from_edge_vectors(vectors: Sequence[Point]) -> LatticePolygon:
    """Polygon (up to translation) whose boundary is the given zero-sum vectors."""
    import math

    if sum(v[0] for v in vectors) or sum(v[1] for v in vectors):
        raise ValueError("edge vectors must sum to zero")
    ordered = sorted(vectors, key=lambda v: math.atan2(v[1], v[0]))
    pts = [(0, 0)]
    for v in ordered:
        x, y = pts[-1]
        pts.append((x + v[0], y + v[1]))
    return newton_polygon(pts)


# ---------------------------------------------------------------- 1-D hulls


def upper_hull_1d(points: Sequence[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    pts = sorted(points)
    hull: list = []
    for p in pts:
        if hull and hull[-1][0] == p[0]:
            if hull[-1][1] >= p[1]:
                continue
            hull.pop()
        while len(hull) >= 2 and cross(hull[-2], hull[-1], p) >= 0:
            hull.pop()
        hull.append(p)
    return hull


def interpolate_hull_1d(hull, a) -> Fraction:
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        if x0 <= a <= x1:
            return Fraction(y0) + Fraction(y1 - y0) * Fraction(a - x0, x1 - x0)
    if len(hull) == 1 and hull[0][0] == a:
        return Fraction(hull[0][1])
    raise ValueError(f"{a} outside hull range")


# ------------------------------------------------------ regular subdivision


@dataclass(frozen=True)
class Plane:
    """Affine function ``h(j) = c + gx*j1 + gy*j2`` with rational coefficients."""

    gx: Fraction
    gy: Fraction
    c: Fraction

    def __call__(self, p) -> Fraction:
        return self.c + self.gx * p[0] + self.gy * p[1]


def _plane_through(p, q, r) -> Plane | None:
    (x1, y1, z1), (x2, y2, z2), (x3, y3, z3) = p, q, r
    d = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
    if d == 0:
        return None
    gx = Fraction((z2 - z1) * (y3 - y1) - (z3 - z1) * (y2 - y1)) / d
    gy = Fraction((x2 - x1) * (z3 - z1) - (x3 - x1) * (z2 - z1)) / d
    c = Fraction(z1) - gx * x1 - gy * y1
    return Plane(gx, gy, c)


@dataclass(frozen=True)
class Cell:
    polygon: LatticePolygon
    plane: Plane
    marked: frozenset  # lattice points of the lift lying on the facet


@dataclass
class RegularSubdivision:
    parent: LatticePolygon
    cells: list[Cell]
    lift: dict = field(default_factory=dict)

    def edge_cells(self) -> dict[tuple[Point, Point], list[int]]:
        """Map each subdivision edge (sorted endpoints) to the indices of its cells."""
        out: dict[tuple[Point, Point], list[int]] = {}
        for i, cell in enumerate(self.cells):
            for a, b in cell.polygon.edges():
                out.setdefault(tuple(sorted((a, b))), []).append(i)
        return out

    def interior_edges(self):
        return [e for e, cs in self.edge_cells().items() if len(cs) == 2]

    def boundary_edges(self):
        return [e for e, cs in self.edge_cells().items() if len(cs) == 1]

    def lifted_out(self) -> list[Point]:
        """Lift points strictly below the upper hull (invisible tropically)."""
        on = set().union(*(c.marked for c in self.cells)) if self.cells else set()
        return sorted(p for p in self.lift if p not in on)

    def is_triangulation(self) -> bool:
        return all(len(c.polygon.vertices) == 3 for c in self.cells)

    def is_unimodular(self) -> bool:
        return all(len(c.polygon.vertices) == 3 and c.polygon.doubled_area() == 1 for c in self.cells)

    def to_dict(self) -> dict:
        return {
            "parent": self.parent.to_dict(),
            "cells": [c.polygon.to_dict() for c in self.cells],
            "lift": [{"point": list(p), "value": str(v)} for p, v in sorted(self.lift.items())],
        }


def regular_subdivision(P: LatticePolygon | None, lift: Mapping) -> RegularSubdivision:
    """Cells are the projections of the upper facets of ``{(j, lift(j))}``."""
    from .trop_core import as_rational

    pts = {(int(p[0]), int(p[1])): as_rational(v) for p, v in lift.items()}
    hull = newton_polygon(pts)
    if hull.degenerate:
        raise ValueError("need at least 3 non-collinear lifted points")
    if P is None:
        P = hull
    elif set(P.vertices) != set(hull.vertices):
        raise ValueError("lift support does not span the parent polygon")

    lifted = [(p[0], p[1], v) for p, v in pts.items()]
    cells: list[Cell] = []
    seen: list[frozenset] = []
    for a, b, c in itertools.combinations(lifted, 3):
        trio = {a[:2], b[:2], c[:2]}
        if any(trio <= s for s in seen):
            continue
        plane = _plane_through(a, b, c)
        if plane is None:
            continue
        ok = True
        on = []
        for q in lifted:
            h = plane(q)
            if q[2] > h:
                ok = False
                break
            if q[2] == h:
                on.append(q[:2])
        if not ok:
            continue
        marked = frozenset(on)
        seen.append(marked)
        cells.append(Cell(newton_polygon(marked), plane, marked))

    cells.sort(key=lambda cl: cl.polygon.vertices)
    total = sum(cl.polygon.doubled_area() for cl in cells)
    assert total == P.doubled_area(), "subdivision cells do not tile the parent"
    return RegularSubdivision(P, cells, dict(pts))


def concave_envelope_2d(coefs: Mapping) -> dict[Point, Fraction]:
    """Upper-hull values of the lift at all lattice points of its Newton polygon."""
    from .trop_core import as_rational

    pts = {tuple(p): as_rational(v) for p, v in coefs.items()}
    P = newton_polygon(pts)
    if P.kind == "point":
        (p, v), = pts.items()
        return {p: v}
    if P.kind == "segment":
        a, b = P.vertices
        n = lattice_length((a, b))
        step = ((b[0] - a[0]) // n, (b[1] - a[1]) // n)
        k = 0 if step[0] else 1
        base = a
        param = []
        for p, v in pts.items():
            param.append(((p[k] - base[k]) // step[k], v))
        hull = upper_hull_1d(param)
        return {
            (base[0] + i * step[0], base[1] + i * step[1]): interpolate_hull_1d(hull, i)
            for i in range(n + 1)
        }
    sub = regular_subdivision(P, pts)
    out = {}
    for q in P.lattice_points():
        for cell in sub.cells:
            if cell.polygon.contains(q):
                out[q] = cell.plane(q)
                break
    return out


# ------------------------------------------------------------ n-dim helpers


def in_hull_nd(points: Sequence[Sequence[int]], q: Sequence) -> bool:
    """Hull membership in any dimension via a feasibility LP."""
    import numpy as np
    from scipy.optimize import linprog

    A = np.asarray(points, dtype=float).T
    k = A.shape[1]
    res = linprog(
        np.zeros(k),
        A_eq=np.vstack([A, np.ones(k)]),
        b_eq=np.r_[np.asarray(q, dtype=float), 1.0],
        bounds=(0, None),
        method="highs",
    )
    return res.status == 0


def lattice_points_nd(points: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    lo = [min(p[i] for p in points) for i in range(len(points[0]))]
    hi = [max(p[i] for p in points) for i in range(len(points[0]))]
    return [
        q
        for q in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])
        if in_hull_nd(points, q)
    ]
