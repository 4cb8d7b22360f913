"""Simple real tropical curves in R^2: edge signs, gluing, component counts.

The sign of an edge of weight w and primitive direction v is a class in
Z_2^2 modulo the multiples of w*v; for odd w it is a 2-element coset
{e, e + v mod 2}, for even w the whole group.  The real curve has one copy
of the edge in every quadrant its class contains.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import curves as cv
from . import lattice_polytope as lp

log = logging.getLogger(__name__)

Quadrant = tuple[int, int]
QUADRANTS: tuple[Quadrant, ...] = ((0, 0), (1, 0), (0, 1), (1, 1))


def _add(a: Quadrant, b: Sequence[int]) -> Quadrant:
    return ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)


@dataclass(frozen=True)
class SignClass:
    weight: int
    direction: tuple[int, int]
    elements: frozenset

    @classmethod
    def containing(cls, element: Sequence[int], direction: Sequence[int], weight: int = 1) -> "SignClass":
        v = lp.primitive(direction)
        e = (element[0] % 2, element[1] % 2)
        if weight % 2 == 0:
            elems = frozenset(QUADRANTS)
        else:
            elems = frozenset({e, _add(e, v)})
        return cls(weight, v, elems)

    def __contains__(self, item) -> bool:
        return tuple(item) in self.elements


@dataclass(frozen=True)
class SignedCurve:
    graph: cv.CurveGraph
    map: cv.TropicalMap
    edge_signs: tuple[SignClass, ...]
    leg_signs: tuple[SignClass, ...]

    def __post_init__(self):
        if self.map.dim != 2:
            raise ValueError("real tropical curves are handled in the plane only")
        if len(self.edge_signs) != len(self.graph.edges) or len(self.leg_signs) != len(self.graph.legs):
            raise ValueError("one sign class per edge and leg is required")

    def pieces_at(self, i: int) -> list[tuple[str, int, SignClass]]:
        out = []
        for k, ((u, v, _), s) in enumerate(zip(self.graph.edges, self.edge_signs)):
            if i in (u, v):
                out.append(("e", k, s))
        for k, ((u, _), s) in enumerate(zip(self.graph.legs, self.leg_signs)):
            if u == i:
                out.append(("l", k, s))
        return out


@dataclass
class CompatibilityReport:
    failures: dict[int, list[tuple[tuple[str, int], Quadrant]]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_compatibility(c: SignedCurve) -> CompatibilityReport:
    """Every element of every class at a vertex must lie in another class there."""
    rep = CompatibilityReport()
    for i in range(c.graph.n_vertices):
        pieces = c.pieces_at(i)
        for a, (kind, k, s) in enumerate(pieces):
            for e in sorted(s.elements):
                if not any(e in t for b, (_, _, t) in enumerate(pieces) if b != a):
                    rep.failures.setdefault(i, []).append(((kind, k), e))
    return rep


@dataclass
class RealTropicalSet:
    """Edge copies per quadrant; geometry stays in tropical coordinates."""

    curve: SignedCurve
    copies: dict[Quadrant, list[tuple[str, int]]]

    def segments(self, quadrant: Quadrant):
        """Geometric pieces of one quadrant: ('e', p, q) segments and ('l', p, d) rays."""
        g, m = self.curve.graph, self.curve.map
        out = []
        for kind, k in self.copies[quadrant]:
            if kind == "e":
                u, v, _ = g.edges[k]
                out.append(("e", m.positions[u], m.positions[v]))
            else:
                u, _ = g.legs[k]
                out.append(("l", m.positions[u], m.leg_dirs[k]))
        return out


def build_real_set(c: SignedCurve) -> RealTropicalSet:
    rep = check_compatibility(c)
    if not rep.ok:
        raise ValueError(f"signs are incompatible at vertices {sorted(rep.failures)}")
    copies: dict[Quadrant, list] = {q: [] for q in QUADRANTS}
    for k, s in enumerate(c.edge_signs):
        for q in sorted(s.elements):
            copies[q].append(("e", k))
    for k, s in enumerate(c.leg_signs):
        for q in sorted(s.elements):
            copies[q].append(("l", k))
    # closure: each copied edge end at a vertex meets another copy there
    for i in range(c.graph.n_vertices):
        for q in QUADRANTS:
            n = sum(q in s for _, _, s in c.pieces_at(i))
            assert n != 1, f"dangling edge copy at vertex {i} in quadrant {q}"
    return RealTropicalSet(c, copies)


def dual_polygon(g: cv.CurveGraph, m: cv.TropicalMap) -> lp.LatticePolygon:
    """Newton polygon recovered from the degree (legs rotated a quarter turn)."""
    vecs = []
    for (_, w), d in zip(g.legs, m.leg_dirs):
        p, ww = cv._weighted(d, w)
        vecs.extend([(-p[1], p[0])] * ww)
    return lp.polygon_from_edge_vectors(vecs)


def count_components(r: RealTropicalSet, polygon: lp.LatticePolygon | None = None) -> int:
    """Connected components of the real curve in the compact real toric surface.

    The two copies of a leg meet on the toric divisor of its side, i.e. copies
    in quadrants differing by the primitive leg direction mod 2 are glued.
    """
    c = r.curve
    g, m = c.graph, c.map
    if any(w != 1 for *_, w in g.edges) or any(w != 1 for _, w in g.legs):
        log.warning("component count for curves with higher weights is only approximate")
    parent: dict = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for q, pieces in r.copies.items():
        for kind, k in pieces:
            find((kind, k, q))
    for i in range(g.n_vertices):
        for q in QUADRANTS:
            here = [(kind, k, q) for kind, k, s in c.pieces_at(i) if q in s]
            for a in here[1:]:
                union(here[0], a)
    for k, s in enumerate(c.leg_signs):
        v = lp.primitive(m.leg_dirs[k])
        for q in s.elements:
            union(("l", k, q), ("l", k, _add(q, v)))
    count = len({find(a) for a in list(parent)})
    if polygon is None:
        polygon = dual_polygon(g, m)
    bound = lp.interior_points(polygon) + 1
    assert count <= bound, f"{count} components exceed the Harnack bound {bound}"
    return count


def signs_from_patchwork(C, lattice_signs: Mapping) -> SignedCurve:
    """Edge signs of a corner locus induced by signs on lattice points.

    The copy of the edge dual to [p, q] lies in quadrant e iff the symmetric
    copies of p and q carry different signs there.  Requires odd weights.
    """
    g, m = cv.curve_from_complex(C)

    def cls(p, q, direction, weight):
        if weight % 2 == 0:
            raise ValueError("lattice-point signs do not determine even-weight edges")
        elems = frozenset(
            e for e in QUADRANTS
            if lattice_signs[p] * (-1) ** (e[0] * p[0] + e[1] * p[1])
            != lattice_signs[q] * (-1) ** (e[0] * q[0] + e[1] * q[1])
        )
        out = SignClass(weight, lp.primitive(direction), elems)
        assert len(elems) == 2
        return out

    edge_signs = tuple(cls(*e.dual, e.direction, e.weight) for e in C.edges)
    leg_signs = tuple(cls(*r.dual, r.direction, r.weight) for r in C.rays)
    return SignedCurve(g, m, edge_signs, leg_signs)


def harnack_signs(points) -> dict:
    """Harnack distribution: minus exactly at lattice points with both coordinates even."""
    return {p: (-1 if p[0] % 2 == 0 and p[1] % 2 == 0 else 1) for p in points}


def signed_curve_to_dict(c: SignedCurve) -> dict:
    out = cv.curve_to_dict(c.graph, c.map)
    out["edge_signs"] = [sorted(list(e) for e in s.elements) for s in c.edge_signs]
    out["leg_signs"] = [sorted(list(e) for e in s.elements) for s in c.leg_signs]
    return out


def load_signs(curve_g, curve_m, data: Mapping) -> SignedCurve:
    """Signs file: ``{"edges": [[e1, e2], ...], "legs": [...]}``, one representative
    element (or full class) per edge and leg."""

    def mk(spec, d, w):
        elem = spec[0] if spec and isinstance(spec[0], (list, tuple)) else spec
        return SignClass.containing(elem, d, w)

    es = tuple(mk(s, d, w) for s, d, (_, _, w) in zip(data["edges"], curve_m.edge_dirs, curve_g.edges))
    ls = tuple(mk(s, d, w) for s, d, (_, w) in zip(data["legs"], curve_m.leg_dirs, curve_g.legs))
    return SignedCurve(curve_g, curve_m, es, ls)
