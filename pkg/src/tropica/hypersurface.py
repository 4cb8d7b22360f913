"""Tropical hypersurfaces: corner loci in R^2, membership in R^n, and the
valuation bridge from Puiseux-type coefficients.

The corner locus is always built by dualizing the regular subdivision that
the coefficients induce on the Newton polygon; nothing here scans a grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import lattice_polytope as lp
from .trop_core import TropicalPolynomial, as_rational

Vec = tuple[int, int]


@dataclass(frozen=True)
class ComplexEdge:
    u: int
    v: int
    weight: int
    direction: Vec  # primitive, pointing from u to v
    dual: tuple[Vec, Vec]


@dataclass(frozen=True)
class ComplexRay:
    vertex: int
    direction: Vec  # primitive, outward
    weight: int
    dual: tuple[Vec, Vec]


@dataclass(frozen=True)
class ComplexLine:
    """A full line; only occurs when the Newton polygon is a segment."""

    point: tuple[Fraction, Fraction]
    direction: Vec
    weight: int
    dual: tuple[Vec, Vec]


@dataclass
class TropicalComplex:
    vertices: list[tuple[Fraction, Fraction]] = field(default_factory=list)
    edges: list[ComplexEdge] = field(default_factory=list)
    rays: list[ComplexRay] = field(default_factory=list)
    lines: list[ComplexLine] = field(default_factory=list)
    dual: lp.RegularSubdivision | None = None
    hidden_terms: list = field(default_factory=list)
    empty: bool = False

    def incident(self, i: int) -> list[tuple[Vec, int]]:
        """Outward (direction, weight) pairs at vertex ``i``."""
        out = []
        for e in self.edges:
            if e.u == i:
                out.append((e.direction, e.weight))
            if e.v == i:
                out.append(((-e.direction[0], -e.direction[1]), e.weight))
        for r in self.rays:
            if r.vertex == i:
                out.append((r.direction, r.weight))
        return out

    def first_betti(self) -> int:
        """Cycle rank of the bounded part (vertices and bounded edges)."""
        parent = list(range(len(self.vertices)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        comps = len(self.vertices)
        for e in self.edges:
            ra, rb = find(e.u), find(e.v)
            if ra != rb:
                parent[ra] = rb
                comps -= 1
        return len(self.edges) - len(self.vertices) + comps

    def to_dict(self) -> dict:
        def q(p):
            return [str(p[0]), str(p[1])]

        return {
            "vertices": [q(v) for v in self.vertices],
            "edges": [
                {"u": e.u, "v": e.v, "weight": e.weight, "direction": list(e.direction),
                 "dual": [list(e.dual[0]), list(e.dual[1])]}
                for e in self.edges
            ],
            "rays": [
                {"vertex": r.vertex, "direction": list(r.direction), "weight": r.weight,
                 "dual": [list(r.dual[0]), list(r.dual[1])]}
                for r in self.rays
            ],
            "lines": [
                {"point": q(l.point), "direction": list(l.direction), "weight": l.weight,
                 "dual": [list(l.dual[0]), list(l.dual[1])]}
                for l in self.lines
            ],
            "dual": self.dual.to_dict() if self.dual is not None else None,
            "hidden_terms": [list(p) for p in self.hidden_terms],
            "empty": self.empty,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "TropicalComplex":
        def q(p):
            return (Fraction(p[0]), Fraction(p[1]))

        return cls(
            vertices=[q(v) for v in data["vertices"]],
            edges=[ComplexEdge(e["u"], e["v"], e["weight"], tuple(e["direction"]),
                               (tuple(e["dual"][0]), tuple(e["dual"][1]))) for e in data["edges"]],
            rays=[ComplexRay(r["vertex"], tuple(r["direction"]), r["weight"],
                             (tuple(r["dual"][0]), tuple(r["dual"][1]))) for r in data["rays"]],
            lines=[ComplexLine(q(l["point"]), tuple(l["direction"]), l["weight"],
                               (tuple(l["dual"][0]), tuple(l["dual"][1])))
                   for l in data.get("lines", [])],
            hidden_terms=[tuple(p) for p in data.get("hidden_terms", [])],
            empty=data.get("empty", False),
        )


def _outward_normal(a: Vec, b: Vec) -> Vec:
    # edge a -> b of a counterclockwise cell
    return lp.primitive((b[1] - a[1], -(b[0] - a[0])))


def corner_locus(F: TropicalPolynomial) -> TropicalComplex:
    """Weighted tropical curve of a tropical polynomial in two variables."""
    if F.dim != 2:
        raise ValueError("corner_locus is implemented for two variables only")
    coefs = F.coefficients
    P = lp.newton_polygon(coefs)

    if P.kind == "point":
        return TropicalComplex(empty=True)

    if P.kind == "segment":
        return _segment_locus(coefs, P)

    sub = lp.regular_subdivision(P, coefs)
    verts = [(-c.plane.gx, -c.plane.gy) for c in sub.cells]
    edges, rays = [], []
    for key, cells in sorted(sub.edge_cells().items()):
        i = cells[0]
        poly = sub.cells[i].polygon
        # orient the dual edge counterclockwise in cell i
        a, b = next((a, b) for a, b in poly.edges() if tuple(sorted((a, b))) == key)
        normal = _outward_normal(a, b)
        w = lp.lattice_length((a, b))
        if len(cells) == 1:
            rays.append(ComplexRay(i, normal, w, key))
            continue
        j = cells[1]
        d = (verts[j][0] - verts[i][0], verts[j][1] - verts[i][1])
        # d must be a positive multiple of the outward normal of cell i
        assert d[0] * normal[1] - d[1] * normal[0] == 0
        assert d[0] * normal[0] + d[1] * normal[1] > 0
        edges.append(ComplexEdge(i, j, w, normal, key))
    return TropicalComplex(verts, edges, rays, [], sub, sub.lifted_out())


def _segment_locus(coefs, P) -> TropicalComplex:
    a, b = P.vertices
    n = lp.lattice_length((a, b))
    step = ((b[0] - a[0]) // n, (b[1] - a[1]) // n)
    k = 0 if step[0] else 1
    param = [((p[k] - a[k]) // step[k], v) for p, v in coefs.items()]
    hull = lp.upper_hull_1d(param)
    on = {i for i, _ in hull}
    hidden = sorted(p for p in coefs if (p[k] - a[k]) // step[k] not in on)
    lines = []
    for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
        p0 = (a[0] + i0 * step[0], a[1] + i0 * step[1])
        p1 = (a[0] + i1 * step[0], a[1] + i1 * step[1])
        d = (p1[0] - p0[0], p1[1] - p0[1])
        # <d, x> = v0 - v1
        s = Fraction(v0 - v1) / (d[0] * d[0] + d[1] * d[1])
        point = (s * d[0], s * d[1])
        direction = lp.primitive((-d[1], d[0]))
        lines.append(ComplexLine(point, direction, i1 - i0, (p0, p1)))
    return TropicalComplex(lines=lines, hidden_terms=hidden)


def membership(F: TropicalPolynomial, x: Sequence, tol: float = 0) -> bool:
    """True iff at least two terms come within ``tol`` of the maximum."""
    if tol == 0:
        _, arg = F.evaluate(x)
        return len(arg) >= 2
    vals = sorted(
        (float(c) + sum(e * float(xi) for e, xi in zip(exp, x)) for exp, c in F.terms),
        reverse=True,
    )
    return len(vals) >= 2 and vals[0] - vals[1] <= tol


@dataclass(frozen=True)
class BalancingViolation:
    vertex: int
    residual: Vec


def balancing_check(C: TropicalComplex) -> list[BalancingViolation]:
    """Exact weighted sum of outward primitive directions at every vertex."""
    bad = []
    for i in range(len(C.vertices)):
        sx = sy = 0
        for (dx, dy), w in C.incident(i):
            sx += w * dx
            sy += w * dy
        if sx or sy:
            bad.append(BalancingViolation(i, (sx, sy)))
    return bad


# ------------------------------------------------------- valuation bridge


class PuiseuxLite:
    """Finite sum ``sum c_k t^{e_k}`` with rational exponents.

    The valuation is the *largest* exponent, matching ``Log_t |t^c| = c`` as
    ``t -> +inf``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Sequence | complex | int | float):
        if isinstance(terms, (int, float, complex, Fraction)):
            terms = {0: terms}
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Fraction, complex] = {}
        for e, c in items:
            e = as_rational(e)
            acc[e] = acc.get(e, 0) + complex(c)
        self.terms = tuple(sorted(((e, c) for e, c in acc.items() if c != 0), reverse=True))

    def is_zero(self) -> bool:
        return not self.terms

    def val(self) -> Fraction:
        if not self.terms:
            raise ValueError("the zero series has no valuation")
        return self.terms[0][0]

    def __call__(self, t: float) -> complex:
        return sum(c * float(t) ** float(e) for e, c in self.terms)

    def __repr__(self):
        return "PuiseuxLite(" + " + ".join(f"({c})*t^{e}" for e, c in self.terms) + ")"


def _as_series(c) -> PuiseuxLite:
    return c if isinstance(c, PuiseuxLite) else PuiseuxLite(c)


def tropicalize(f: Mapping) -> TropicalPolynomial:
    """Replace each coefficient by its valuation."""
    terms = {}
    for exp, c in f.items():
        s = _as_series(c)
        if s.is_zero():
            continue
        exp = (exp,) if isinstance(exp, int) else tuple(exp)
        terms[exp] = s.val()
    if not terms:
        raise ValueError("zero polynomial has no tropicalization")
    return TropicalPolynomial(terms)


def univariate_trop_roots(F: TropicalPolynomial) -> list[tuple[Fraction, int]]:
    """Corner points of a one-variable tropical polynomial with multiplicities."""
    if F.dim != 1:
        raise ValueError("expected a one-variable tropical polynomial")
    hull = lp.upper_hull_1d([(e[0], c) for e, c in F.terms])
    if len(hull) < 2:
        raise ValueError("a single upper-hull term has no tropical roots")
    return [
        (Fraction(a0 - a1, j1 - j0), j1 - j0)
        for (j0, a0), (j1, a1) in zip(hull, hull[1:])
    ]
