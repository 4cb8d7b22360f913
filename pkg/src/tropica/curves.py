"""Parameterized tropical curves in R^n.

A curve is a graph (vertices, weighted bounded edges, weighted legs) plus a
map: rational vertex positions and an integer direction for every edge and
leg.  Legs are the open ends left after deleting 1-valent vertices.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .lattice_polytope import primitive

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurveGraph:
    n_vertices: int
    edges: tuple[tuple[int, int, int], ...]  # (u, v, weight)
    legs: tuple[tuple[int, int], ...]  # (vertex, weight)

    def __post_init__(self):
        for u, v, w in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) refers to a missing vertex")
            if w < 1:
                raise ValueError("edge weights must be positive")
        for u, w in self.legs:
            if not 0 <= u < self.n_vertices:
                raise ValueError(f"leg at missing vertex {u}")
            if w < 1:
                raise ValueError("leg weights must be positive")

    def valence(self, i: int) -> int:
        return sum((u == i) + (v == i) for u, v, _ in self.edges) + sum(u == i for u, _ in self.legs)

    def components(self) -> int:
        parent = list(range(self.n_vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        count = self.n_vertices
        for u, v, _ in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                count -= 1
        return count


@dataclass(frozen=True)
class TropicalMap:
    positions: tuple[tuple[Fraction, ...], ...]
    edge_dirs: tuple[tuple[int, ...], ...]  # from u to v
    leg_dirs: tuple[tuple[int, ...], ...]  # outward

    @property
    def dim(self) -> int:
        if self.positions:
            return len(self.positions[0])
        return len(self.leg_dirs[0]) if self.leg_dirs else 0


@dataclass(frozen=True)
class Degree:
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.vectors[0]) if self.vectors else 0
        if any(sum(v[i] for v in self.vectors) for i in range(n)):
            raise ValueError("degree vectors must sum to zero")

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self):
        return len(self.vectors)


def make_curve(positions, edges, legs) -> tuple[CurveGraph, TropicalMap]:
    """Convenience constructor.

    ``edges`` are ``(u, v, direction, weight)`` and ``legs`` ``(vertex, direction, weight)``.
    Positions are coerced to Fractions.
    """
    pos = tuple(tuple(Fraction(c) for c in p) for p in positions)
    g = CurveGraph(
        len(pos),
        tuple((u, v, w) for u, v, _, w in edges),
        tuple((u, w) for u, _, w in legs),
    )
    m = TropicalMap(
        pos,
        tuple(tuple(int(c) for c in d) for _, _, d, _ in edges),
        tuple(tuple(int(c) for c in d) for _, d, _ in legs),
    )
    return g, m


def _check_sizes(g: CurveGraph, m: TropicalMap):
    if len(m.positions) != g.n_vertices:
        raise ValueError("map has a different number of vertex positions than the graph")
    if len(m.edge_dirs) != len(g.edges) or len(m.leg_dirs) != len(g.legs):
        raise ValueError("map directions do not match the graph's edges/legs")


def _weighted(direction, weight) -> tuple[tuple[int, ...], int]:
    """Split ``weight * direction`` into (primitive direction, total weight)."""
    p = primitive(direction)
    k = next(d // q for d, q in zip(direction, p) if q)
    return p, weight * k


def outward(g: CurveGraph, m: TropicalMap, i: int) -> list[tuple[tuple[int, ...], int]]:
    """(primitive outward direction, weight) for every edge end and leg at vertex i."""
    out = []
    for (u, v, w), d in zip(g.edges, m.edge_dirs):
        p, ww = _weighted(d, w)
        if u == i:
            out.append((p, ww))
        if v == i:
            out.append((tuple(-c for c in p), ww))
    for (u, w), d in zip(g.legs, m.leg_dirs):
        if u == i:
            out.append(_weighted(d, w))
    return out


@dataclass
class ValidationReport:
    residuals: dict[int, tuple[int, ...]] = field(default_factory=dict)
    embedding_errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.embedding_errors and all(not any(r) for r in self.residuals.values())

    def violations(self) -> dict[int, tuple[int, ...]]:
        return {i: r for i, r in self.residuals.items() if any(r)}


def validate(g: CurveGraph, m: TropicalMap) -> ValidationReport:
    _check_sizes(g, m)
    n = m.dim
    rep = ValidationReport()
    for k, ((u, v, _), d) in enumerate(zip(g.edges, m.edge_dirs)):
        if len(d) != n or not any(d):
            rep.embedding_errors.append(f"edge {k}: bad direction {d}")
            continue
        diff = [b - a for a, b in zip(m.positions[u], m.positions[v])]
        ratios = {diff[i] / d[i] for i in range(n) if d[i]}
        zero_ok = all(diff[i] == 0 for i in range(n) if d[i] == 0)
        if len(ratios) != 1 or not zero_ok or next(iter(ratios)) <= 0:
            rep.embedding_errors.append(f"edge {k}: endpoints not separated along {d}")
    for k, d in enumerate(m.leg_dirs):
        if len(d) != n or not any(d):
            rep.embedding_errors.append(f"leg {k}: bad direction {d}")
    if rep.embedding_errors:
        return rep
    for i in range(g.n_vertices):
        s = [0] * n
        for p, w in outward(g, m, i):
            for c in range(n):
                s[c] += w * p[c]
        rep.residuals[i] = tuple(s)
    return rep


def degree(g: CurveGraph, m: TropicalMap) -> Degree:
    rep = validate(g, m)
    if not rep.ok:
        raise ValueError(f"invalid curve: {rep.embedding_errors or rep.violations()}")
    merged: dict[tuple[int, ...], int] = {}
    for (_, w), d in zip(g.legs, m.leg_dirs):
        p, ww = _weighted(d, w)
        merged[p] = merged.get(p, 0) + ww
    return Degree(tuple(sorted(tuple(k * c for c in p) for p, k in merged.items())))


def end_count(g: CurveGraph) -> int:
    return len(g.legs)


def genus(g: CurveGraph) -> int:
    """b1 + 1 - b0; legs do not change the homotopy type."""
    b0 = g.components()
    b1 = len(g.edges) - g.n_vertices + b0
    return b1 + 1 - b0


def _on_segment(p, a, b) -> bool:
    d = [y - x for x, y in zip(a, b)]
    q = [y - x for x, y in zip(a, p)]
    ratios = {q[i] / d[i] for i in range(len(d)) if d[i]}
    if any(q[i] != 0 for i in range(len(d)) if d[i] == 0) or len(ratios) != 1:
        return False
    s = next(iter(ratios))
    return 0 <= s <= 1


def _on_ray(p, a, d) -> bool:
    q = [y - x for x, y in zip(a, p)]
    ratios = {Fraction(q[i]) / d[i] for i in range(len(d)) if d[i]}
    if any(q[i] != 0 for i in range(len(d)) if d[i] == 0) or len(ratios) != 1:
        return False
    return next(iter(ratios)) >= 0


def is_simple(g: CurveGraph, m: TropicalMap) -> bool:
    """3-valent, immersed, and no vertex image shared with any other point."""
    _check_sizes(g, m)
    for i in range(g.n_vertices):
        if g.valence(i) != 3:
            return False
        dirs = [p for p, _ in outward(g, m, i)]
        if len(set(dirs)) != len(dirs):
            return False
    for (u, v, _) in g.edges:
        if m.positions[u] == m.positions[v]:
            return False
    pos = m.positions
    if len(set(pos)) != len(pos):
        return False
    for i, p in enumerate(pos):
        for (u, v, _) in g.edges:
            if i not in (u, v) and _on_segment(p, pos[u], pos[v]):
                return False
        for (u, _), d in zip(g.legs, m.leg_dirs):
            if u != i and _on_ray(p, pos[u], d):
                return False
    return True


def _lattice_area(a: Sequence[int], b: Sequence[int]) -> int:
    """Lattice-normalized area of the parallelogram spanned by a and b (gcd of 2x2 minors)."""
    n = len(a)
    g = 0
    for i in range(n):
        for j in range(i + 1, n):
            g = gcd(g, a[i] * b[j] - a[j] * b[i])
    return g


def vertex_multiplicity(g: CurveGraph, m: TropicalMap, vertex: int) -> int:
    """w1 w2 |v1 x v2| at a 3-valent vertex; 0 means the vertex is not immersed."""
    out = outward(g, m, vertex)
    if len(out) != 3:
        raise ValueError(f"vertex {vertex} is {len(out)}-valent, multiplicity needs 3")
    vecs = [tuple(w * c for c in p) for p, w in out]
    vals = [_lattice_area(vecs[k], vecs[(k + 1) % 3]) for k in range(3)]
    if len(set(vals)) != 1:
        raise ArithmeticError(f"unbalanced vertex {vertex}: cyclic products {vals} disagree")
    if vals[0] == 0:
        log.warning("vertex %d has parallel edges; multiplicity 0", vertex)
    return vals[0]


def curve_multiplicity(g: CurveGraph, m: TropicalMap) -> int:
    if not is_simple(g, m):
        raise ValueError("multiplicity is defined for simple curves only")
    out = 1
    for i in range(g.n_vertices):
        out *= vertex_multiplicity(g, m, i)
    return out


def expected_dim(x: int, g: int, n: int) -> int:
    return x + (n - 3) * (1 - g)


def rank_exact(rows: list[list[int]]) -> int:
    """Rank over Q by fraction-free Gaussian elimination."""
    mat = [list(map(Fraction, r)) for r in rows if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pv = mat[rank][col]
        for r in range(rank + 1, len(mat)):
            f = mat[r][col]
            if f:
                f /= pv
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def deformation_matrix(g: CurveGraph, m: TropicalMap) -> list[list[int]]:
    """Linear conditions on vertex positions keeping every bounded edge direction."""
    n = m.dim
    rows = []
    for (u, v, _), d in zip(g.edges, m.edge_dirs):
        for a in range(n):
            for b in range(a + 1, n):
                # (p_v - p_u)_a d_b - (p_v - p_u)_b d_a = 0
                row = [0] * (n * g.n_vertices)
                row[n * v + a] += d[b]
                row[n * u + a] -= d[b]
                row[n * v + b] -= d[a]
                row[n * u + b] += d[a]
                rows.append(row)
    return rows


def local_deformation_dim(g: CurveGraph, m: TropicalMap) -> int:
    if not is_simple(g, m):
        raise ValueError("deformation dimension is computed for simple curves only")
    n = m.dim
    k = n * g.n_vertices - rank_exact(deformation_matrix(g, m))
    exp = expected_dim(end_count(g), genus(g), n)
    assert k >= exp, f"deformation space {k} below the Riemann-Roch bound {exp}"
    return k


def is_superabundant(g: CurveGraph, m: TropicalMap) -> bool:
    return local_deformation_dim(g, m) > expected_dim(end_count(g), genus(g), m.dim)


def canonical_form(g: CurveGraph, m: TropicalMap) -> tuple:
    """Image-level normal form used to compare parameterizations.

    2-valent vertices whose two edges continue straight with equal weight
    are collapsed first, then edges are recorded by endpoint images.
    """
    pos = list(m.positions)
    edges = [(u, v, w, primitive(d)) for (u, v, w), d in zip(g.edges, m.edge_dirs)]
    legs = [(u, w, primitive(d)) for (u, w), d in zip(g.legs, m.leg_dirs)]
    changed = True
    while changed:
        changed = False
        for i in range(len(pos)):
            inc_e = [k for k, e in enumerate(edges) if i in (e[0], e[1])]
            inc_l = [k for k, l in enumerate(legs) if l[0] == i]
            if len(inc_e) + len(inc_l) != 2:
                continue
            if len(inc_e) == 2:
                e1, e2 = edges[inc_e[0]], edges[inc_e[1]]
                o1 = e1[1] if e1[0] == i else e1[0]
                o2 = e2[1] if e2[0] == i else e2[0]
                d1 = e1[3] if e1[0] == i else tuple(-c for c in e1[3])
                d2 = e2[3] if e2[0] == i else tuple(-c for c in e2[3])
                if e1[2] == e2[2] and d1 == tuple(-c for c in d2) and o1 != o2:
                    edges = [e for k, e in enumerate(edges) if k not in inc_e]
                    edges.append((o1, o2, e1[2], tuple(-c for c in d1)))
                    changed = True
                    break
            elif len(inc_e) == 1:
                e, l = edges[inc_e[0]], legs[inc_l[0]]
                o = e[1] if e[0] == i else e[0]
                d = e[3] if e[0] == i else tuple(-c for c in e[3])
                if e[2] == l[1] and l[2] == tuple(-c for c in d):
                    edges.pop(inc_e[0])
                    legs.pop(inc_l[0])
                    legs.append((o, l[1], l[2]))
                    changed = True
                    break
    used = {e[0] for e in edges} | {e[1] for e in edges} | {l[0] for l in legs}
    seg = sorted(
        (tuple(sorted((pos[u], pos[v]))), w) for u, v, w, _ in edges
    )
    rays = sorted((pos[u], d, w) for u, w, d in legs)
    verts = sorted(pos[i] for i in used)
    return tuple(verts), tuple(seg), tuple(rays)


def curve_from_complex(C) -> tuple[CurveGraph, TropicalMap]:
    """Parameterize a planar corner locus by its own cell structure."""
    if C.lines:
        raise ValueError("complexes made of parallel lines have no vertices to parameterize")
    return make_curve(
        C.vertices,
        [(e.u, e.v, e.direction, e.weight) for e in C.edges],
        [(r.vertex, r.direction, r.weight) for r in C.rays],
    )


def curve_to_dict(g: CurveGraph, m: TropicalMap) -> dict:
    return {
        "vertices": [[str(c) for c in p] for p in m.positions],
        "edges": [
            {"u": u, "v": v, "weight": w, "direction": list(d)}
            for (u, v, w), d in zip(g.edges, m.edge_dirs)
        ],
        "legs": [
            {"vertex": u, "weight": w, "direction": list(d)}
            for (u, w), d in zip(g.legs, m.leg_dirs)
        ],
    }


def curve_from_dict(data: Mapping) -> tuple[CurveGraph, TropicalMap]:
    """Load and validate a curve file."""
    g, m = make_curve(
        [[Fraction(str(c)) for c in p] for p in data["vertices"]],
        [(e["u"], e["v"], e["direction"], e.get("weight", 1)) for e in data.get("edges", [])],
        [(l["vertex"], l["direction"], l.get("weight", 1)) for l in data.get("legs", [])],
    )
    rep = validate(g, m)
    if not rep.ok:
        raise ValueError(f"curve file fails validation: {rep.embedding_errors or rep.violations()}")
    return g, m


def load_curve(path) -> tuple[CurveGraph, TropicalMap]:
    with open(path) as fh:
        return curve_from_dict(json.load(fh))
