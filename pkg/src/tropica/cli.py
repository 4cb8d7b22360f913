"""Command line interface: ``tropica <subcommand> ...``.

Every run writes ``<out>/<name>.json`` (a result record echoing the
configuration and seed) and, where there is something to draw,
``<out>/<name>.svg``.  Exit codes: 0 success, 2 parse error, 3 numeric
failure, 4 unsupported case.
"""

from __future__ import annotations

import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click
import numpy as np

from . import curves as cv
from . import enumeration as en
from . import lattice_polytope as lp
from . import patchwork as pw
from .amoeba import (
    ComplexLaurentPolynomial,
    NumericFailure,
    amoeba_raster,
    area_estimate,
    complement_components,
    dequant_distances,
    log_gauss_contour,
    spine as spine_of,
)
from .hypersurface import balancing_check, corner_locus
from .parsing import ParseError, format_polynomial, parse_polynomial
from .render import FigureSpec, Layer, emit_results, quadrant_panels, render_svg
from .trop_core import TropicalPolynomial

EXIT_PARSE, EXIT_NUMERIC, EXIT_UNSUPPORTED = 2, 3, 4


@dataclass
class RunConfig:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    window: tuple | None = None
    resolution: int | None = None
    seed: int = 0
    out: str = "."
    flags: dict = field(default_factory=dict)


def _read_poly(arg: str):
    """Polynomial from a file (text or JSON) or given inline."""
    p = Path(arg)
    text = p.read_text() if p.is_file() else arg
    s = text.strip()
    if s.startswith("{"):
        try:
            data = json.loads(s)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, s, e.pos) from None
        if data.get("terms") and "re" in data["terms"][0]:
            return ComplexLaurentPolynomial.from_dict(data)
        return TropicalPolynomial.from_dict(data)
    return parse_polynomial(s)


def _window(text: str) -> tuple[float, float, float, float]:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ParseError("window must be x0,x1,y0,y1", text, 0) from None
    if len(vals) != 4 or vals[0] >= vals[1] or vals[2] >= vals[3]:
        raise ParseError("window must be x0,x1,y0,y1 with x0<x1 and y0<y1", text, 0)
    return vals


def _polygon(degree: int | None, polygon: str | None) -> lp.LatticePolygon:
    if polygon:
        p = Path(polygon)
        if p.is_file():
            return lp.LatticePolygon.from_dict(json.loads(p.read_text()))
        try:
            pts = [tuple(int(c) for c in v.split(",")) for v in polygon.split(";") if v.strip()]
        except ValueError:
            raise ParseError("polygon must be x,y;x,y;...", polygon, 0) from None
        return lp.newton_polygon(pts)
    if degree is None:
        raise click.UsageError("give --degree or --polygon")
    return lp.simplex(degree)


def _finish(ctx: click.Context, name: str, cfg: RunConfig, record: dict, svg: FigureSpec | str | None = None):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    record = {"config": asdict(cfg), "seed": cfg.seed, **record}
    emit_results(record, out / f"{name}.json")
    if isinstance(svg, FigureSpec):
        render_svg(svg, out / f"{name}.svg")
    elif isinstance(svg, str):
        (out / f"{name}.svg").write_text(svg, encoding="utf-8")


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ParseError as e:
            click.echo(f"parse error: {e}", err=True)
            ctx.exit(EXIT_PARSE)
        except NumericFailure as e:
            click.echo(f"numeric failure: {e}", err=True)
            ctx.exit(EXIT_NUMERIC)
        except en.Unsupported as e:
            click.echo(f"unsupported: {e}", err=True)
            ctx.exit(EXIT_UNSUPPORTED)
        except (ValueError, KeyError, OSError) as e:
            # malformed input files and out-of-domain arguments
            click.echo(f"invalid input: {e}", err=True)
            ctx.exit(EXIT_PARSE)


@click.group(cls=_Group, invoke_without_command=True)
@click.option("--seed", default=0, type=int, show_default=True, help="Run seed for every stochastic step.")
@click.option("--out", default=".", show_default=True, help="Output directory.")
@click.option("-v", "--verbose", is_flag=True)
@click.pass_context
def main(ctx, seed, out, verbose):
    """Tropical curves, lattice path counts and numerical amoebas."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"seed": seed, "out": out}
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())
        ctx.exit(1)


@main.command()
@click.option("--poly", required=True, help="Tropical polynomial (file or inline), e.g. 'max(0, x, y)'.")
@click.option("--window", default="-5,5,-5,5", show_default=True)
@click.option("--name", default="trop")
@click.pass_context
def trop(ctx, poly, window, name):
    """Corner locus of a tropical polynomial and its dual subdivision."""
    F = _read_poly(poly)
    if not isinstance(F, TropicalPolynomial):
        raise ParseError("expected a tropical polynomial max(...)", poly, 0)
    win = _window(window)
    C = corner_locus(F)
    bad = balancing_check(C)
    if bad:
        raise NumericFailure(f"balancing fails at {len(bad)} vertices")
    cfg = RunConfig("trop", {"poly": format_polynomial(F)}, win, None, ctx.obj["seed"], ctx.obj["out"])
    layers = [Layer("complex", C)]
    if C.dual is not None and not C.empty and C.dual.__class__.__name__ == "RegularSubdivision":
        layers.append(Layer("subdivision", C.dual, "#555555"))
    _finish(ctx, name, cfg, {"complex": C.to_dict(), "betti": C.first_betti()}, FigureSpec(win, layers, "corner locus"))
    click.echo(f"{len(C.vertices)} vertices, {len(C.edges)} edges, {len(C.rays)} rays, {len(C.lines)} lines")


@main.command()
@click.option("--degree", "-d", type=int, help="Use the triangle dΔ.")
@click.option("--polygon", help="Vertices 'x,y;x,y;...' or a polygon JSON file.")
@click.option("--genus", "-g", default=0, type=int, show_default=True)
@click.option("--lam", "lam", default=None, help="Order functional: slope perturbation 'p/q' or 'a,b'.")
@click.option("--large", is_flag=True, help="Allow polygons with more than 15 lattice points.")
@click.option("--paths/--no-paths", default=True, help="Include the path audit in the record.")
@click.option("--name", default="count")
@click.pass_context
def count(ctx, degree, polygon, genus, lam, large, paths, name):
    """Number of curves of a genus through generic points (irreducible and all)."""
    P = _polygon(degree, polygon)
    lam_ = en.LambdaOrder.parse(lam) if lam else en.DEFAULT_LAMBDA
    if P.kind == "point":
        raise en.Unsupported("the polygon is a single point")
    if len(P.lattice_points()) > 15 and not large:
        raise en.Unsupported("more than 15 lattice points; rerun with --large")
    lam_.check_injective(P.lattice_points())
    irr = en.count_N_irr(genus, P, lam_)
    record: dict = {"N_irr": irr}
    if P.degenerate:
        record["N"] = en.count_N(genus, P, lam_)
    else:
        res = en.count_paths(genus, P, lam_)
        record["N"] = res.N
        if paths:
            record["paths"] = res.to_dict()["paths"]
    cfg = RunConfig("count", {"polygon": [list(v) for v in P.vertices], "genus": genus}, seed=ctx.obj["seed"], out=ctx.obj["out"],
                    flags={"lambda": [str(lam_.a), str(lam_.b)]})
    _finish(ctx, name, cfg, record)
    click.echo(f"N_irr = {irr}  (N including reducible curves = {record['N']})")


def _complex_poly(arg):
    f = _read_poly(arg)
    if not isinstance(f, ComplexLaurentPolynomial):
        raise ParseError("expected a complex polynomial in z and w", arg, 0)
    return f


@main.command()
@click.option("--poly", required=True, help="Complex polynomial (file or inline), e.g. 'z + w + 1'.")
@click.option("--window", default="-6,6,-6,6", show_default=True)
@click.option("--res", "res", default=200, type=int, show_default=True)
@click.option("--samples", "M", default=512, type=int, show_default=True, help="Angles per slice.")
@click.option("--spine", "do_spine", is_flag=True)
@click.option("--area", "do_area", is_flag=True)
@click.option("--area-samples", default=10**6, type=int, show_default=True)
@click.option("--contour", "do_contour", is_flag=True)
@click.option("--dequant", default=None, help="Comma-separated t values for the coefficient-phase family.")
@click.option("--name", default="amoeba")
@click.pass_context
def amoeba(ctx, poly, window, res, M, do_spine, do_area, area_samples, do_contour, dequant, name):
    """Raster, complement components and optional overlays of an amoeba."""
    f = _complex_poly(poly)
    win = _window(window)
    seed = ctx.obj["seed"]
    r = amoeba_raster(f, win, res, M)
    comps = complement_components(f, win, res, M=M, seed=seed, raster=r)
    record: dict = {
        "components": [
            {"index": list(c.index) if c.index else None, "cells": c.cells, "point": list(c.point), "gradient": list(c.gradient)}
            for c in comps.components
        ]
    }
    layers = [Layer("raster", (r.member, r.window), "#3b6ea8", 0.6)]
    if do_spine:
        s = spine_of(f, win, res, seed=seed, components=comps)
        record["spine"] = s.to_dict()
        if s.complex is not None:
            layers.append(Layer("complex", s.complex, "#b22222"))
    if do_area:
        a = area_estimate(f, win, area_samples, seed, M)
        bound = np.pi**2 * float(f.newton_polygon().area())
        record["area"] = {"value": a.value, "sigma": a.sigma, "samples": a.samples, "bound": bound, "tail": a.tail}
    if do_contour:
        C = log_gauss_contour(f, win, res, M)
        record["contour_points"] = len(C)
        layers.append(Layer("points", C, "#000000"))
    if dequant:
        ts = [float(t) for t in dequant.split(",")]
        coeffs = dict(f.terms)
        record["dequant"] = [{"t": t, "d_H": d} for t, d in zip(ts, dequant_distances(coeffs, ts, win, res, M=M))]
    cfg = RunConfig("amoeba", {"poly": format_polynomial(f)}, win, res, seed, ctx.obj["out"],
                    {"spine": do_spine, "area": do_area, "contour": do_contour, "dequant": dequant, "M": M})
    _finish(ctx, name, cfg, record, FigureSpec(win, layers, "amoeba"))
    idx = [c["index"] for c in record["components"]]
    click.echo(f"{len(idx)} complement components, indices {idx}")
    if "area" in record:
        click.echo(f"area = {record['area']['value']:.6f} +- {record['area']['sigma']:.2g}")


@main.command()
@click.option("--poly", required=True)
@click.option("--window", default="-6,6,-6,6", show_default=True)
@click.option("--res", "res", default=200, type=int, show_default=True)
@click.option("--samples", "M", default=256, type=int, show_default=True, help="Quadrature nodes.")
@click.option("--name", default="spine")
@click.pass_context
def spine(ctx, poly, window, res, M, name):
    """Spine of an amoeba from the Ronkin function."""
    f = _complex_poly(poly)
    win = _window(window)
    s = spine_of(f, win, res, M=M, seed=ctx.obj["seed"])
    layers = []
    if s.components is not None:
        layers.append(Layer("raster", (s.components.raster.member, win), "#3b6ea8", 0.6))
    if s.complex is not None:
        layers.append(Layer("complex", s.complex, "#b22222"))
    cfg = RunConfig("spine", {"poly": format_polynomial(f)}, win, res, ctx.obj["seed"], ctx.obj["out"], {"M": M})
    _finish(ctx, name, cfg, {"spine": s.to_dict()}, FigureSpec(win, layers, "spine"))
    for a, c in sorted(s.coefficients.items()):
        click.echo(f"c{list(a)} = {c:.6g}")
    if s.flag:
        click.echo(f"flag: {s.flag}")


@main.command()
@click.option("--poly", required=True, help="Phases a_j as a complex polynomial.")
@click.option("--lift", default=None, help="JSON file or inline JSON {\"j,k\": v}; default v = 0.")
@click.option("--ts", default="10,100,1000", show_default=True)
@click.option("--window", default="-5,5,-5,5", show_default=True)
@click.option("--res", "res", default=400, type=int, show_default=True)
@click.option("--name", default="dequant")
@click.pass_context
def dequant(ctx, poly, lift, ts, window, res, name):
    """Hausdorff distance from rescaled amoebas of f_t to the tropical limit."""
    f = _complex_poly(poly)
    win = _window(window)
    v = {}
    if lift:
        p = Path(lift)
        raw = json.loads(p.read_text() if p.is_file() else lift)
        v = {tuple(int(c) for c in k.split(",")): float(val) for k, val in raw.items()}
    tl = [float(t) for t in ts.split(",")]
    if any(t <= 1 for t in tl):
        raise ParseError("every t must exceed 1", ts, 0)
    d = dequant_distances(dict(f.terms), tl, win, res, v)
    cfg = RunConfig("dequant", {"poly": format_polynomial(f), "lift": {f"{a},{b}": x for (a, b), x in v.items()}}, win, res,
                    ctx.obj["seed"], ctx.obj["out"], {"ts": tl})
    _finish(ctx, name, cfg, {"distances": [{"t": t, "d_H": x} for t, x in zip(tl, d)]})
    for t, x in zip(tl, d):
        click.echo(f"t = {t:g}: d_H = {x:.6f}")


@main.command()
@click.option("--curve", default=None, help="Curve JSON file.")
@click.option("--trop", "trop_poly", default=None, help="Tropical polynomial whose corner locus is the curve.")
@click.option("--signs", default=None, help="Signs JSON file.")
@click.option("--harnack", is_flag=True, help="Signs from the Harnack lattice-point distribution (needs --trop).")
@click.option("--count", "do_count", is_flag=True)
@click.option("--name", default="patchwork")
@click.pass_context
def patchwork(ctx, curve, trop_poly, signs, harnack, do_count, name):
    """Real tropical curve from edge signs: compatibility, assembly, components."""
    if trop_poly:
        F = _read_poly(trop_poly)
        C = corner_locus(F)
        if harnack:
            sc = pw.signs_from_patchwork(C, pw.harnack_signs(lp.newton_polygon(F.support).lattice_points()))
        elif signs:
            g, m = cv.curve_from_complex(C)
            sc = pw.load_signs(g, m, json.loads(Path(signs).read_text()))
        else:
            raise click.UsageError("give --signs or --harnack")
    elif curve and signs:
        g, m = cv.load_curve(curve)
        sc = pw.load_signs(g, m, json.loads(Path(signs).read_text()))
    else:
        raise click.UsageError("give --curve and --signs, or --trop with --signs/--harnack")
    rep = pw.check_compatibility(sc)
    record: dict = {"compatible": rep.ok, "failures": {str(k): [[list(a), list(e)] for a, e in v] for k, v in rep.failures.items()}}
    svg = None
    if rep.ok:
        rs = pw.build_real_set(sc)
        record["copies"] = {f"{q[0]}{q[1]}": [list(c) for c in v] for q, v in rs.copies.items()}
        if do_count:
            record["components"] = pw.count_components(rs)
        pos = np.asarray([[float(c) for c in p] for p in sc.map.positions]) if sc.map.positions else np.zeros((1, 2))
        lo, hi = pos.min(axis=0) - 2, pos.max(axis=0) + 2
        svg = quadrant_panels(rs, (lo[0], hi[0], lo[1], hi[1]))
    record["curve"] = pw.signed_curve_to_dict(sc)
    cfg = RunConfig("patchwork", {"curve": curve, "trop": trop_poly, "signs": signs}, seed=ctx.obj["seed"], out=ctx.obj["out"],
                    flags={"harnack": harnack, "count": do_count})
    _finish(ctx, name, cfg, record, svg)
    if not rep.ok:
        click.echo(f"incompatible signs at vertices {sorted(rep.failures)}")
        ctx.exit(1)
    if do_count:
        n = record["components"]
        click.echo(f"compatible, {n} component{'s' if n != 1 else ''}")
    else:
        click.echo("compatible")


@main.command()
@click.option("--curve", required=True, help="Curve JSON file.")
@click.option("--name", default="curve")
@click.pass_context
def curve(ctx, curve, name):
    """Validate a parameterized tropical curve; multiplicity and deformation dimension."""
    try:
        data = json.loads(Path(curve).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.doc, e.pos) from None
    g, m = cv.curve_from_dict(data)
    record: dict = {
        "valid": True,
        "genus": cv.genus(g),
        "ends": cv.end_count(g),
        "degree": [list(v) for v in cv.degree(g, m).vectors],
        "simple": cv.is_simple(g, m),
    }
    if record["simple"]:
        if m.dim == 2:
            record["multiplicity"] = cv.curve_multiplicity(g, m)
        record["expected_dim"] = cv.expected_dim(cv.end_count(g), cv.genus(g), m.dim)
        record["deformation_dim"] = cv.local_deformation_dim(g, m)
        record["superabundant"] = record["deformation_dim"] > record["expected_dim"]
    cfg = RunConfig("curve", {"curve": curve}, seed=ctx.obj["seed"], out=ctx.obj["out"])
    _finish(ctx, name, cfg, record)
    msg = f"genus {record['genus']}, {record['ends']} ends"
    if record["simple"]:
        msg += f", deformation dim {record['deformation_dim']} (expected {record['expected_dim']})"
        msg += ", superabundant" if record["superabundant"] else ""
    else:
        msg += ", not simple"
    click.echo(msg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
