import json
import xml.etree.ElementTree as ET
from fractions import Fraction

import numpy as np
import pytest
from click.testing import CliRunner
from curve_fixtures import honeycomb, plane_curve, supercubic

from tropica import curves as cv
from tropica.amoeba import ComplexLaurentPolynomial, amoeba_raster
from tropica.cli import main
from tropica.hypersurface import corner_locus
from tropica.parsing import ParseError, format_polynomial, parse_complex, parse_polynomial, parse_tropical
from tropica.render import FigureSpec, Layer, Viewport, emit_results, svg_text, to_record
from tropica.trop_core import TropicalPolynomial

SVG = "{http://www.w3.org/2000/svg}"

CORPUS = [
    "z + w + 1",
    "2*z^-1*w^3 - z^-1*w^3",
    "1 + 30z + 30w + z^2 + 30 z*w + w^2",
    "(1+2i)*z^2 - 0.5i*w + 3",
    "z^(-2)*w^(-1) + 1e-3 z w",
    "max(0, x, y)",
    "max(0, 1 + x, -1/2 + 2x + y, y - 3)",
    "max(-x - y, 3/4, x - 2y)",
]


def test_parse_examples():
    assert parse_polynomial("z + w + 1").coefficients == {(1, 0): 1, (0, 1): 1, (0, 0): 1}
    F = parse_polynomial("max(0, x, y)")
    assert isinstance(F, TropicalPolynomial)
    assert F.coefficients == {(0, 0): 0, (1, 0): 0, (0, 1): 0}
    assert parse_polynomial("2*z^-1*w^3 - z^-1*w^3").coefficients == {(-1, 3): 1}


def test_parse_merges():
    assert parse_tropical("max(1 + x, 3 + x, y)").coefficients == {(1, 0): 3, (0, 1): 0}
    assert parse_complex("(1+2i) z + 2i z").coefficients == {(1, 0): 1 + 4j}


@pytest.mark.parametrize("text", CORPUS)
def test_round_trip(text):
    p = parse_polynomial(text)
    q = parse_polynomial(format_polynomial(p))
    assert type(p) is type(q) and p.coefficients == q.coefficients


@pytest.mark.parametrize(
    "text,pos",
    [("z + + w", 4), ("max(0, x, ", 10), ("z^1.5 + w", 3), ("max(0, 1/2 x)", 7), ("z - z", 5), ("z + w )", 6)],
)
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_polynomial(text)
    assert err.value.pos == pos


def line_svg():
    C = corner_locus(parse_tropical("max(0, x, y)"))
    return svg_text(FigureSpec((-5, 5, -5, 5), [Layer("complex", C)], "line"))


def test_line_svg_has_three_rays():
    root = ET.fromstring(line_svg())
    lines = [l for l in root.iter(SVG + "line") if l.get("stroke") == "#000000"]
    assert len(lines) == 3
    vp = Viewport((-5.0, 5.0, -5.0, 5.0))
    ox, oy = vp(0, 0)
    for l in lines:
        assert float(l.get("x1")) == pytest.approx(ox, abs=1e-3)
        assert float(l.get("y1")) == pytest.approx(oy, abs=1e-3)
        dx, dy = float(l.get("x2")) - ox, oy - float(l.get("y2"))
        d = np.array([dx, dy]) / np.hypot(dx, dy)
        assert any(np.allclose(d, np.array(u) / np.hypot(*u), atol=1e-4) for u in [(-1, 0), (0, -1), (1, 1)])


def test_weight_two_edges_are_thicker():
    C = corner_locus(TropicalPolynomial({(0, 0): 0, (1, 0): 0, (0, 2): 0}))
    root = ET.fromstring(svg_text(FigureSpec((-5, 5, -5, 5), [Layer("complex", C)])))
    widths = sorted(float(l.get("stroke-width")) for l in root.iter(SVG + "line") if l.get("stroke") == "#000000")
    assert widths == [1.5, 1.5, 3.0]


def test_svg_byte_stable():
    assert line_svg() == line_svg()
    f = ComplexLaurentPolynomial({(0, 0): 1, (1, 0): 1, (0, 1): 1})
    r = amoeba_raster(f, (-6, 6, -6, 6), 60)
    spec = FigureSpec((-6, 6, -6, 6), [Layer("raster", (r.member, r.window), "#3b6ea8", 0.6)])
    a = svg_text(spec)
    r2 = amoeba_raster(f, (-6, 6, -6, 6), 60)
    assert a == svg_text(FigureSpec((-6, 6, -6, 6), [Layer("raster", (r2.member, r2.window), "#3b6ea8", 0.6)]))
    rects = list(ET.fromstring(a).iter(SVG + "rect"))
    assert len(rects) > 60


def test_empty_complex_svg_has_axes_only():
    C = corner_locus(TropicalPolynomial({(1, 2): 5}))
    root = ET.fromstring(svg_text(FigureSpec((-5, 5, -5, 5), [Layer("complex", C)])))
    lines = list(root.iter(SVG + "line"))
    assert len(lines) == 2 and all(l.get("stroke") == "#cccccc" for l in lines)


def test_record_formats(tmp_path):
    rec = to_record({"a": 0.1, "b": Fraction(3, 4), "n": 12, "z": 1 + 2j, "flag": True})
    assert rec == {"a": "0.1", "b": "3/4", "n": 12, "z": {"re": "1.0", "im": "2.0"}, "flag": True}
    p = emit_results({"y": 1.5, "x": [Fraction(1, 3)]}, tmp_path / "r.json")
    assert p.read_text() == '{\n  "x": [\n    "1/3"\n  ],\n  "y": "1.5"\n}\n'


def run(tmp_path, *args):
    res = CliRunner().invoke(main, ["--out", str(tmp_path), *args])
    return res


def test_no_subcommand_prints_usage(tmp_path):
    res = CliRunner().invoke(main, [])
    assert res.exit_code != 0 and "Usage" in res.output


def test_count_cubic(tmp_path):
    res = run(tmp_path, "count", "-d", "3")
    assert res.exit_code == 0, res.output
    rec = json.loads((tmp_path / "count.json").read_text())
    assert rec["N"] == 12 and rec["N_irr"] == 12 and len(rec["paths"]) == 5
    assert rec["seed"] == 0 and rec["config"]["subcommand"] == "count"


def test_count_large_needs_flag(tmp_path):
    assert run(tmp_path, "count", "-d", "5").exit_code == 4


def test_trop_outputs(tmp_path):
    res = run(tmp_path, "trop", "--poly", "max(0, x, y)")
    assert res.exit_code == 0
    rec = json.loads((tmp_path / "trop.json").read_text())
    assert len(rec["complex"]["rays"]) == 3
    ET.parse(tmp_path / "trop.svg")


def test_parse_error_exit(tmp_path):
    res = run(tmp_path, "trop", "--poly", "max(0, x,")
    assert res.exit_code == 2 and "position" in res.output


def test_amoeba_record(tmp_path):
    res = run(tmp_path, "amoeba", "--poly", "z + w + 1", "--res", "120", "--spine")
    assert res.exit_code == 0, res.output
    rec = json.loads((tmp_path / "amoeba.json").read_text())
    assert sorted(c["index"] for c in rec["components"]) == [[0, 0], [0, 1], [1, 0]]
    assert all(abs(float(c["c"])) < 1e-3 for c in rec["spine"]["coefficients"])


def test_identical_runs_are_byte_identical(tmp_path):
    outs = []
    for _ in range(2):
        assert run(tmp_path, "--seed", "9", "amoeba", "--poly", "z + 2w - 1", "--res", "60", "--area", "--area-samples", "4000").exit_code == 0
        outs.append(((tmp_path / "amoeba.json").read_bytes(), (tmp_path / "amoeba.svg").read_bytes()))
    assert outs[0] == outs[1]


def test_patchwork_harnack_cubic(tmp_path):
    poly = "max(" + ", ".join(f"{-(i * i + i * j + j * j)} + {i}x + {j}y" for i in range(4) for j in range(4 - i)) + ")"
    res = run(tmp_path, "patchwork", "--trop", poly, "--harnack", "--count")
    assert res.exit_code == 0, res.output
    assert json.loads((tmp_path / "patchwork.json").read_text())["components"] == 2


def test_curve_subcommand(tmp_path):
    g, m = supercubic()
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cv.curve_to_dict(g, m)))
    res = run(tmp_path, "curve", "--curve", str(path))
    assert res.exit_code == 0, res.output
    rec = json.loads((tmp_path / "curve.json").read_text())
    assert rec["superabundant"] and rec["deformation_dim"] == 13 and rec["expected_dim"] == 12
    g, m = plane_curve(honeycomb(3))
    path.write_text(json.dumps(cv.curve_to_dict(g, m)))
    run(tmp_path, "curve", "--curve", str(path))
    assert json.loads((tmp_path / "curve.json").read_text())["superabundant"] is False


def test_bad_curve_file_exit(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    assert run(tmp_path, "curve", "--curve", str(path)).exit_code == 2


def test_monomial_count_unsupported(tmp_path):
    assert run(tmp_path, "count", "--polygon", "1,1").exit_code == 4
