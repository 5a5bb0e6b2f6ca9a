"""SVG emission: well-formed documents with labelled axes."""

import xml.etree.ElementTree as ET

import pytest

import germforge as gf
from germforge.errors import GermforgeError
from germforge.poly import Poly

NS = "{http://www.w3.org/2000/svg}"


def parse(text):
    root = ET.fromstring(text)
    assert root.tag == NS + "svg"
    return root


def test_quartic_transition_plot():
    T = gf.transition_set(gf.universal_unfolding("x^4+lambda"))
    root = parse(gf.transition_svg(T))
    assert len(root.findall(f".//{NS}polyline")) >= 2  # cusp curve and half line
    labels = {t.text for t in root.iter(NS + "text")}
    assert {"alpha1", "alpha2"} <= labels


def test_fold_diagram_plot(tmp_path):
    d = gf.diagram_trace(gf.Unfolding(Poly.parse("x^2+lambda"), [], ()))
    path = gf.emit_svg(d, tmp_path / "fold.svg")
    root = parse(path.read_text())
    labels = {t.text for t in root.iter(NS + "text")}
    assert {"lambda", "x"} <= labels
    pts = [tuple(map(float, p.split(","))) for pl in root.iter(NS + "polyline") for p in pl.get("points").split()]
    assert pts


def test_empty_transition_set_axes_only():
    T = gf.transition_set(gf.universal_unfolding("x^2+lambda"))
    root = parse(gf.transition_svg(T))
    assert not root.findall(f".//{NS}polyline")


def test_three_parameter_plot_rejected():
    U = gf.universal_unfolding("x^4+lambda*x")
    T = gf.transition_set(U)
    with pytest.raises(GermforgeError):
        gf.transition_svg(T)
    with pytest.raises(TypeError):
        gf.emit_svg(object(), "unused.svg")
