"""JSON round trips for every serialisable result type."""

import json

import pytest

import germforge as gf
from germforge.poly import XL, MonomialOrder, Poly


def jet(*gens, n=6):
    return gf.IdealBasis(list(gens), MonomialOrder.alex(*XL), "jet", n)


def roundtrip(obj):
    text = gf.dumps(obj)
    back = gf.loads(text)
    assert gf.dumps(back) == text
    return back, json.loads(text)


def test_poly_encoding_schema():
    B = gf.standard_basis(jet("x^2-1/3*lambda", "lambda^2"))
    back, data = roundtrip(B)
    assert data["schema"] == 1 and data["type"]
    for g in data["gens"]:
        for num, den, exps in g["terms"] if isinstance(g, dict) else g:
            assert isinstance(num, int) and isinstance(den, int) and isinstance(exps, list)
    assert back.gens == B.gens


@pytest.mark.parametrize(
    "make",
    [
        lambda: gf.intrinsic_part(jet("x^5", "x*lambda", "lambda^2")),
        lambda: gf.tangent_space("x^5+lambda*x+lambda^2"),
        lambda: gf.alg_objects("x^5+lambda*x+lambda^2"),
        lambda: gf.normal_form_details("exp(x^2)+2*cos(x)-3+sin(lambda)", 5),
        lambda: gf.transformation_solve("2*x^3+2*lambda", "x^3+lambda", 4),
        lambda: gf.universal_unfolding("x^4+lambda"),
        lambda: gf.transition_set(gf.universal_unfolding("x^4+lambda")),
        lambda: gf.verify_truncation(["x^3", "lambda"]),
        lambda: gf.mult_matrix(jet("x^3", "lambda"), "x"),
        lambda: gf.normal_set(jet("x^3", "lambda")),
        lambda: gf.diagram_trace(gf.Unfolding(Poly.parse("x^2+lambda"), [], ())),
    ],
)
def test_roundtrip(make):
    roundtrip(make())


def test_regions_roundtrip():
    P = gf.persistent_diagrams(gf.universal_unfolding("x^4+lambda"), resolution=40)
    for region, diag in P.entries:
        roundtrip(region)
        roundtrip(diag)


def test_bad_schema():
    with pytest.raises(ValueError):
        gf.from_json({"schema": 99, "type": "poly"})
    with pytest.raises(ValueError):
        gf.from_json({"schema": 1, "type": "nope"})
    with pytest.raises(TypeError):
        gf.to_json(object())
