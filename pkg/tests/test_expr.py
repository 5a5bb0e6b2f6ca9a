"""Germ parsing, Taylor jets and tail certificates (sympy series as oracle)."""

import pytest
import sympy

from germforge.errors import CompositionError, GermSyntaxError
from germforge.expr import Add, Var, parse_germ, tail_support, taylor_jet
from germforge.poly import Poly
from oracle import from_sympy, jet_sympy

EXPRESSIONS = [
    "exp(x^2)+2*cos(x)-3+sin(lambda)",
    "sin(lambda^7+x)+exp(x^4)-x-1-lambda^9",
    "cos(x^6)-lambda-1",
    "lambda^3*sin(x)",
    "lambda-lambda*exp(x)",
    "x-sin(x)",
    "lambda*x+lambda^3+lambda^2*ln1p(x)",
    "exp(sin(x*lambda))-1",
    "ln1p(x+lambda)^2*cos(lambda)",
    "1/3*x^3 - 2/7*lambda^2*x + 5",
]


def test_parse_shapes():
    e = parse_germ("exp(x^2)+2*cos(x)-3+sin(lambda)")
    assert isinstance(e, Add) and len(e.terms) == 4
    assert isinstance(parse_germ("x"), Var)
    assert taylor_jet("x^5 - lambda^2", 5).poly == Poly.parse("x^5-lambda^2")


@pytest.mark.parametrize("text", EXPRESSIONS)
@pytest.mark.parametrize("N", [3, 6])
def test_jet_matches_series(text, N):
    assert taylor_jet(text, N).poly == from_sympy(jet_sympy(text, N))


@pytest.mark.parametrize("text", EXPRESSIONS)
def test_tail_support_covers_higher_terms(text):
    N = 4
    cone = tail_support(text, N).cone
    higher = from_sympy(jet_sympy(text, N + 6))
    for (a, b) in higher.terms:
        if a + b > N:
            assert any(a >= p and b >= q for p, q in cone), (text, (a, b), cone)


def test_jet_examples():
    assert taylor_jet("exp(x^2)+2*cos(x)-3+sin(lambda)", 5).poly == Poly.parse(
        "lambda + 7/12*x^4 - 1/6*lambda^3 + 1/120*lambda^5"
    )
    j = taylor_jet("x", 3)
    assert j.poly == Poly.var("x") and j.tail.is_exact
    j = taylor_jet("lambda^3*sin(x)", 6)
    assert j.poly == Poly.parse("x*lambda^3 - 1/6*x^3*lambda^3")
    assert j.tail == [(5, 3)]
    assert tail_support("exp(x)+exp(lambda)", 3) == [(0, 4), (4, 0)]
    assert tail_support("x^3+lambda", 3).is_exact
    assert tail_support("lambda^3*sin(x)", 4) == [(3, 3)]


@pytest.mark.parametrize(
    "text,pos",
    [("x^", 2), ("sin(x", 5), ("y+x", 0), ("x^1/2", 3), ("3/0", 2), ("x+*lambda", 2)],
)
def test_syntax_errors_carry_positions(text, pos):
    with pytest.raises(GermSyntaxError) as info:
        parse_germ(text)
    assert info.value.position == pos
    assert info.value.exit_code == 1


@pytest.mark.parametrize("text", ["exp(1+x)", "ln1p(1+lambda)", "sin(2+x)"])
def test_composition_needs_vanishing_argument(text):
    with pytest.raises(CompositionError):
        taylor_jet(text, 3)


def test_unknown_function():
    with pytest.raises(GermSyntaxError):
        parse_germ("tan(x)")


def test_sympy_oracle_sanity():
    assert jet_sympy("sin(x)", 3) == sympy.Symbol("x") - sympy.Symbol("x") ** 3 / 6
