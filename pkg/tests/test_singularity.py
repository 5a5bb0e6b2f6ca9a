"""High-order terms, derivative staircases, normal forms, tangent spaces, recognition, transformations."""

import pytest
import sympy

from germforge.errors import InfiniteCodimensionError, NotSingularError
from germforge.intrinsic import intrinsic_membership
from germforge.linalg import rank
from germforge.poly import Poly
from germforge.singularity import (
    alg_objects,
    derivative_stairs,
    high_order_ideal,
    intermediate_terms,
    normal_form,
    normal_form_details,
    recognition_conditions,
    restricted_tangent,
    tangent_space,
    transformation_residual,
    transformation_solve,
)
from oracle import from_sympy, in_ideal_jet, lam, monomials_upto, x

EXP_COS_SIN = "exp(x^2)+2*cos(x)-3+sin(lambda)"
GERMS = [
    EXP_COS_SIN,
    "x^5+lambda*x+lambda^2",
    "x^4+lambda*x",
    "x^3+lambda^2",
    "x^3-lambda*x",
    "x^2+lambda",
    "x^2-lambda^2",
    "2*x^3+3*lambda+x*lambda^2",
    "sin(x^3)+lambda*exp(x)-lambda",
]


def test_high_order_examples():
    assert str(high_order_ideal("x^5+lambda*x+lambda^2")) == "M^6 + M^2<lambda> + <lambda^2>"
    with pytest.raises(InfiniteCodimensionError):
        high_order_ideal("x^2")
    P = high_order_ideal("x^2+lambda")
    assert P.contains((0, 3))


@pytest.mark.parametrize("g", GERMS)
def test_high_order_ideal_inside_generated_ideal(g):
    """Every stair of P(g) lies in <x g, lambda g, x^2 g_x, lambda g_x> (brute-force membership)."""
    from germforge.singularity import as_germ

    N = 9
    p = as_germ(g).jet(N).poly
    X, L = Poly.var("x"), Poly.var("lambda")
    gens = [X * p, L * p, X * X * p.diff("x"), L * p.diff("x")]
    P = high_order_ideal(g)
    for m, n in P.stairs:
        if m + n <= N - 1:
            assert all(in_ideal_jet(gens, Poly.monomial((m - s, n + s)), N) for s in range(m + 1))


def test_derivative_stairs_examples():
    D = derivative_stairs("x^5+lambda*x+lambda^2")
    assert str(D.S) == "M^5 + M<lambda>"
    assert D.S_perp == [(0, 0), (0, 1), (1, 0), (2, 0), (3, 0), (4, 0)]
    assert D.S_gens == [(5, 0), (1, 1)]
    assert derivative_stairs("x^5+lambda*x").S == D.S
    assert derivative_stairs("x^4+lambda").S_gens == [(4, 0), (0, 1)]


@pytest.mark.parametrize("g", GERMS[1:])
def test_derivative_stairs_consistency(g):
    p = Poly.parse(g) if "exp" not in g and "sin" not in g else None
    D = derivative_stairs(g)
    if p is not None:
        for m in D.S_gens:
            assert p.coeff(m)
        for m in D.S_perp:
            assert not p.coeff(m)


def test_intermediate_terms_examples():
    assert intermediate_terms("x^5+lambda*x+lambda^2") == []
    assert intermediate_terms("x^4+lambda*x+lambda*x^2") == []
    nf = normal_form_details("x^2+x*lambda+lambda^3")
    assert nf.intermediate and nf.unremoved == [(1, 1)]


def test_normal_form_examples():
    assert normal_form(EXP_COS_SIN, 5) == Poly.parse("7/12*x^4+lambda")
    assert normal_form("x^5+lambda*x+lambda^2") == Poly.parse("x^5+lambda*x")
    assert normal_form("x^5+lambda*x") == Poly.parse("x^5+lambda*x")
    assert normal_form_details(EXP_COS_SIN, normalize=True).poly == Poly.parse("x^4+lambda")


@pytest.mark.parametrize("g", GERMS)
def test_normal_form_idempotent_and_avoids_high_order_terms(g):
    nf = normal_form(g)
    assert normal_form(nf) == nf
    P = high_order_ideal(g)
    corners = set(derivative_stairs(g).S_gens)
    for e in nf.terms:
        assert e in corners or not intrinsic_membership(P, Poly.monomial(e))


def test_restricted_tangent_examples():
    assert str(restricted_tangent("x^5+lambda*x+lambda^2")) == "M^5 + M<lambda>"
    assert str(restricted_tangent("lambda^3*sin(x)")) == "M<lambda^3>"
    with pytest.raises(InfiniteCodimensionError) as info:
        restricted_tangent("x^2")
    assert info.value.evidence["common_factor"] == (1, 0)


def test_tangent_space_examples():
    T = tangent_space("x^5+lambda*x+lambda^2")
    assert str(T.itr) == "M^5 + M<lambda>"
    assert T.complement == [Poly.parse("x+2*lambda"), Poly.parse("x^4+1/5*lambda")]
    assert T.quotient_basis() == [(0, 0), (0, 1), (2, 0), (3, 0)]
    assert tangent_space("x^2+lambda").quotient_basis() == []


@pytest.mark.parametrize("g", GERMS)
def test_tangent_complement_independent(g):
    T = tangent_space(g)
    cols = sorted({e for p in T.complement for e in p.terms})
    rows = [[p.coeff(e) for e in cols] for p in T.complement]
    assert rank(rows) == len(T.complement)
    for p in T.complement:
        assert not any(T.itr.contains(e) for e in p.terms)


def test_recognition_examples():
    conds = recognition_conditions("x^5+lambda*x")
    zero = sorted(c.monomial for c in conds if c.vanishes)
    nonzero = sorted(c.monomial for c in conds if not c.vanishes)
    assert zero == [(0, 0), (0, 1), (1, 0), (2, 0), (3, 0), (4, 0)]
    assert nonzero == [(1, 1), (5, 0)]
    conds = recognition_conditions("x^4+lambda", "x^4+x^5+2*lambda+x*lambda")
    assert sorted(c.monomial for c in conds if not c.vanishes) == [(0, 1), (4, 0)]
    assert all(c.holds for c in conds)
    assert not all(c.holds for c in recognition_conditions("x^4+lambda", "x^3+lambda"))
    with pytest.raises(InfiniteCodimensionError):
        recognition_conditions("lambda")


def test_non_singular_germ_rejected():
    with pytest.raises(NotSingularError):
        alg_objects("x+lambda")


def test_transformation_examples():
    t = transformation_solve(EXP_COS_SIN, "7/12*x^4+lambda", 5)
    assert not transformation_residual(EXP_COS_SIN, "7/12*x^4+lambda", t.X, t.S, 5)
    assert t.X.coeff((0, 0)) == 0 and t.X.coeff((1, 0)) > 0 and t.S.coeff((0, 0)) > 0
    t = transformation_solve("x^3+lambda", "x^3+lambda", 4)
    assert (t.X, t.S) == (Poly.var("x"), Poly.const(1))
    t = transformation_solve("2*x^3+2*lambda", "x^3+lambda", 4)
    assert (t.X, t.S) == (Poly.var("x"), Poly.const(2))


def test_transformation_residual_oracle():
    """Residual recomputed with sympy composition."""
    g, f = "x^3+lambda+x*lambda", "x^3+lambda"
    t = transformation_solve(g, f, 4)
    X, S = (sympy.expand(sum(sympy.Rational(int(c.numerator), int(c.denominator)) * x**a * lam**b
                             for (a, b), c in p.terms.items())) for p in (t.X, t.S))
    res = sympy.expand(x**3 + lam + x * lam - S * (X**3 + lam))
    assert not from_sympy(res).truncate(4)


def test_monomial_helper():
    assert monomials_upto(1) == [(0, 0), (1, 0), (0, 1)]
