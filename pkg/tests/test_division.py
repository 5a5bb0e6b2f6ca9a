"""Division, standard bases and Groebner bases, checked against linear algebra and sympy."""

import itertools

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from germforge.division import (
    IdealBasis,
    divide,
    groebner_basis,
    is_standard_basis,
    leading_ideal,
    reduce_basis,
    remainder,
    standard_basis,
)
from germforge.expr import as_jet
from germforge.ideals import grevlex, power_in_ideal
from germforge.poly import XL, MonomialOrder, Poly
from oracle import in_ideal_jet, lam, leading_monomials_of_jet_ideal, monomials_upto, to_sympy, x

ALEX = MonomialOrder.alex()
LEX = MonomialOrder.lex()
N = 5

coeffs = st.integers(-3, 3).filter(bool).map(mpq)
local_monos = st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda e: 0 < sum(e) <= 5)
local_polys = st.dictionaries(local_monos, coeffs, min_size=1, max_size=4).map(lambda d: Poly(d, XL))
generator_sets = st.lists(local_polys, min_size=1, max_size=3)
PROPS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def jet_basis(gens, n=N):
    return IdealBasis(gens, ALEX, "jet", n)


def in_lt_ideal(lts, m):
    return any(m[0] >= a and m[1] >= b for a, b in lts)


# -- goldens ---------------------------------------------------------------


def test_unit_divides_everything():
    res = divide("1", jet_basis(["1-x"]))
    assert not res.remainder
    assert res.quotients == [Poly.parse("1+x+x^2+x^3+x^4+x^5")]


def test_infinite_remainder_truncated():
    B = jet_basis(["x*lambda-x^2*lambda^2-x^4"], 21)
    assert divide("x^2*lambda", B).remainder == Poly.parse("x^5+x^9+2*x^13+5*x^17+14*x^21")


def test_worked_standard_basis_adds_remainder():
    f, g = "x*lambda-x^2*lambda^2-x^4", "lambda-x*lambda-x*lambda^2-x^3"
    S = standard_basis(jet_basis([f, g], 8))
    h = divide("x^2*lambda", jet_basis([f], 8)).remainder
    assert leading_ideal(S) == leading_ideal(jet_basis([f, g, h], 8)) == [(0, 1), (5, 0)]


def test_transcendental_triple():
    texts = ["sin(lambda^7+x)+exp(x^4)-x-1-lambda^9", "x^5-lambda^2", "cos(x^6)-lambda-1"]
    for n in (3, 6, 9):
        B = IdealBasis([as_jet(t, n).poly for t in texts], ALEX, "jet", n)
        R = reduce_basis(standard_basis(B))
        assert sorted(leading_ideal(R)) == [(0, 1), (3, 0)]


def test_flat_perturbed_example_reduces_to_monomials():
    texts = ["lambda-lambda*exp(x)", "x-sin(x)", "lambda*x+lambda^3+lambda^2*ln1p(x)"]
    B = IdealBasis([as_jet(t, 6).poly for t in texts], ALEX, "jet", 6)
    cert = is_standard_basis(B)
    assert not cert.is_standard
    assert any(r == Poly.parse("-lambda^3") or r == Poly.parse("lambda^3") for _, _, r in cert.failures)
    assert set(reduce_basis(standard_basis(B)).gens) == {Poly.parse(m) for m in ("x*lambda", "x^3", "lambda^3")}
    S1 = IdealBasis(list(B.gens) + [Poly.parse("lambda^3")], ALEX, "jet", 6)
    assert is_standard_basis(S1).is_standard


def test_reduced_basis_of_sextic_example():
    B = jet_basis(["2*lambda^3-3*lambda^2*x+x^5", "-3*x*lambda^2+5*x^5", "-3*lambda^3+5*x^4*lambda"], 6)
    R = reduce_basis(standard_basis(B))
    reference = [
        Poly.parse("x*lambda^2-25/18*x^4*lambda"),
        Poly.parse("lambda^3-5/3*x^4*lambda"),
        Poly.parse("x^5-5/6*x^4*lambda"),
    ]
    assert set(R.gens) == set(reference)
    assert power_in_ideal(standard_basis(B), 6)


def test_trivial_bases():
    assert standard_basis(jet_basis(["x"])).gens == (Poly.var("x"),)
    assert reduce_basis(standard_basis(jet_basis(["x", "x^2"]))).gens == (Poly.var("x"),)
    assert is_standard_basis(jet_basis(["x"])).is_standard
    assert groebner_basis(IdealBasis(["x"], LEX, "poly")).gens == (Poly.var("x"),)


def test_t_trick_basis_contains_product():
    order = MonomialOrder.block(("t",), ("x", "lambda"))
    B = IdealBasis(["t*x", "(1-t)*lambda"], order, "poly", variables=("t", "x", "lambda"))
    G = groebner_basis(B)
    assert Poly.parse("x*lambda", ("t", "x", "lambda")) in G.gens


# -- global rings against sympy ---------------------------------------------

QUINTIC_IDEAL = ["x^5+x^3*lambda+lambda^2", "5*x^5+3*x^3*lambda", "5*x^4*lambda+3*x^2*lambda^2"]


def _sympy_reduced(gens, order):
    G = sympy.groebner([to_sympy(Poly.parse(g)) for g in gens], x, lam, order=order)
    return {sympy.Poly(g, x, lam).monic().as_expr() for g in G.exprs}


def _ours(gens, order):
    G = groebner_basis(IdealBasis(gens, order, "poly"))
    return {sympy.Poly(to_sympy(g), x, lam).monic().as_expr() for g in G.gens}


@pytest.mark.parametrize("gens", [QUINTIC_IDEAL, ["x^2+lambda^3", "x^3"], ["x*lambda-1", "x^2-lambda"]])
def test_groebner_matches_sympy(gens):
    assert _ours(gens, LEX) == _sympy_reduced(gens, "lex")
    assert _ours(gens, grevlex(XL)) == _sympy_reduced(gens, "grevlex")


def test_quintic_ideal_groebner_up_to_unit_scaling():
    reference = ["3125*lambda^3+108*lambda^4", "18*lambda^3+125*lambda^2*x", "2*x^3*lambda+5*lambda^2", "2*x^5-3*lambda^2"]
    assert _ours(QUINTIC_IDEAL, LEX) == {sympy.Poly(to_sympy(Poly.parse(p)), x, lam).monic().as_expr() for p in reference}


# -- properties --------------------------------------------------------------


@PROPS
@given(generator_sets, local_polys)
def test_division_identity(gens, f):
    B = jet_basis(gens)
    res = divide(f, B)
    total = res.remainder + sum((q * g for q, g in zip(res.quotients, B.gens)), Poly.zero())
    assert not (f - total).truncate(N)
    lts = B.leading_monomials()
    assert not any(in_lt_ideal(lts, e) for e in res.remainder.terms)


@PROPS
@given(generator_sets, local_polys, st.randoms(use_true_random=False))
def test_remainder_unique_under_permutation(gens, f, rnd):
    S = standard_basis(jet_basis(gens))
    r0 = remainder(f, S)
    perm = list(S.gens)
    rnd.shuffle(perm)
    assert remainder(f, S.with_gens(perm)) == r0


@PROPS
@given(generator_sets)
def test_buchberger_output_is_standard(gens):
    S = standard_basis(jet_basis(gens))
    assert is_standard_basis(S).is_standard
    oracle = leading_monomials_of_jet_ideal(gens, N, ALEX)
    lts = leading_ideal(S)
    for m in monomials_upto(N):
        assert in_lt_ideal(lts, m) == (m in oracle), m


@PROPS
@given(generator_sets, local_polys)
def test_membership_matches_linear_algebra(gens, f):
    S = standard_basis(jet_basis(gens))
    assert (not remainder(f, S)) == in_ideal_jet(gens, f, N)


@PROPS
@given(generator_sets)
def test_reduce_is_idempotent(gens):
    R = reduce_basis(standard_basis(jet_basis(gens)))
    assert set(reduce_basis(R).gens) == set(R.gens)


@PROPS
@given(generator_sets)
def test_cross_ring_leading_ideal_agreement(gens):
    """For polynomial inputs containing a power of M, jet and global routes agree below N."""
    gens = list(gens) + [Poly.monomial((N + 1 - i, i)) for i in range(N + 2)]
    S = standard_basis(jet_basis(gens, N))
    glob = groebner_basis(IdealBasis(gens, grevlex(XL), "poly"))
    for m in itertools.product(range(N + 1), repeat=2):
        if sum(m) <= N:
            member_jet = not remainder(Poly.monomial(m), S)
            assert member_jet == in_ideal_jet(gens, Poly.monomial(m), N)
            # global membership of m implies local membership
            if not remainder(Poly.monomial(m), glob):
                assert member_jet


def test_quintic_ideal_remainders_of_x_powers_match_sympy():
    """Remainders of x^n modulo the lex Groebner basis, cross-checked with sympy.reduced."""
    G = groebner_basis(IdealBasis(QUINTIC_IDEAL, LEX, "poly"))
    SG = sympy.groebner([to_sympy(Poly.parse(g)) for g in QUINTIC_IDEAL], x, lam, order="lex")
    for n in range(3, 9):
        ours = divide(f"x^{n}", G, quotients=False).remainder
        _, r = sympy.reduced(x**n, list(SG.exprs), x, lam, order="lex")
        assert sympy.expand(to_sympy(ours) - r) == 0
    assert divide("x^5", G, quotients=False).remainder == Poly.parse("3/2*lambda^2")
    assert divide("x^6", G, quotients=False).remainder == Poly.parse("-27/125*lambda^3")
