"""Transition sets B, H, D: elimination against a sympy Groebner oracle, plus real side conditions."""

import pytest
import sympy

from germforge.errors import InconsistentSystemError
from germforge.poly import Poly
from germforge.transition import (
    SideCondition,
    defining_systems,
    divided_difference,
    eliminate,
    find_real_witness,
    real_filter,
    transition_set,
)
from germforge.unfolding import Unfolding, universal_unfolding
from oracle import from_sympy, sym, to_sympy


def same_up_to_unit(p: Poly, q: Poly) -> bool:
    ratio = None
    if set(p.terms) != set(q.terms):
        return False
    for e in p.terms:
        r = p.terms[e] / q.terms[e]
        if ratio is not None and r != ratio:
            return False
        ratio = r
    return True


def oracle_component(U, name):
    """Elimination with sympy's lex Groebner basis, state variables ranked first."""
    polys, elim = defining_systems(U)[name]
    gens = [sym(v) for v in list(elim) + list(U.parameters)]
    G = sympy.groebner([to_sympy(p) for p in polys], *gens, order="lex")
    dropped = {sym(v) for v in elim}
    return [from_sympy(g, U.parameters) for g in G.exprs if not (g.free_symbols & dropped)]


CASES = [(g, n) for g in ("x^4+lambda", "x^3-lambda*x", "x^4+lambda*x", "x^3+lambda") for n in "BHD"]
CASES.remove(("x^4+lambda*x", "D"))  # too slow for sympy's lex Groebner basis; covered by the acceptance suite


@pytest.mark.parametrize("g, name", CASES)
def test_elimination_matches_oracle(g, name):
    U = universal_unfolding(g)
    T = transition_set(U, filter_real=False)
    comp = getattr(T, name)
    expect = oracle_component(U, name)
    if expect == [] or (len(expect) == 1 and expect[0].is_constant()):
        assert comp.is_empty
    else:
        assert len(comp.generators) == len(expect)
        for a, b in zip(comp.generators, expect):
            assert same_up_to_unit(a.embed(U.parameters), b.embed(a.gens).embed(U.parameters))


def test_quartic_transition_set():
    U = universal_unfolding("x^4+lambda")
    T = transition_set(U)
    P = U.parameters
    assert T.B.is_empty
    assert same_up_to_unit(T.H.pieces[0].poly, Poly.parse("8*alpha2^3+27*alpha1^2", P))
    assert same_up_to_unit(T.D.pieces[0].poly, Poly.parse("alpha1", P))
    assert [str(c) for c in T.D.pieces[0].conditions] == ["alpha2 <= 0"]


def test_pitchfork_transition_set():
    U = universal_unfolding("x^3-lambda*x")
    T = transition_set(U)
    assert str(T.B) == "alpha2^3 + alpha1 = 0" and str(T.H) == "alpha1 = 0" and T.D.is_empty


def test_codimension_four_bifurcation_set():
    U = universal_unfolding("x^5+lambda*x+lambda^2")
    polys, elim = defining_systems(U)["B"]
    B = eliminate(polys, elim, U.parameters)
    assert len(B) == 1
    assert same_up_to_unit(B[0], Poly.parse("alpha1-alpha2^5-alpha2^3*alpha4+alpha2^2*alpha3", B[0].gens))


def test_divided_difference():
    p = Poly.parse("x^3+lambda*x", ("x", "lambda"))
    q = divided_difference(p, "x", "x1", "x2")
    x1, x2, lam = sympy.symbols("x1 x2 lambda")
    expect = sympy.expand(sympy.cancel(((x1**3 + lam * x1) - (x2**3 + lam * x2)) / (x1 - x2)))
    assert sympy.expand(to_sympy(q) - expect) == 0


def test_real_witness_and_empty_real():
    U = universal_unfolding("x^4+lambda")
    assert find_real_witness(U, "D", (0.0, -0.5)) is not None
    assert find_real_witness(U, "D", (0.0, 0.5)) is None
    V = Unfolding(Poly.parse("x^2+lambda^2+1"), [Poly.parse("x")], ("a",))
    conds = real_filter(V, "B", Poly.parse("a", ("a",)), box=[(-0.2, 0.2)], samples=5)
    assert [c.kind for c in conds] in (["empty-real"], ["undetermined"])


def test_side_condition_semantics():
    c = SideCondition("sign", "alpha2", "<=")
    assert c.holds({"alpha2": -1.0}) and not c.holds({"alpha2": 1.0})
    assert not SideCondition("empty-real").holds({"alpha2": 0.0})
    assert SideCondition("all-real").holds({"alpha2": 0.0})


def test_no_parameters_gives_empty_sets():
    T = transition_set(universal_unfolding("x^2+lambda"))
    assert all(c.is_empty for c in T.components) and T.pieces() == []


def test_whole_space_component_raises():
    U = Unfolding(Poly.parse("lambda^2"), [Poly.parse("x^3")], ("a",))
    with pytest.raises(InconsistentSystemError):
        transition_set(U)


def _codim4_points(kind, count=12, seed=1):
    """Exact rational parameter points on the H or D variety of the codimension-four unfolding.

    With G = x^5 + lambda*x + a1 + a2*lambda + a3*x^2 + a4*x^3 the defining
    equations are linear in suitable unknowns once the state values are
    chosen, so points are built directly from random rationals.
    """
    import random

    rng = random.Random(seed)
    q = lambda: sympy.Rational(rng.randint(-9, 9), rng.randint(1, 5))
    a1, a2, a3, a4, lm = sympy.symbols("a1 a2 a3 a4 lm")
    G = lambda v: v**5 + lm * v + a1 + a2 * lm + a3 * v**2 + a4 * v**3
    out = []
    while len(out) < count:
        if kind == "D":
            x1, x2, s2 = q(), q(), q()
            if x1 == x2:
                continue
            eqs = [sympy.diff(G(t), t).subs(t, v) for t in [sympy.Symbol("t")] for v in (x1, x2)]
            eqs.append(sympy.expand(G(x1) - G(x2)))
            sol = sympy.solve([e.subs(a2, s2) for e in eqs], [lm, a3, a4], dict=True)
            if len(sol) != 1 or set(sol[0]) != {lm, a3, a4}:
                continue
            s1 = sympy.solve(G(x1).subs({**sol[0], a2: s2}), a1)[0]
            out.append((s1, s2, sol[0][a3], sol[0][a4]))
        else:
            x0, s4, s2 = q(), q(), q()
            s3 = -(20 * x0**3 + 6 * s4 * x0) / 2
            lam0 = -(5 * x0**4 + 2 * s3 * x0 + 3 * s4 * x0**2)
            s1 = -(x0**5 + lam0 * x0 + s2 * lam0 + s3 * x0**2 + s4 * x0**3)
            out.append((s1, s2, s3, s4))
    return out


def _value(p: Poly, point):
    from gmpy2 import mpq

    r = p.subs({v: mpq(int(c.p), int(c.q)) for v, c in zip(p.gens, point)})
    assert all(not any(e) for e in r.terms)
    return sum(r.terms.values(), mpq(0))


def test_codimension_four_hysteresis_and_double_limit_sets():
    """The codimension-four unfolding's H and D eliminants vanish on independently constructed variety points."""
    U = universal_unfolding("x^5+lambda*x+lambda^2")
    P = U.parameters
    H = eliminate(*defining_systems(U)["H"], P)
    D = eliminate(*defining_systems(U)["D"], P)
    assert len(H) == 1 and len(D) == 1
    for pt in _codim4_points("H"):
        assert _value(H[0].embed(P), pt) == 0
    for pt in _codim4_points("D"):
        assert _value(D[0].embed(P), pt) == 0
    # the coefficient of alpha2^3*alpha3^2*alpha4^3 relative to alpha1^3 is 11000 : 200000
    d = D[0].embed(P)
    assert d.coeff((0, 3, 2, 3)) * 200000 == d.coeff((3, 0, 0, 0)) * 11000


def test_reference_double_limit_coefficient_is_inconsistent():
    """With 111000 in place of 11000 the D polynomial misses points on the D variety."""
    from test_acceptance import CODIM4_D

    P = ("alpha1", "alpha2", "alpha3", "alpha4")
    as_given = Poly.parse(CODIM4_D.replace("a", "alpha"), P)
    corrected = Poly.parse(CODIM4_D.replace("111000", "11000").replace("a", "alpha"), P)
    pts = _codim4_points("D", count=4)
    assert all(_value(corrected, pt) == 0 for pt in pts)
    assert any(_value(as_given, pt) != 0 for pt in pts)
