"""Sturm-sequence root isolation against sympy's exact real-root isolation."""

import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from germforge.roots import count_roots, isolate, real_roots, squarefree, sturm_sequence

t = sympy.Symbol("t")


def sympy_roots(coeffs):
    p = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in coeffs], t)
    return sorted(float(r) for r in sympy.real_roots(p, multiple=True) if True)


def test_known_roots():
    roots, res = real_roots([1, 0, -2])
    assert [round(r, 12) for r in roots] == [round(-2**0.5, 12), round(2**0.5, 12)]
    assert max(res) <= 1e-9
    assert real_roots([1, 0, 1])[0] == []
    assert real_roots([1, -2, 1])[0] == [1.0]  # double root counted once
    assert real_roots([mpq(3)])[0] == []


def test_squarefree_and_counting():
    p = [mpq(c) for c in (1, -3, 3, -1)]  # (t-1)^3
    assert squarefree(p) == [1, -1]
    seq = sturm_sequence([mpq(c) for c in (1, 0, -5, 0, 4)])  # (t^2-1)(t^2-4)
    assert count_roots(seq, mpq(-3), mpq(3)) == 4
    assert count_roots(seq, mpq(0), mpq(3)) == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=2, max_size=7).filter(lambda c: c[0] != 0))
def test_roots_match_sympy(coeffs):
    p = [mpq(c) for c in coeffs]
    ours, res = real_roots(p)
    expect = sorted(set(sympy_roots(p)))
    assert len(ours) == len(expect)
    for a, b in zip(ours, expect):
        assert abs(a - b) < 1e-7
    assert all(r <= 1e-9 * max(1.0, max(abs(c) for c in coeffs)) * 10 for r in res)
    for a, b in isolate(p):
        assert a < b and count_roots(sturm_sequence(squarefree(p)), a, b) == 1
