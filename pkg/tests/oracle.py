"""Independent reference computations (sympy / brute force) used by the tests."""

from __future__ import annotations

import sympy
from fractions import Fraction

from gmpy2 import mpq

from germforge.poly import Poly

x, lam = sympy.symbols("x lambda")
SYMS = {"x": x, "lambda": lam}


def sym(name):
    return SYMS.setdefault(name, sympy.Symbol(name))


def to_sympy(p: Poly):
    gens = [sym(g) for g in p.gens]
    out = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for g, k in zip(gens, e):
            term *= g**k
        out += term
    return sympy.expand(out)


def from_sympy(expr, gens=("x", "lambda")) -> Poly:
    P = sympy.Poly(sympy.expand(expr), *[sym(g) for g in gens])
    return Poly({tuple(m): mpq(int(c.p), int(c.q)) for m, c in P.terms()}, tuple(gens))


def jet_sympy(text: str, N: int):
    """Taylor polynomial of total degree <= N from partial derivatives at the origin."""
    src = text.replace("^", "**").replace("lambda", "lam")
    expr = sympy.sympify(src, locals={"lam": lam, "x": x, "ln1p": lambda u: sympy.log(1 + u)})
    out = sympy.Integer(0)
    for d in range(N + 1):
        for i in range(d + 1):
            c = sympy.diff(expr, x, i, lam, d - i) if d else expr
            c = sympy.simplify(c.subs({x: 0, lam: 0}))
            if c:
                out += c / (sympy.factorial(i) * sympy.factorial(d - i)) * x**i * lam ** (d - i)
    return sympy.expand(out)


def monomials_upto(N):
    return [(a, d - a) for d in range(N + 1) for a in range(d, -1, -1)]


class JetSpan:
    """Row-echelon form of the span of {m*g : m monomial} in K[x,lambda]/M^(N+1).

    In this quotient ring every element with a nonzero constant term is a
    unit, so the ideal generated by ``polys`` is exactly this span.  Plain
    Gaussian elimination over ``fractions.Fraction``; columns are processed
    from the largest monomial of ``order`` down, so pivots are leading
    monomials of ideal elements.
    """

    def __init__(self, polys, N, order=None):
        self.N = N
        gens = ("x", "lambda")
        key = order.key(gens) if order is not None else (lambda e: (-sum(e), e))
        self.rank_of = {m: r for r, m in enumerate(sorted(monomials_upto(N), key=key, reverse=True))}
        self.rows = {}  # pivot monomial -> row (dict monomial -> Fraction), pivot coefficient 1
        for g in polys:
            for m in monomials_upto(N):
                self._insert(g.truncate(N).mul_term(m, mpq(1)).truncate(N))

    def _vec(self, p):
        return {e: Fraction(int(c.numerator), int(c.denominator)) for e, c in p.truncate(self.N).terms.items()}

    def _reduce(self, v):
        while v:
            piv = min(v, key=self.rank_of.__getitem__)
            row = self.rows.get(piv)
            if row is None:
                return v, piv
            c = v[piv]
            for e, a in row.items():
                nv = v.get(e, 0) - c * a
                if nv:
                    v[e] = nv
                else:
                    v.pop(e, None)
        return v, None

    def _insert(self, p):
        v, piv = self._reduce(self._vec(p))
        if piv is not None:
            c = v[piv]
            self.rows[piv] = {e: a / c for e, a in v.items()}

    def contains(self, f) -> bool:
        return self._reduce(self._vec(f))[1] is None

    def leading_monomials(self):
        return set(self.rows)


_SPANS = {}


def jet_span(polys, N, order=None):
    key = (tuple(polys), N, None if order is None else repr(order))
    if key not in _SPANS:
        if len(_SPANS) > 64:
            _SPANS.clear()
        _SPANS[key] = JetSpan(polys, N, order)
    return _SPANS[key]


def in_ideal_jet(polys, f, N):
    """Membership of f in <polys> inside K[x,lambda]/M^(N+1)."""
    return jet_span(list(polys), N).contains(f)


def mono(a, b):
    return Poly.monomial((a, b))


def leading_monomials_of_jet_ideal(polys, N, order):
    """All leading monomials (under ``order``) of elements of <polys> in K[x,lambda]/M^(N+1)."""
    return jet_span(list(polys), N, order).leading_monomials()
