"""Germ expressions: parsing and exact truncated Taylor jets with tail certificates.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := ['-'] factor ('*' factor)*
    factor := base ('^' posint)?
    base   := var | rational | '(' expr ')' | func '(' expr ')'
    func   := 'exp' | 'sin' | 'cos' | 'ln1p'
    rational := int ('/' posint)?

``var`` is ``x`` or ``lambda`` for germs; :func:`parse_polynomial` accepts any
variable in the caller's list (unfolding parameters, auxiliary variables).

A :class:`Jet` is the degree-N Taylor polynomial plus a :class:`TailSupport`:
a finite set of monomials such that every term of the true series above
degree N is divisible by one of them.  Tails are derived structurally, so
flat germs never show up; see :func:`taylor_jet`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from gmpy2 import mpq

from .errors import CompositionError, GermSyntaxError
from .poly import XL, Poly, minimal_monomials, mono_divides, mono_mul

FUNCTIONS = ("exp", "sin", "cos", "ln1p")


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Add:
    terms: tuple


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Func:
    name: str
    arg: object


GermExpression = (Var, Const, Add, Mul, Pow, Func)


def is_polynomial(e) -> bool:
    if isinstance(e, (Var, Const)):
        return True
    if isinstance(e, Add):
        return all(is_polynomial(t) for t in e.terms)
    if isinstance(e, Mul):
        return all(is_polynomial(t) for t in e.factors)
    if isinstance(e, Pow):
        return is_polynomial(e.base)
    return False


def to_text(e) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"
    if isinstance(e, Add):
        return "(" + " + ".join(to_text(t) for t in e.terms) + ")"
    if isinstance(e, Mul):
        return "*".join(to_text(t) for t in e.factors)
    if isinstance(e, Pow):
        return f"{to_text(e.base)}^{e.exp}"
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg)})"
    raise TypeError(e)


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+(?:[eE][-+]?\d+)?)|(?P<name>[A-Za-z_λ][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise GermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        val = m.group(kind)
        if kind == "num" and not val.isdigit():
            raise GermSyntaxError(f"non-rational literal {val!r}; write exact fractions like 3/2", start)
        if kind == "op" and val == "**":
            val = "^"
        if kind == "name" and val == "λ":
            val = "lambda"
        out.append((kind, val, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text, variables):
        self.toks = _tokenize(text)
        self.i = 0
        self.variables = tuple(variables)

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, val=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (val and tok[1] != val):
            want = val or kind
            got = tok[1] if tok[1] is not None else "end of input"
            raise GermSyntaxError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            raise GermSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return e

    def expr(self):
        terms = [self.term()]
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else Mul((Const(Fraction(-1)), t)))
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self):
        neg = False
        if self.peek()[1] == "-":
            self.take()
            neg = True
        factors = [self.factor()]
        while self.peek()[1] == "*":
            self.take()
            factors.append(self.factor())
        if neg:
            factors.insert(0, Const(Fraction(-1)))
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self):
        b = self.base()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take("num")
            n = int(tok[1])
            if n < 1:
                raise GermSyntaxError("exponent must be a positive integer", tok[2])
            return Pow(b, n)
        return b

    def base(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            num = int(val)
            if self.peek()[1] == "/":
                self.take()
                dtok = self.take("num")
                den = int(dtok[1])
                if den == 0:
                    raise GermSyntaxError("zero denominator", dtok[2])
                return Const(Fraction(num, den))
            return Const(Fraction(num))
        if kind == "name":
            self.take()
            if self.peek()[1] == "(":
                if val not in FUNCTIONS:
                    raise GermSyntaxError(f"unknown function {val!r}; supported: {', '.join(FUNCTIONS)}", pos)
                self.take("op", "(")
                arg = self.expr()
                self.take("op", ")")
                return Func(val, arg)
            if val in FUNCTIONS:
                raise GermSyntaxError(f"function {val!r} needs an argument", pos)
            if val not in self.variables:
                raise GermSyntaxError(f"unknown name {val!r}; variables are {', '.join(self.variables)}", pos)
            return Var(val)
        if val == "(":
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        got = val if val is not None else "end of input"
        raise GermSyntaxError(f"unexpected {got!r}", pos)


def parse_germ(text: str, variables=XL):
    """Parse germ text into an expression tree with exact rational constants."""
    return _Parser(text, variables).parse()


def parse_polynomial(text: str, gens=XL) -> Poly:
    e = _Parser(text, gens).parse()
    if not is_polynomial(e):
        raise GermSyntaxError("transcendental functions are not allowed here", 0)
    return expr_to_poly(e, gens)


def expr_to_poly(e, gens=XL) -> Poly:
    if isinstance(e, Var):
        return Poly.var(e.name, gens)
    if isinstance(e, Const):
        return Poly.const(e.value, gens)
    if isinstance(e, Add):
        out = Poly.zero(gens)
        for t in e.terms:
            out = out + expr_to_poly(t, gens)
        return out
    if isinstance(e, Mul):
        out = Poly.const(1, gens)
        for t in e.factors:
            out = out * expr_to_poly(t, gens)
        return out
    if isinstance(e, Pow):
        return expr_to_poly(e.base, gens) ** e.exp
    raise ValueError("not a polynomial expression")


# ---------------------------------------------------------------------------
# jets


class TailSupport:
    """Monomial cone bounding the terms of a series above its truncation degree.

    ``cone`` is a tuple of pairwise non-divisible exponent tuples; an empty
    cone means the jet is exact.  ``cone is None`` is the "unknown" marker.
    """

    __slots__ = ("cone",)

    def __init__(self, cone=()):
        self.cone = None if cone is None else tuple(minimal_monomials(cone))

    @classmethod
    def unknown(cls):
        return cls(None)

    @property
    def is_unknown(self) -> bool:
        return self.cone is None

    @property
    def is_exact(self) -> bool:
        return self.cone == ()

    def covers(self, mono) -> bool:
        """True when ``mono`` is divisible by a cone element (always False if unknown)."""
        return self.cone is not None and any(mono_divides(c, mono) for c in self.cone)

    def __eq__(self, other):
        if isinstance(other, TailSupport):
            return self.cone == other.cone
        if other is None:
            return self.cone is None
        return self.cone == tuple(minimal_monomials(other))

    def __hash__(self):
        return hash(self.cone)

    def __iter__(self):
        return iter(self.cone or ())

    def __repr__(self):
        return "TailSupport(unknown)" if self.cone is None else f"TailSupport({list(self.cone)})"


class Jet:
    """The degree-``degree`` jet of a germ together with its tail certificate."""

    __slots__ = ("poly", "degree", "tail")

    def __init__(self, poly: Poly, degree: int, tail=None):
        if degree < 0:
            raise ValueError("jet degree must be nonnegative")
        extra = [e for e in poly.terms if sum(e) > degree]
        if tail is None:
            tail = TailSupport(())
        elif not isinstance(tail, TailSupport):
            tail = TailSupport(tail)
        if extra:
            # terms above the degree move into the tail certificate
            tail = TailSupport(None) if tail.is_unknown else TailSupport(list(tail.cone) + extra)
            poly = poly.truncate(degree)
        self.poly = poly
        self.degree = degree
        self.tail = tail

    @classmethod
    def exact(cls, p: Poly, degree: int):
        return cls(p, degree, ())

    @property
    def gens(self):
        return self.poly.gens

    def __repr__(self):
        return f"Jet({self.poly}, N={self.degree}, tail={self.tail!r})"

    def support(self):
        """Minimal monomials dividing every term of the full series, or None if unknown."""
        if self.tail.is_unknown:
            return None
        return minimal_monomials(list(self.poly.terms) + list(self.tail.cone))

    def __add__(self, other):
        other = _as_jet(other, self)
        N = min(self.degree, other.degree)
        tail = _union_tail(_lowered_tail(self, N), _lowered_tail(other, N))
        return Jet((self.poly + other.poly).truncate(N), N, tail)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.poly, self.degree, self.tail)

    def __sub__(self, other):
        return self + (-_as_jet(other, self))

    def __rsub__(self, other):
        return _as_jet(other, self) - self

    def __mul__(self, other):
        other = _as_jet(other, self)
        N = min(self.degree, other.degree)
        a, b = self.truncated(N), other.truncated(N)
        full = a.poly * b.poly
        sa, sb = a.support(), b.support()
        if sa is None or sb is None:
            tail = TailSupport.unknown()
        else:
            cone = [e for e in full.terms if sum(e) > N]
            cone += [mono_mul(t, s) for t in a.tail.cone for s in sb]
            cone += [mono_mul(s, t) for s in sa for t in b.tail.cone]
            tail = TailSupport(cone)
        return Jet(full.truncate(N), N, tail)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Jet.exact(Poly.const(1, self.gens), self.degree)
        for _ in range(n):
            out = out * self
        return out

    def truncated(self, N: int):
        if N >= self.degree:
            return self
        return Jet(self.poly, N, _lowered_tail(self, N))

    def diff(self, var):
        """Jet of the partial derivative; the degree drops by one."""
        if self.degree == 0:
            raise ValueError("cannot differentiate a degree-0 jet")
        i = self.gens.index(var)
        if self.tail.is_unknown:
            tail = TailSupport.unknown()
        else:
            cone = []
            for c in self.tail.cone:
                c = list(c)
                if c[i]:
                    c[i] -= 1
                cone.append(tuple(c))
            tail = TailSupport(cone)
        return Jet(self.poly.diff(var).truncate(self.degree - 1), self.degree - 1, tail)

    def mul_poly(self, p: Poly):
        return self * Jet.exact(p.embed(self.gens), self.degree)


def _as_jet(other, like: Jet) -> Jet:
    if isinstance(other, Jet):
        return other
    if isinstance(other, Poly):
        return Jet.exact(other.embed(like.gens), like.degree)
    return Jet.exact(Poly.const(other, like.gens), like.degree)


def _lowered_tail(j: Jet, N: int) -> TailSupport:
    if N >= j.degree:
        return j.tail
    if j.tail.is_unknown:
        return j.tail
    extra = [e for e in j.poly.terms if sum(e) > N]
    return TailSupport(list(j.tail.cone) + extra)


def _union_tail(a: TailSupport, b: TailSupport) -> TailSupport:
    if a.is_unknown or b.is_unknown:
        return TailSupport.unknown()
    return TailSupport(list(a.cone) + list(b.cone))


def series_coefficient(name: str, k: int) -> Fraction:
    if name == "exp":
        return Fraction(1, factorial(k))
    if name == "sin":
        return Fraction(0) if k % 2 == 0 else Fraction((-1) ** ((k - 1) // 2), factorial(k))
    if name == "cos":
        return Fraction(0) if k % 2 else Fraction((-1) ** (k // 2), factorial(k))
    if name == "ln1p":
        return Fraction(0) if k == 0 else Fraction((-1) ** (k + 1), k)
    raise ValueError(name)


def _compose(name: str, u: Jet, node) -> Jet:
    N, gens = u.degree, u.gens
    if u.poly.constant_term():
        raise CompositionError(
            f"{name}({to_text(node.arg)}) has an argument with nonzero constant term "
            f"{u.poly.constant_term()}; only germs vanishing at the origin can be composed"
        )
    support = u.support()
    one = Jet.exact(Poly.const(1, gens), N)
    if support is not None and not support:
        # u is identically zero as a series
        return one * series_coefficient(name, 0)
    if support is None:
        order = 1
    else:
        order = min(sum(m) for m in support)
    K = N // order
    result = one * series_coefficient(name, 0)
    power = one
    cone = []
    unknown = support is None
    for k in range(1, K + 1):
        power = power * u
        c = series_coefficient(name, k)
        if c:
            result = result + power * c
    if not unknown:
        # the first nonzero coefficient past K bounds every remaining term
        k_star = K + 1
        while not series_coefficient(name, k_star):
            k_star += 1
        ideal = [tuple(0 for _ in gens)]
        for _ in range(k_star):
            ideal = minimal_monomials(mono_mul(a, s) for a in ideal for s in support)
        cone = list(ideal)
        if result.tail.is_unknown:
            unknown = True
        else:
            cone += list(result.tail.cone)
    tail = TailSupport.unknown() if unknown else TailSupport(cone)
    return Jet(result.poly, N, tail)


def taylor_jet(e, N: int, gens=XL) -> Jet:
    """Exact degree-N Taylor jet of a germ expression, with a sound tail cone."""
    if isinstance(e, str):
        e = parse_germ(e, gens)
    if N < 0:
        raise ValueError("degree must be nonnegative")
    memo = {}

    def walk(node) -> Jet:
        hit = memo.get(id(node))
        if hit is not None:
            return hit[1]
        if isinstance(node, (Var, Const)):
            out = Jet(expr_to_poly(node, gens), N, ())
        elif isinstance(node, Add):
            out = walk(node.terms[0])
            for t in node.terms[1:]:
                out = out + walk(t)
        elif isinstance(node, Mul):
            out = walk(node.factors[0])
            for t in node.factors[1:]:
                out = out * walk(t)
        elif isinstance(node, Pow):
            b = walk(node.base)
            out = b
            for _ in range(node.exp - 1):
                out = out * b
        elif isinstance(node, Func):
            out = _compose(node.name, walk(node.arg), node)
        else:
            raise TypeError(f"not a germ expression: {node!r}")
        memo[id(node)] = (node, out)
        return out

    return walk(e)


def tail_support(e, N: int, gens=XL) -> TailSupport:
    return taylor_jet(e, N, gens).tail


def as_jet(germ, N: int, gens=XL) -> Jet:
    """Jet of a germ given as text, expression tree, Poly or Jet."""
    if isinstance(germ, Jet):
        if germ.degree < N:
            raise ValueError(f"jet of degree {germ.degree} cannot supply degree {N}")
        return germ.truncated(N)
    if isinstance(germ, Poly):
        return Jet(germ.embed(gens) if set(germ.gens) <= set(gens) else germ, N, ())
    return taylor_jet(germ, N, gens)


def coefficient(p: Poly, a: int, b: int):
    """Coefficient of x^a lambda^b in a Poly over (x, lambda)."""
    return p.terms.get((a, b), mpq(0))
