"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` is a mapping from exponent tuples to nonzero ``gmpy2.mpq``
coefficients over a fixed tuple of variable names.  Monomials are plain
exponent tuples aligned with ``Poly.gens``; :class:`MonomialOrder` turns them
into sort keys so that the leading term is always the maximum key.

Three order kinds are provided:

* ``alex``  -- anti-graded lex, a local order (every variable is smaller than 1);
* ``lex``   -- plain lexicographic, a global order;
* ``block`` -- an elimination order: blocks compared left to right, each block
  by total degree and then reverse lex.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from numbers import Rational

from gmpy2 import mpq

XL = ("x", "lambda")


def QQ(value) -> mpq:
    """Coerce ints, Fractions, mpqs and 'p/q' strings to an exact rational."""
    if isinstance(value, str):
        return mpq(Fraction(value))
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not exact; pass a Fraction or string")
    if isinstance(value, (int, Rational)) or type(value).__name__ == "mpz":
        return mpq(value)
    return mpq(value)


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


# ---------------------------------------------------------------------------
# monomial helpers (exponent tuples)


def mono_mul(a, b):
    return tuple(i + j for i, j in zip(a, b))


def mono_div(a, b):
    """a / b, assuming b divides a."""
    return tuple(i - j for i, j in zip(a, b))


def mono_divides(b, a) -> bool:
    return all(j <= i for i, j in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(i, j) for i, j in zip(a, b))


def mono_gcd(a, b):
    return tuple(min(i, j) for i, j in zip(a, b))


def mono_deg(a) -> int:
    return sum(a)


def minimal_monomials(monos):
    """Drop every monomial divisible by another one in the collection."""
    out = []
    for m in sorted(set(monos), key=lambda e: (sum(e), e)):
        if not any(mono_divides(o, m) for o in out):
            out.append(m)
    return out


def monomials_of_degree(nvars: int, d: int):
    """All exponent tuples in ``nvars`` variables with total degree ``d``."""
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def monomials_up_to(nvars: int, d: int):
    out = []
    for k in range(d + 1):
        out.extend(monomials_of_degree(nvars, k))
    return out


# ---------------------------------------------------------------------------
# orders


class MonomialOrder:
    """A monomial order over named variables.

    ``precedence`` lists variables from most to least significant.  Variables
    of a polynomial that are missing from the precedence list are an error.
    For ``block`` orders ``blocks`` is a sequence of variable tuples, the
    first block being eliminated first.
    """

    KINDS = ("alex", "lex", "block")

    def __init__(self, kind: str, precedence=XL, blocks=None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown order kind {kind!r}")
        if kind == "block":
            if not blocks:
                raise ValueError("block order needs blocks")
            blocks = tuple(tuple(b) for b in blocks)
            precedence = tuple(v for b in blocks for v in b)
        self.kind = kind
        self.precedence = tuple(precedence)
        self.blocks = blocks
        if len(set(self.precedence)) != len(self.precedence):
            raise ValueError("repeated variable in order")

    @classmethod
    def alex(cls, *precedence):
        return cls("alex", precedence or XL)

    @classmethod
    def lex(cls, *precedence):
        return cls("lex", precedence or XL)

    @classmethod
    def block(cls, *blocks):
        return cls("block", blocks=blocks)

    @property
    def is_local(self) -> bool:
        return self.kind == "alex"

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.precedence == other.precedence
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash((self.kind, self.precedence, self.blocks))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder.block{self.blocks!r}"
        return f"MonomialOrder.{self.kind}{self.precedence!r}"

    def key(self, gens):
        """Return a function mapping exponent tuples over ``gens`` to sort keys."""
        return _order_key(self, tuple(gens))

    def compare(self, a, b, gens=None) -> int:
        """-1, 0, 1 as monomial ``a`` is smaller, equal, greater than ``b``.

        ``a`` and ``b`` are exponent tuples over ``gens`` (default: the
        precedence list) or ``{var: exponent}`` mappings.
        """
        gens = tuple(gens or self.precedence)
        a, b = _as_exponents(a, gens), _as_exponents(b, gens)
        k = self.key(gens)
        ka, kb = k(a), k(b)
        return (ka > kb) - (ka < kb)


def _as_exponents(m, gens):
    if isinstance(m, Poly):
        if len(m.terms) != 1:
            raise ValueError("not a monomial")
        m = m.embed(gens)
        return next(iter(m.terms))
    if isinstance(m, dict):
        bad = set(m) - set(gens)
        if bad:
            raise ValueError(f"variables {sorted(bad)} outside the order's variable list")
        return tuple(m.get(v, 0) for v in gens)
    m = tuple(m)
    if len(m) != len(gens):
        raise ValueError("exponent vector length does not match variable list")
    return m


@lru_cache(maxsize=256)
def _order_key(order: MonomialOrder, gens: tuple):
    missing = [v for v in gens if v not in order.precedence]
    if missing:
        raise ValueError(f"variables {missing} outside the order's variable list")
    # positions of precedence vars inside gens; vars absent from gens contribute 0
    perm = tuple(gens.index(v) if v in gens else -1 for v in order.precedence)

    def pick(e):
        return tuple(e[i] if i >= 0 else 0 for i in perm)

    if order.kind == "lex":
        return pick
    if order.kind == "alex":
        return lambda e: (-sum(e), pick(e))

    spans = []
    start = 0
    for b in order.blocks:
        spans.append((start, start + len(b)))
        start += len(b)

    def block_key(e):
        p = pick(e)
        k = []
        for lo, hi in spans:
            part = p[lo:hi]
            k.append(sum(part))
            k.extend(-v for v in reversed(part))
        return tuple(k)

    return block_key


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Immutable sparse polynomial over ``gens`` with mpq coefficients."""

    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, terms=None, gens=XL):
        self.gens = tuple(gens)
        clean = {}
        if terms:
            n = len(self.gens)
            for e, c in terms.items():
                if c:
                    e = tuple(e)
                    if len(e) != n:
                        raise ValueError("exponent length mismatch")
                    clean[e] = c if isinstance(c, type(mpq())) else QQ(c)
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, gens=XL):
        return cls({}, gens)

    @classmethod
    def const(cls, c, gens=XL):
        return cls({(0,) * len(gens): QQ(c)}, gens)

    @classmethod
    def var(cls, name, gens=XL):
        gens = tuple(gens)
        e = [0] * len(gens)
        e[gens.index(name)] = 1
        return cls({tuple(e): mpq(1)}, gens)

    @classmethod
    def monomial(cls, exps, gens=XL, coeff=1):
        return cls({tuple(exps): QQ(coeff)}, gens)

    @classmethod
    def parse(cls, text, gens=XL):
        """Parse polynomial text (germ grammar, extended to any variables in ``gens``)."""
        from .expr import parse_polynomial

        return parse_polynomial(text, gens)

    # -- basic protocol -----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            if other.gens != self.gens:
                if set(other.gens) | set(self.gens) != set(self.gens) | set(other.gens):
                    return False
                gens = _merged_gens(self.gens, other.gens)
                return self.embed(gens).terms == other.embed(gens).terms
            return self.terms == other.terms
        if isinstance(other, (int, Rational)) or type(other) is type(mpq()):
            return self.terms == Poly.const(other, self.gens).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.gens == self.gens:
                return self, other
            gens = _merged_gens(self.gens, other.gens)
            return self.embed(gens), other.embed(gens)
        return self, Poly.const(other, self.gens)

    def __add__(self, other):
        a, b = self._coerce(other)
        t = dict(a.terms)
        for e, c in b.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Poly(t, a.gens)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.gens)

    def __sub__(self, other):
        a, b = self._coerce(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = QQ(other)
            if not c:
                return Poly.zero(self.gens)
            return Poly({e: c * v for e, v in self.terms.items()}, self.gens)
        a, b = self._coerce(other)
        t = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return Poly(t, a.gens)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / QQ(other))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.gens)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __repr__(self):
        return f"Poly({str(self)!r}, gens={self.gens!r})"

    def __str__(self):
        return format_poly(self)

    # -- structure ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term; -1 for zero."""
        return min((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var) -> int:
        i = self.gens.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def coeff(self, exps):
        if isinstance(exps, dict):
            exps = tuple(exps.get(v, 0) for v in self.gens)
        return self.terms.get(tuple(exps), mpq(0))

    def constant_term(self):
        return self.terms.get((0,) * len(self.gens), mpq(0))

    def monomials(self):
        return list(self.terms)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return [self.gens[i] for i in sorted(used)]

    def embed(self, gens):
        """Re-express over a superset (or reordering) of the current variables."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        idx = []
        for v in self.gens:
            if v not in gens:
                if any(e[self.gens.index(v)] for e in self.terms):
                    raise ValueError(f"variable {v} used but missing from {gens}")
                idx.append(None)
            else:
                idx.append(gens.index(v))
        t = {}
        for e, c in self.terms.items():
            ne = [0] * len(gens)
            for k, i in zip(e, idx):
                if i is not None:
                    ne[i] = k
            t[tuple(ne)] = c
        return Poly(t, gens)

    def truncate(self, N: int):
        """The degree-N jet: drop every term of total degree above N."""
        return Poly({e: c for e, c in self.terms.items() if sum(e) <= N}, self.gens)

    def homogeneous_part(self, d: int):
        return Poly({e: c for e, c in self.terms.items() if sum(e) == d}, self.gens)

    def mul_term(self, exps, c):
        if not c:
            return Poly.zero(self.gens)
        return Poly(
            {tuple(i + j for i, j in zip(e, exps)): c * v for e, v in self.terms.items()},
            self.gens,
        )

    def diff(self, var):
        i = self.gens.index(var)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return Poly(t, self.gens)

    def subs(self, mapping, truncate=None):
        """Substitute polynomials for variables.

        ``mapping`` maps variable names to Polys (or numbers).  With
        ``truncate=N`` every intermediate product is cut at degree N, which
        is how compositions are done inside a jet ring.
        """
        subs = {}
        for v, p in mapping.items():
            if not isinstance(p, Poly):
                p = Poly.const(p, self.gens)
            subs[v] = p
        out_gens = self.gens
        for p in subs.values():
            out_gens = _merged_gens(out_gens, p.gens)
        subs = {v: p.embed(out_gens) for v, p in subs.items()}
        cut = (lambda p: p.truncate(truncate)) if truncate is not None else (lambda p: p)
        powers = {v: [Poly.const(1, out_gens)] for v in subs}

        def power(v, k):
            lst = powers[v]
            while len(lst) <= k:
                lst.append(cut(lst[-1] * subs[v]))
            return lst[k]

        result = Poly.zero(out_gens)
        keep = [(i, v) for i, v in enumerate(self.gens) if v not in subs]
        repl = [(i, v) for i, v in enumerate(self.gens) if v in subs]
        for e, c in self.terms.items():
            base_e = [0] * len(out_gens)
            for i, v in keep:
                base_e[out_gens.index(v)] = e[i]
            term = Poly({tuple(base_e): c}, out_gens)
            for i, v in repl:
                if e[i]:
                    term = cut(term * power(v, e[i]))
            result = result + term
        return cut(result)

    def eval(self, point: dict):
        """Evaluate at ``{var: value}``; missing variables count as 0.

        Exact for rational inputs; float (or numpy) inputs give a float result.
        """
        vals = [point.get(v, 0) for v in self.gens]
        exact = all(isinstance(v, (int, Rational)) or type(v) is type(mpq()) for v in vals)
        total = 0
        for e, c in self.terms.items():
            term = c if exact else float(c)
            for x, k in zip(vals, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    def monic(self, order: MonomialOrder):
        if not self.terms:
            return self
        c, _ = self.leading(order)
        return self * (1 / c)

    def leading(self, order: MonomialOrder):
        """(coefficient, exponent) of the leading term; raises on zero."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        k = order.key(self.gens)
        e = max(self.terms, key=k)
        return self.terms[e], e

    def sorted_terms(self, order: MonomialOrder, reverse=True):
        k = order.key(self.gens)
        return sorted(self.terms.items(), key=lambda t: k(t[0]), reverse=reverse)

    def content_monomial(self):
        """The largest monomial dividing every term (gcd of the support)."""
        it = iter(self.terms)
        try:
            g = next(it)
        except StopIteration:
            return None
        for e in it:
            g = mono_gcd(g, e)
        return g


def _merged_gens(a, b):
    out = list(a)
    for v in b:
        if v not in out:
            out.append(v)
    return tuple(out)


def merged_gens(*gens_lists):
    out = ()
    for g in gens_lists:
        out = _merged_gens(out, g)
    return out


# ---------------------------------------------------------------------------
# leading data and S-germs

ZERO_MARKER = None


def leading_data(order: MonomialOrder, f: Poly):
    """Return ``(LT, LM, LC)``; ``None`` for the zero polynomial.

    LT is a one-term Poly, LM an exponent tuple, LC an mpq.
    """
    if not f.terms:
        return ZERO_MARKER
    c, e = f.leading(order)
    return Poly({e: c}, f.gens), e, c


def s_germ(order: MonomialOrder, f: Poly, g: Poly) -> Poly:
    """LCM(LM f, LM g)/LT(f) * f - LCM(LM f, LM g)/LT(g) * g; zero if either is zero."""
    f, g = f._coerce(g)
    if not f.terms or not g.terms:
        return Poly.zero(f.gens)
    cf, ef = f.leading(order)
    cg, eg = g.leading(order)
    l = mono_lcm(ef, eg)
    return f.mul_term(mono_div(l, ef), 1 / cf) - g.mul_term(mono_div(l, eg), 1 / cg)


# ---------------------------------------------------------------------------
# printing

def _display_key(gens):
    # graded, then lex in the given variable order; printed from the top down
    return lambda e: (sum(e), e)


def format_monomial(e, gens) -> str:
    parts = []
    for v, k in zip(gens, e):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_poly(p: Poly, gens=None) -> str:
    if not p.terms:
        return "0"
    gens = p.gens if gens is None else gens
    key = _display_key(gens)
    out = []
    for e in sorted(p.terms, key=key, reverse=True):
        c = p.terms[e]
        m = format_monomial(e, gens)
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = _fmt_q(a)
        elif a == 1:
            body = m
        else:
            body = f"{_fmt_q(a)}*{m}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def _fmt_q(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
