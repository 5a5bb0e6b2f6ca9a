"""Division, standard bases and Gröbner bases.

Two ring contexts are supported:

* ``ring="jet"`` -- the truncated local ring K[x, lambda, ...]/M^(N+1) under a
  local order.  Every product is cut at degree N, so each division step
  strictly lowers the leading monomial inside a finite set of monomials and
  the process terminates.  Results hold modulo M^(N+1); whether N is large
  enough for the underlying germs is certified separately
  (:func:`germforge.ideals.verify_truncation`).
* ``ring="poly"`` -- the polynomial ring under a global order (lex or block),
  computed exactly with Buchberger's algorithm.

Internally the algorithms work on plain ``{exponent: mpq}`` dicts; the public
functions take and return :class:`~germforge.poly.Poly` values.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations

from gmpy2 import mpq

from .poly import (
    XL,
    MonomialOrder,
    Poly,
    merged_gens,
    mono_div,
    mono_divides,
    mono_lcm,
)


class IdealBasis:
    """An ordered generator list together with its order and ring context."""

    __slots__ = ("gens", "order", "ring", "N", "variables", "meta")

    def __init__(self, gens, order=None, ring="jet", N=None, variables=None, meta=None):
        if ring not in ("jet", "poly"):
            raise ValueError("ring must be 'jet' or 'poly'")
        parse_vars = variables or (order.precedence if order is not None else XL)
        polys = [Poly.parse(g, parse_vars) if isinstance(g, str) else g for g in gens]
        if variables is None:
            variables = merged_gens(XL, *(p.gens for p in polys)) if polys else XL
            if order is not None:
                variables = tuple(v for v in order.precedence if v in variables or v in XL) or variables
        variables = tuple(variables)
        if order is None:
            order = MonomialOrder("alex", variables) if ring == "jet" else MonomialOrder("lex", variables)
        if ring == "jet":
            if N is None:
                raise ValueError("a jet-ring basis needs a truncation degree N")
            if not order.is_local:
                raise ValueError("the jet ring needs a local order")
        elif order.is_local:
            raise ValueError("the polynomial ring needs a global order")
        out = []
        for p in polys:
            p = p.embed(variables)
            if ring == "jet":
                p = p.truncate(N)
            if p:
                out.append(p)
        self.gens = tuple(out)
        self.order = order
        self.ring = ring
        self.N = N if ring == "jet" else None
        self.variables = variables
        self.meta = dict(meta or {})

    def with_gens(self, gens, **meta):
        m = dict(self.meta)
        m.update(meta)
        return IdealBasis(gens, self.order, self.ring, self.N, self.variables, m)

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __eq__(self, other):
        if not isinstance(other, IdealBasis):
            return NotImplemented
        return (self.gens, self.order, self.ring, self.N, self.variables) == (
            other.gens, other.order, other.ring, other.N, other.variables
        )

    __hash__ = None

    def __repr__(self):
        ctx = f"jet(N={self.N})" if self.ring == "jet" else "poly"
        return f"IdealBasis([{', '.join(str(g) for g in self.gens)}], {self.order!r}, {ctx})"

    def leading_monomials(self):
        key = self.order.key(self.variables)
        return [max(g.terms, key=key) for g in self.gens]


@dataclass
class DivisionResult:
    remainder: Poly
    quotients: list = field(default_factory=list)
    truncated: bool = False


# ---------------------------------------------------------------------------
# dict-level kernels


class _Gen:
    """A generator prepared for division: leading data plus its tail terms."""

    __slots__ = ("lm", "lc", "tail", "deg")

    def __init__(self, terms, key):
        lm = max(terms, key=key)
        self.lm = lm
        self.lc = terms[lm]
        self.tail = [(e, c) for e, c in terms.items() if e != lm]
        self.deg = sum(lm)


def _reduce(p, gens, key, N=None, quotients=None, full=True):
    """Divide the term dict ``p`` by the prepared generators.

    Returns ``(remainder_dict, truncated_flag)``.  ``quotients`` (a list of
    dicts aligned with ``gens``) is filled in when given.  With
    ``full=False`` only the leading term is reduced (top reduction).
    """
    p = dict(p)
    rem = {}
    truncated = False
    # max-heap of sort keys for the live monomials of p
    heap = [(_neg(key(e)), e) for e in p]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = p.pop(m, None)
        if c is None:
            continue
        for i, g in enumerate(gens):
            lm = g.lm
            if all(a >= b for a, b in zip(m, lm)):
                q = tuple(a - b for a, b in zip(m, lm))
                coef = c / g.lc
                if quotients is not None:
                    qi = quotients[i]
                    v = qi.get(q, 0) + coef
                    if v:
                        qi[q] = v
                    else:
                        qi.pop(q, None)
                for e, v in g.tail:
                    ne = tuple(a + b for a, b in zip(e, q))
                    if N is not None and sum(ne) > N:
                        truncated = True
                        continue
                    old = p.get(ne)
                    if old is None:
                        p[ne] = -coef * v
                        heapq.heappush(heap, (_neg(key(ne)), ne))
                    else:
                        nv = old - coef * v
                        if nv:
                            p[ne] = nv
                        else:
                            del p[ne]
                break
        else:
            rem[m] = c
            if not full:
                rem.update(p)
                return rem, truncated
    return rem, truncated


class _Neg:
    """Wrap a key so that heapq (a min-heap) pops the largest key first."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k > other.k

    def __eq__(self, other):
        return self.k == other.k


def _neg(k):
    return _Neg(k)


def _spoly(a, b, ga, gb, N=None):
    """S-polynomial of two term dicts with prepared leading data."""
    l = mono_lcm(ga.lm, gb.lm)
    ua, ub = mono_div(l, ga.lm), mono_div(l, gb.lm)
    ca, cb = 1 / ga.lc, 1 / gb.lc
    out = {}
    for e, v in ga.tail:
        ne = tuple(x + y for x, y in zip(e, ua))
        if N is None or sum(ne) <= N:
            out[ne] = out.get(ne, 0) + ca * v
    for e, v in gb.tail:
        ne = tuple(x + y for x, y in zip(e, ub))
        if N is None or sum(ne) <= N:
            out[ne] = out.get(ne, 0) - cb * v
    return {e: v for e, v in out.items() if v}


def _truncate(d, N):
    if N is None:
        return d
    return {e: c for e, c in d.items() if sum(e) <= N}


def _buchberger(polys, key, N=None, criteria=True):
    """Buchberger completion on term dicts; returns a list of term dicts.

    In the jet ring (``N`` given) every S-polynomial is cut at degree N and
    the product criterion is not used; in the polynomial ring both the
    product criterion and the Gebauer--Möller chain criterion prune pairs.
    """
    basis = []
    prepared = []
    pairs = []  # heap of (lcm degree, _Neg(order key of lcm), counter, i, j)
    counter = 0

    def add(p):
        nonlocal counter, pairs
        g = _Gen(p, key)
        j = len(basis)
        h = g.lm
        cands = []
        for i, old in enumerate(prepared):
            l = mono_lcm(old.lm, h)
            if N is not None and sum(l) > N:
                continue  # the lcm itself vanishes in the jet ring
            cands.append((i, l))
        if criteria and N is None:
            # Gebauer--Möller update.  Old pairs whose lcm is a multiple of the
            # new leading monomial (and differs from both new lcms) are redundant.
            kept_old = []
            for item in pairs:
                a, b, l = item[3], item[4], item[5]
                if (
                    mono_divides(h, l)
                    and mono_lcm(prepared[a].lm, h) != l
                    and mono_lcm(prepared[b].lm, h) != l
                ):
                    continue
                kept_old.append(item)
            if len(kept_old) != len(pairs):
                pairs = kept_old
                heapq.heapify(pairs)
            # new pairs: drop those whose lcm is a proper multiple of another new lcm,
            # keep one per repeated lcm, then apply the coprime (product) criterion
            lcms = [l for _, l in cands]
            chained = [
                (i, l)
                for i, l in cands
                if not any(m != l and mono_divides(m, l) for m in lcms)
            ]
            groups = {}
            for i, l in chained:
                groups.setdefault(l, []).append(i)
            cands = []
            for l, idx in groups.items():
                coprime = any(l == tuple(a + b for a, b in zip(prepared[i].lm, h)) for i in idx)
                if not coprime:
                    cands.append((idx[0], l))
        basis.append(p)
        prepared.append(g)
        for i, l in cands:
            counter += 1
            heapq.heappush(pairs, (sum(l), _neg(key(l)), counter, i, j, l))

    for p in polys:
        p = _truncate(p, N)
        if p:
            add(p)

    while pairs:
        _, _, _, i, j, _ = heapq.heappop(pairs)
        s = _spoly(basis[i], basis[j], prepared[i], prepared[j], N)
        if not s:
            continue
        r, _ = _reduce(s, prepared, key, N)
        if r:
            add(r)
    return basis


def _interreduce(polys, key, N=None):
    """Minimal, fully tail-reduced, monic basis from a standard/Gröbner basis."""
    gens = [(max(p, key=key), p) for p in polys if p]
    gens.sort(key=lambda t: key(t[0]))
    minimal = []
    for lm, p in gens:
        if any(mono_divides(olm, lm) for olm, _ in minimal):
            continue
        # drop earlier elements whose lm is divisible by this one
        minimal = [(olm, q) for olm, q in minimal if not mono_divides(lm, olm)]
        minimal.append((lm, p))
    out = []
    prepared = [_Gen(q, key) for _, q in minimal]
    for lm, p in minimal:
        # in a local ring a tail term may be divisible by the generator's own
        # leading monomial; reducing it by the generator itself multiplies by a unit
        c = p[lm]
        tail = {e: v for e, v in p.items() if e != lm}
        r, _ = _reduce(tail, prepared, key, N)
        r[lm] = c
        out.append({e: v / c for e, v in r.items()})
    out.sort(key=lambda d: key(max(d, key=key)), reverse=True)
    return out


# ---------------------------------------------------------------------------
# public API


def _key(B: IdealBasis):
    return B.order.key(B.variables)


def _terms(f: Poly, B: IdealBasis):
    return f.embed(merged_gens(B.variables, f.gens)).embed(B.variables).terms if f.gens != B.variables else f.terms


def divide(f, B: IdealBasis, quotients=True) -> DivisionResult:
    """Remainder of ``f`` on division by the generators of ``B``.

    In the jet ring the result satisfies ``f = sum q_i g_i + r`` modulo
    M^(N+1); ``truncated`` records whether any term was cut.
    """
    if isinstance(f, str):
        f = Poly.parse(f, B.variables)
    key = _key(B)
    p = _terms(f, B)
    N = B.N
    truncated = False
    if N is not None:
        if any(sum(e) > N for e in p):
            truncated = True
            p = _truncate(p, N)
    prepared = [_Gen(g.terms, key) for g in B.gens]
    qs = [dict() for _ in prepared] if quotients else None
    r, cut = _reduce(p, prepared, key, N, qs)
    return DivisionResult(
        Poly(r, B.variables),
        [Poly(q, B.variables) for q in qs] if quotients else [],
        truncated or cut,
    )


def remainder(f, B: IdealBasis) -> Poly:
    return divide(f, B, quotients=False).remainder


def standard_basis(B: IdealBasis) -> IdealBasis:
    """Buchberger completion of ``B`` in its ring (standard basis in the jet ring)."""
    key = _key(B)
    out = _buchberger([g.terms for g in B.gens], key, B.N)
    return B.with_gens([Poly(p, B.variables) for p in out], standard=True)


def reduce_basis(B: IdealBasis, assume_standard=False) -> IdealBasis:
    """Reduced, monic standard (or Gröbner) basis of ``<B>``."""
    key = _key(B)
    polys = [g.terms for g in B.gens]
    if not (assume_standard or B.meta.get("standard")):
        polys = _buchberger(polys, key, B.N)
    out = _interreduce(polys, key, B.N)
    return B.with_gens([Poly(p, B.variables) for p in out], standard=True, reduced=True)


def groebner_basis(B: IdealBasis) -> IdealBasis:
    """Reduced monic Gröbner basis in the polynomial ring."""
    if B.ring != "poly":
        raise ValueError("groebner_basis works in the polynomial ring; use reduce_basis for jets")
    return reduce_basis(B)


@dataclass
class StandardBasisCertificate:
    is_standard: bool
    failures: list  # (i, j, remainder Poly)


def is_standard_basis(B: IdealBasis) -> StandardBasisCertificate:
    """Buchberger's criterion: every S-polynomial remainder must vanish."""
    key = _key(B)
    prepared = [_Gen(g.terms, key) for g in B.gens]
    failures = []
    for i, j in combinations(range(len(B.gens)), 2):
        s = _spoly(B.gens[i].terms, B.gens[j].terms, prepared[i], prepared[j], B.N)
        r, _ = _reduce(s, prepared, key, B.N)
        if r:
            failures.append((i, j, Poly(r, B.variables)))
    return StandardBasisCertificate(not failures, failures)


def leading_ideal(B: IdealBasis):
    """Minimal generators of the leading-monomial ideal of a standard basis."""
    from .poly import minimal_monomials

    return minimal_monomials(B.leading_monomials())


def contains(B: IdealBasis, f) -> bool:
    """Membership test against a standard (or Gröbner) basis ``B``."""
    return not remainder(f, B)


def s_polynomial_remainder(B: IdealBasis, i: int, j: int) -> Poly:
    key = _key(B)
    prepared = [_Gen(g.terms, key) for g in B.gens]
    s = _spoly(B.gens[i].terms, B.gens[j].terms, prepared[i], prepared[j], B.N)
    r, _ = _reduce(s, prepared, key, B.N)
    return Poly(r, B.variables)


def zero_poly(B: IdealBasis) -> Poly:
    return Poly({}, B.variables)


__all__ = [
    "IdealBasis",
    "DivisionResult",
    "StandardBasisCertificate",
    "divide",
    "remainder",
    "standard_basis",
    "reduce_basis",
    "groebner_basis",
    "is_standard_basis",
    "leading_ideal",
    "contains",
    "mpq",
]

