"""Intrinsic ideals: staircases sum_i M^(m_i) <lambda^(n_i)> and intrinsic parts."""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .division import IdealBasis
from .errors import InfiniteCodimensionError
from .ideals import (
    INFINITE,
    TruncationCertificate,
    colon_ideal,
    max_power_in_ideal,
    standard,
    staircase_contains,
)
from .poly import XL, Poly, monomials_of_degree


@dataclass(frozen=True)
class IntrinsicIdeal:
    """The ideal sum_i M^(m_i) <lambda^(n_i)> given by its stairs ``(m_i, n_i)``.

    An empty stair list is the zero ideal.
    """

    stairs: tuple = ()

    def __post_init__(self):
        stairs = tuple((int(m), int(n)) for m, n in self.stairs)
        object.__setattr__(self, "stairs", stairs)
        for (m0, n0), (m1, n1) in zip(stairs, stairs[1:]):
            if not (n1 > n0 and m1 + n1 < m0 + n0):
                raise ValueError(f"ill-formed staircase {list(stairs)}")

    @classmethod
    def from_monomials(cls, monos):
        """Largest staircase contained in the monomial ideal generated by ``monos`` (x, lambda)."""
        monos = list(monos)
        if not monos:
            return cls(())
        top = max(a + b for a, b in monos) + 1
        stairs = []
        best = None
        for n in range(top + 1):
            m = None
            for mm in range(top + 1):
                if all(
                    any(a <= mm - s and b <= n + s for a, b in monos) for s in range(mm + 1)
                ):
                    m = mm
                    break
            if m is None:
                continue
            if best is None or m + n < best:
                stairs.append((m, n))
                best = m + n
            if m == 0:
                break
        return cls(tuple(stairs))

    def contains(self, mono) -> bool:
        return staircase_contains(self.stairs, mono)

    def generators(self):
        """Minimal monomial generators x^(m_i - s) lambda^(n_i + s)."""
        from .poly import minimal_monomials

        gens = []
        for m, n in self.stairs:
            gens.extend((m - s, n + s) for s in range(m + 1))
        return minimal_monomials(gens)

    def corners(self):
        """The intrinsic generators x^(m_i) lambda^(n_i)."""
        return [(m, n) for m, n in self.stairs]

    @property
    def is_finite(self) -> bool:
        return bool(self.stairs) and self.stairs[0][1] == 0

    def complement(self, degree=None):
        """Monomials outside the ideal (all of them when finite, else up to ``degree``)."""
        if degree is None:
            if not self.is_finite:
                raise InfiniteCodimensionError("the staircase has infinite codimension")
            degree = self.stairs[0][0]
        out = []
        for d in range(degree + 1):
            for a in range(d, -1, -1):
                e = (a, d - a)
                if not self.contains(e):
                    out.append(e)
        return sort_monomials(out)

    def basis(self, variables=XL):
        return [Poly.monomial(m, variables) for m in self.generators()]

    def __str__(self):
        if not self.stairs:
            return "0"
        parts = []
        for m, n in self.stairs:
            a = "" if m == 0 else ("M" if m == 1 else f"M^{m}")
            b = "" if n == 0 else ("<lambda>" if n == 1 else f"<lambda^{n}>")
            parts.append(a + b if (a or b) else "<1>")
        return " + ".join(parts)


def sort_monomials(monos):
    """Lowest degree first; at equal degree lambda-heavy (lambda-pure) first."""
    return sorted(monos, key=lambda e: (sum(e), e[0]))


def _normalize_stairs(pairs):
    stairs = []
    best = None
    for m, n in sorted(pairs, key=lambda t: t[1]):
        if best is None or m + n < best:
            stairs.append((m, n))
            best = m + n
    return tuple(stairs)


def intrinsic_part(B) -> IntrinsicIdeal:
    """Itr(<B>): the largest intrinsic ideal inside a finite-codimension ideal.

    For n = 0, 1, ... the least m with M^m <= <B> : lambda^n is found; a
    stair is emitted whenever m + n strictly drops, and the scan stops at
    m = 0.  A :class:`TruncationCertificate` of infinite-codimension type is
    accepted too, in which case its certified staircase is returned.
    """
    if isinstance(B, TruncationCertificate):
        if not B.finite:
            return IntrinsicIdeal(_normalize_stairs(B.staircase))
        B = B.basis
    B = standard(B)
    stairs = []
    best = None
    n = 0
    lam = B.variables.index("lambda")
    while True:
        e = [0] * len(B.variables)
        e[lam] = n
        C = colon_ideal(B, tuple(e)) if n else B
        m = max_power_in_ideal(C)
        if m == INFINITE:
            if n == 0:
                raise InfiniteCodimensionError(
                    "intrinsic parts are computed for finite codimension ideals", evidence=B.gens
                )
            n += 1
            continue
        if best is None or m + n < best:
            stairs.append((m, n))
            best = m + n
        if m == 0:
            break
        n += 1
    return IntrinsicIdeal(tuple(stairs))


def intrinsic_membership(itr: IntrinsicIdeal, f) -> bool:
    """True iff every term of ``f`` (a Poly over x, lambda) lies in the staircase."""
    if isinstance(f, tuple):
        return itr.contains(f)
    f = f.embed(XL) if f.gens != XL else f
    return all(itr.contains(e) for e in f.terms)


def project_out(itr: IntrinsicIdeal, f: Poly) -> Poly:
    """Delete every term of ``f`` lying in the staircase."""
    f = f.embed(XL) if f.gens != XL else f
    return Poly({e: c for e, c in f.terms.items() if not itr.contains(e)}, XL)


def _pivot_key(e):
    # highest total degree first, then the larger power of x
    return (sum(e), e[0])


def echelon(polys):
    """Reduced row echelon form of a list of Polys over (x, lambda).

    The pivot of each row is its highest-degree monomial (x before lambda at
    equal degree); rows are made monic, pivots are cleared from every other
    row, and the result is ordered by increasing pivot.
    """
    rows = []  # list of (pivot, dict)
    for p in polys:
        r = dict(p.terms)
        for piv, row in rows:
            c = r.get(piv)
            if c:
                for e, v in row.items():
                    nv = r.get(e, 0) - c * v
                    if nv:
                        r[e] = nv
                    else:
                        r.pop(e, None)
        if not r:
            continue
        piv = max(r, key=_pivot_key)
        c = r[piv]
        r = {e: v / c for e, v in r.items()}
        new_rows = []
        for opiv, row in rows:
            c2 = row.get(piv)
            if c2:
                row = dict(row)
                for e, v in r.items():
                    nv = row.get(e, 0) - c2 * v
                    if nv:
                        row[e] = nv
                    else:
                        row.pop(e, None)
            new_rows.append((opiv, row))
        rows = new_rows + [(piv, r)]
    rows.sort(key=lambda t: _pivot_key(t[0]))
    return [Poly(r, XL) for _, r in rows]


@dataclass
class IntrinsicDecomposition:
    """``I = itr ⊕ span(complement_part)`` with the complement avoiding the staircase."""

    itr: IntrinsicIdeal
    complement_part: list = field(default_factory=list)

    def contains(self, f: Poly) -> bool:
        """Vector-space membership of ``f`` in ``itr ⊕ span(complement_part)``."""
        r = dict(project_out(self.itr, f).terms)
        for row in self.complement_part:
            piv = max(row.terms, key=_pivot_key)
            c = r.get(piv)
            if c:
                for e, v in row.terms.items():
                    nv = r.get(e, 0) - c * v
                    if nv:
                        r[e] = nv
                    else:
                        r.pop(e, None)
        return not r


def intrinsic_decomposition(B: IdealBasis, span=()) -> IntrinsicDecomposition:
    """Split ``<B> + K{span}`` into its intrinsic part and a complement.

    The intrinsic part is that of the ideal ``<B>``; the complement is an
    echelon basis of the projections (terms outside the staircase) of every
    ``monomial * generator`` below the staircase's top degree and of the
    ``span`` vectors.
    """
    itr = intrinsic_part(B)
    top = itr.stairs[0][0] if itr.stairs else 0
    vectors = []
    for g in B.gens:
        g = g.embed(XL) if g.gens != XL else g
        for d in range(top):
            for m in monomials_of_degree(2, d):
                p = project_out(itr, g.mul_term(m, mpq(1)))
                if p:
                    vectors.append(p)
    for s in span:
        p = project_out(itr, s)
        if p:
            vectors.append(p)
    return IntrinsicDecomposition(itr, echelon(vectors))


__all__ = [
    "IntrinsicIdeal",
    "IntrinsicDecomposition",
    "intrinsic_part",
    "intrinsic_membership",
    "intrinsic_decomposition",
    "project_out",
    "echelon",
    "sort_monomials",
]
