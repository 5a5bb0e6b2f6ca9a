"""Finite codimension, quotient bases, colon ideals and truncation certificates.

Every test here reduces to divisions against a standard basis.  For jet-ring
bases (ideals of K[x, lambda]/M^(N+1)) a statement about the true germ ideal
is only valid once :func:`verify_truncation` has certified the degree N:

* finite case -- ``M^k`` lies in the jet ideal for some ``k <= N``; by
  Nakayama's lemma this is equivalent to ``M^k`` lying in the germ ideal;
* infinite case -- a monomial staircase ``sum M^m <lambda^n>`` lies in the
  ideal generated by the polynomial jets inside the localized ring (checked
  exactly with a colon computation), every generator is, term by term,
  inside the staircase, and every tail cone lies in ``M`` times the
  staircase.  Then the germ ideal equals the staircase modulo flat germs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .division import IdealBasis, groebner_basis, reduce_basis, remainder
from .errors import CertificationError, InconclusiveError, InfiniteCodimensionError
from .expr import as_jet
from .poly import (
    XL,
    MonomialOrder,
    Poly,
    merged_gens,
    minimal_monomials,
    mono_div,
    mono_divides,
    mono_gcd,
    mono_mul,
    monomials_of_degree,
)

INFINITE = "infinite"
DEFAULT_CAP = 24


# ---------------------------------------------------------------------------
# helpers


def standard(B: IdealBasis) -> IdealBasis:
    """Reduced standard (Gröbner) basis of ``B``, cached on the basis."""
    if B.meta.get("reduced"):
        return B
    cached = B.meta.get("_reduced")
    if cached is None:
        cached = reduce_basis(B)
        B.meta["_reduced"] = cached
    return cached


def in_ideal(B: IdealBasis, f) -> bool:
    """Membership of a polynomial or exponent tuple in ``<B>`` (ring of ``B``)."""
    S = standard(B)
    if isinstance(f, tuple):
        f = Poly.monomial(f, S.variables)
    return not remainder(f, S)


def _monomial(g, variables):
    if isinstance(g, tuple):
        return g
    if isinstance(g, str):
        g = Poly.parse(g, variables)
    g = g.embed(merged_gens(variables, g.gens)).embed(variables)
    if len(g.terms) != 1:
        raise ValueError(f"colon ideals are supported for monomials only, got {g}")
    (e, c), = g.terms.items()
    return e


def _common_factor(monos):
    it = iter(monos)
    try:
        g = next(it)
    except StopIteration:
        return None
    for m in it:
        g = mono_gcd(g, m)
    return g


def _pure_powers(lts, nvars):
    """Exponent of the smallest pure power of each variable among ``lts`` (None if absent)."""
    out = []
    for i in range(nvars):
        best = None
        for m in lts:
            if all(k == 0 for j, k in enumerate(m) if j != i):
                best = m[i] if best is None else min(best, m[i])
        out.append(best)
    return out


def grevlex(variables) -> MonomialOrder:
    return MonomialOrder.block(tuple(variables))


# ---------------------------------------------------------------------------
# quotient bases and multiplication matrices


@dataclass
class QuotientBasis:
    """Monomials outside the leading ideal; a vector-space basis of the quotient."""

    monomials: list
    variables: tuple = XL

    @property
    def dimension(self) -> int:
        return len(self.monomials)

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def polys(self):
        return [Poly.monomial(m, self.variables) for m in self.monomials]


def _sorted_monos(monos):
    return sorted(monos, key=lambda e: (sum(e), tuple(-k for k in e)))


def normal_set(B: IdealBasis) -> QuotientBasis:
    """Monomials outside ``LT(<B>)``; raises if the staircase is not finite."""
    S = standard(B)
    lts = S.leading_monomials()
    n = len(S.variables)
    if S.ring == "jet":
        finite_at = None
        for d in range(S.N + 1):
            if all(any(mono_divides(l, m) for l in lts) for m in monomials_of_degree(n, d)):
                finite_at = d
                break
        if finite_at is None:
            raise InconclusiveError(
                f"the staircase of the leading ideal is not finite within degree {S.N}; "
                "the ideal may have infinite codimension or N is too small"
            )
        top = finite_at - 1
    else:
        powers = _pure_powers(lts, n)
        if any(p is None for p in powers):
            raise InfiniteCodimensionError(
                "the leading ideal contains no pure power of "
                + ", ".join(v for v, p in zip(S.variables, powers) if p is None),
                evidence=lts,
            )
        top = sum(p - 1 for p in powers)
    monos = []
    for d in range(top + 1):
        for m in monomials_of_degree(n, d):
            if not any(mono_divides(l, m) for l in lts):
                monos.append(m)
    return QuotientBasis(_sorted_monos(monos), S.variables)


@dataclass
class MultMatrix:
    """Matrix of multiplication by ``variable`` on the quotient, in ``basis`` coordinates.

    Column ``j`` holds the coordinates of ``variable * basis[j]`` reduced
    modulo the ideal.  ``nilpotency`` is the least p with matrix^p = 0
    (None when the map is not nilpotent).
    """

    variable: str
    matrix: list
    basis: QuotientBasis
    nilpotency: int | None


def _coords(r: Poly, index, dim):
    v = [mpq(0)] * dim
    for e, c in r.terms.items():
        v[index[e]] = c
    return v


def _matmul(a, b):
    n = len(a)
    m = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), mpq(0)) for j in range(m)] for i in range(n)]


def mult_matrix(B: IdealBasis, u: str) -> MultMatrix:
    S = standard(B)
    Q = normal_set(S)
    index = {m: i for i, m in enumerate(Q.monomials)}
    dim = len(Q)
    U = Poly.var(u, S.variables)
    cols = []
    for m in Q.monomials:
        r = remainder(U * Poly.monomial(m, S.variables), S)
        cols.append(_coords(r, index, dim))
    mat = [[cols[j][i] for j in range(dim)] for i in range(dim)]
    nil = None
    if dim == 0:
        nil = 0
    else:
        power = mat
        for p in range(1, dim + 2):
            if all(not x for row in power for x in row):
                nil = p
                break
            power = _matmul(power, mat)
    return MultMatrix(u, mat, Q, nil)


# ---------------------------------------------------------------------------
# powers of the maximal ideal


def power_in_ideal(B: IdealBasis, k: int) -> bool:
    """True iff every monomial of degree ``k`` lies in ``<B>``."""
    S = standard(B)
    lts = S.leading_monomials()
    monos = monomials_of_degree(len(S.variables), k)
    if not all(any(mono_divides(l, m) for l in lts) for m in monos):
        return False
    return all(in_ideal(S, m) for m in monos)


def max_power_in_ideal(B: IdealBasis):
    """Least ``k`` with ``M^k`` inside ``<B>``.

    Returns ``INFINITE`` when the generators share a non-unit monomial
    factor (so no power of M can be inside), and raises
    :class:`InconclusiveError` when no ``k <= N`` works in the jet ring for
    other reasons.
    """
    S = standard(B)
    if S.ring == "jet":
        for k in range(S.N + 1):
            if power_in_ideal(S, k):
                return k
    else:
        powers = _pure_powers(S.leading_monomials(), len(S.variables))
        if all(p is not None for p in powers):
            for k in range(sum(p - 1 for p in powers) + 2):
                if power_in_ideal(S, k):
                    return k
    common = _common_factor(m for g in B.gens for m in g.terms)
    if common is not None and any(common):
        return INFINITE
    if S.ring == "poly":
        return INFINITE
    raise InconclusiveError(f"no power of the maximal ideal lies in the jet ideal within degree {S.N}")


def power_lambda_test(B: IdealBasis, i: int, j: int) -> bool:
    """True iff ``M^i <lambda^j>`` lies in ``<B>``: every x^a lambda^b with a+b = i+j, b >= j."""
    S = standard(B)
    if S.ring == "jet" and i + j > S.N:
        raise ValueError(f"M^{i}<lambda^{j}> has degree {i + j} above the jet degree {S.N}")
    xi, li = S.variables.index("x"), S.variables.index("lambda")
    n = len(S.variables)
    for s in range(i + 1):
        e = [0] * n
        e[xi] = i - s
        e[li] = j + s
        if not in_ideal(S, tuple(e)):
            return False
    return True


def nilpotency_bounds(B: IdealBasis):
    """(N_x, N_lambda): nilpotency degrees of multiplication by x and lambda."""
    return mult_matrix(B, "x").nilpotency, mult_matrix(B, "lambda").nilpotency


# ---------------------------------------------------------------------------
# intersections and colon ideals (t-trick)


def _fresh(name, taken):
    while name in taken:
        name += "_"
    return name


def _intersection_polys(F, G, variables):
    """Generators of <F> ∩ <G> in K[variables] via t*F, (1-t)*G and elimination of t."""
    t = _fresh("t", variables)
    allv = (t,) + tuple(variables)
    T = Poly.var(t, allv)
    one = Poly.const(1, allv)
    gens = [T * f.embed(allv) for f in F] + [(one - T) * g.embed(allv) for g in G]
    order = MonomialOrder.block((t,), tuple(variables))
    GB = groebner_basis(IdealBasis(gens, order, ring="poly", variables=allv))
    out = []
    for p in GB.gens:
        if all(e[0] == 0 for e in p.terms):
            out.append(Poly({e[1:]: c for e, c in p.terms.items()}, variables))
    return out


def ideal_intersection(B1: IdealBasis, B2: IdealBasis) -> IdealBasis:
    """Gröbner basis of ``<B1> ∩ <B2>`` in the polynomial ring."""
    variables = merged_gens(B1.variables, B2.variables)
    polys = _intersection_polys(
        [g.embed(variables) for g in B1.gens], [g.embed(variables) for g in B2.gens], variables
    )
    if B1.ring == "poly":
        order = B1.order
        if not all(v in order.precedence for v in variables):
            order = grevlex(variables)
    else:
        order = grevlex(variables)
    return groebner_basis(IdealBasis(polys, order, ring="poly", variables=variables))


def _exact_monomial_quotient(p: Poly, m) -> Poly:
    out = {}
    for e, c in p.terms.items():
        if not mono_divides(m, e):
            raise ArithmeticError(f"{p} is not divisible by the monomial {m}")
        out[mono_div(e, m)] = c
    return Poly(out, p.gens)


def polynomial_colon(polys, m, variables):
    """Generators of ``<polys> : <x^m>`` in the polynomial ring."""
    mono = Poly.monomial(m, variables)
    inter = _intersection_polys(polys, [mono], variables)
    return [_exact_monomial_quotient(h, m) for h in inter]


def polynomialized(B: IdealBasis, k: int):
    """Polynomial generators with the same localization as a finite-codimension jet ideal."""
    n = len(B.variables)
    gens = [g.truncate(k - 1) for g in B.gens]
    gens = [g for g in gens if g]
    gens += [Poly.monomial(m, B.variables) for m in monomials_of_degree(n, k)]
    return gens


def colon_ideal(B: IdealBasis, g) -> IdealBasis:
    """``<B> : <g>`` for a monomial ``g``.

    Jet-ring bases must have finite codimension; they are first replaced by
    polynomial generators ``J^(k-1) g_i`` together with all monomials of
    degree ``k`` (``M^k`` inside the ideal), an M-primary polynomial ideal
    with the same localization, so the polynomial colon is the local one.
    """
    m = _monomial(g, B.variables)
    if not any(m):
        return B
    if B.ring == "jet":
        k = max_power_in_ideal(B)
        if k == INFINITE:
            raise InfiniteCodimensionError("colon ideals need a finite codimension ideal", evidence=B.gens)
        if k == 0:
            return B.with_gens([Poly.const(1, B.variables)])
        polys = polynomialized(standard(B), k)
    else:
        polys = list(B.gens)
    quotients = polynomial_colon(polys, m, B.variables)
    meta = {k_: v for k_, v in B.meta.items() if not k_.startswith("_") and k_ not in ("standard", "reduced")}
    meta["colon_by"] = m
    return IdealBasis(quotients, B.order, B.ring, B.N, B.variables, meta)


def local_membership(polys, f, variables=XL) -> bool:
    """Exact membership of a monomial ``f`` in ``<polys>`` localized at the origin.

    ``f`` lies in the localized ideal iff the polynomial colon ``<polys> : f``
    contains an element that does not vanish at the origin, i.e. iff one of
    its generators has a nonzero constant term.
    """
    m = _monomial(f, variables)
    polys = [p.embed(variables) for p in polys if p]
    if not polys:
        return False
    if not any(m):
        quot = polys
    else:
        quot = polynomial_colon(polys, m, variables)
    if any(q.constant_term() for q in quot):
        return True
    return False


# ---------------------------------------------------------------------------
# staircases (shared with the intrinsic module)


def staircase_contains(stairs, mono) -> bool:
    """Is x^a lambda^b inside sum M^m <lambda^n> for the given (m, n) stairs?"""
    a, b = mono
    return any(b >= n and a + b >= m + n for m, n in stairs)


def jet_staircase(B: IdealBasis):
    """Largest staircase inside the jet ideal, stairs of total degree <= N.

    Uses :func:`power_lambda_test` in the jet ring; stairs that only exist
    because of the truncation (``m + n > N``) are dropped.
    """
    S = standard(B)
    stairs = []
    best = None
    for n in range(S.N + 1):
        m = None
        for mm in range(0, S.N - n + 1):
            if power_lambda_test(S, mm, n):
                m = mm
                break
        if m is None:
            continue
        if best is None or m + n < best:
            stairs.append((m, n))
            best = m + n
        if m == 0:
            break
    return stairs


# ---------------------------------------------------------------------------
# certification


@dataclass
class TruncationCertificate:
    """Why a truncation degree can be trusted.

    ``finite`` certificates carry ``k`` with ``M^k`` in the ideal and
    ``k <= N``; infinite-codimension certificates carry the ``staircase``
    that the germ ideal equals (modulo flat germs).
    """

    N: int
    k: int | None
    ring: str
    finite: bool
    staircase: list = field(default_factory=list)
    jets: list = field(default_factory=list)
    basis: IdealBasis | None = None
    notes: list = field(default_factory=list)


def _in_m_times(stairs, mono) -> bool:
    a, b = mono
    return any(b >= n and a + b >= m + n + 1 for m, n in stairs)


def certify_staircase(jets, stairs) -> list:
    """Check that the germ ideal generated by ``jets`` equals the staircase.

    Returns a list of failure messages (empty on success).
    """
    problems = []
    polys = [j.poly for j in jets]
    for j in jets:
        if j.tail.is_unknown:
            problems.append(f"tail of {j.poly} is unknown")
            continue
        for c in j.tail.cone:
            if not _in_m_times(stairs, c):
                problems.append(f"tail cone element {c} of {j.poly} is not in M times the staircase")
        for e in j.poly.terms:
            if not staircase_contains(stairs, e):
                problems.append(f"term {e} of {j.poly} is outside the staircase")
    if problems:
        return problems
    for m, n in stairs:
        for s in range(m + 1):
            mono = (m - s, n + s)
            if not local_membership(polys, mono, XL):
                problems.append(f"x^{mono[0]}*lambda^{mono[1]} is not in the localized jet ideal")
                return problems
    return problems


def _jets_at(gens, N):
    if callable(gens):
        return list(gens(N))
    return [as_jet(g, N) for g in gens]


def verify_truncation(gens, N0: int = 1, cap: int = DEFAULT_CAP, allow_infinite=True) -> TruncationCertificate:
    """Find the least N >= N0 at which the ideal generated by ``gens`` is certified.

    ``gens`` is a list of germs (text, expression trees, Polys or Jets) or a
    callable mapping N to a list of :class:`Jet` values.
    """
    last_problem = "no attempt"
    for N in range(max(N0, 1), cap + 1):
        jets = _jets_at(gens, N)
        B = IdealBasis([j.poly for j in jets], MonomialOrder.alex(), "jet", N, XL)
        S = standard(B)
        k = None
        for kk in range(N + 1):
            if power_in_ideal(S, kk):
                k = kk
                break
        if k is not None:
            exact = all(j.tail.is_exact for j in jets)
            ring = "jet"
            if exact:
                PB = IdealBasis([j.poly for j in jets], grevlex(XL), "poly", variables=XL)
                if power_in_ideal(PB, k):
                    ring = "poly"
            return TruncationCertificate(N, k, ring, True, [], jets, S)
        if not allow_infinite:
            last_problem = f"no power of M inside the jet ideal at N={N}"
            continue
        support = []
        for j in jets:
            s = j.support()
            if s is None:
                support = None
                break
            support.extend(s)
        common = _common_factor(support) if support else None
        if common is not None and common[0] > 0:
            raise InfiniteCodimensionError(
                f"every generator is divisible by {_fmt_mono(common)}, so no power of lambda lies in the ideal",
                evidence={"common_factor": common, "N": N},
            )
        stairs = jet_staircase(S)
        if stairs:
            problems = certify_staircase(jets, stairs)
            if not problems:
                return TruncationCertificate(
                    N, None, "jet", False, stairs, jets, S,
                    [f"ideal equals the staircase {stairs} modulo flat germs"],
                )
            last_problem = problems[0]
        else:
            last_problem = f"no staircase inside the jet ideal at N={N}"
    raise CertificationError(f"truncation not certified up to degree {cap}: {last_problem}")


def _fmt_mono(e):
    from .poly import format_monomial

    return format_monomial(e, XL) or "1"


def require_finite(cert: TruncationCertificate, what="this computation"):
    if not cert.finite:
        raise InfiniteCodimensionError(
            f"{what} needs a finite codimension ideal; the ideal is the staircase {cert.staircase}",
            evidence={"staircase": cert.staircase},
        )
    return cert


__all__ = [
    "INFINITE",
    "QuotientBasis",
    "MultMatrix",
    "TruncationCertificate",
    "normal_set",
    "mult_matrix",
    "max_power_in_ideal",
    "power_in_ideal",
    "power_lambda_test",
    "colon_ideal",
    "ideal_intersection",
    "local_membership",
    "verify_truncation",
    "certify_staircase",
    "jet_staircase",
    "staircase_contains",
    "minimal_monomials",
    "mono_mul",
]
