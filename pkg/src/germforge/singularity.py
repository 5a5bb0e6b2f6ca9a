"""Singularity-theory objects of a scalar germ g(x, lambda).

* high order terms ``P(g) = Itr <x g, lambda g, x^2 g_x, lambda g_x>``;
* the derivative staircase ``S(g)``, its complement and intrinsic generators;
* intermediate order terms, normal forms and recognition conditions;
* the restricted tangent space ``RT(g) = <g, x g_x, lambda g_x>`` and the
  tangent space ``T(g) = RT(g) + K{g_x, g_lambda, ..., lambda^l g_lambda}``;
* contact transformations ``g = S * f(X, lambda)`` solved jet by jet.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

from .division import remainder
from .errors import (
    GermforgeError,
    InconclusiveError,
    InconsistentSystemError,
    InfiniteCodimensionError,
    NotSingularError,
)
from .expr import Jet, as_jet, parse_germ, taylor_jet, to_text
from .ideals import (
    DEFAULT_CAP,
    TruncationCertificate,
    require_finite,
    standard,
    verify_truncation,
)
from .intrinsic import (
    IntrinsicIdeal,
    intrinsic_decomposition,
    intrinsic_part,
    project_out,
)
from .linalg import solve
from .poly import XL, Poly, format_monomial, monomials_up_to

X = Poly.var("x")
L = Poly.var("lambda")


# ---------------------------------------------------------------------------
# germs


class SingularGerm:
    """A germ g(x, lambda) with g(0,0) = g_x(0,0) = 0, given by text, tree or polynomial."""

    def __init__(self, germ, check=True):
        if isinstance(germ, SingularGerm):
            germ = germ.source
        if isinstance(germ, str):
            self.text = germ
            self.source = parse_germ(germ)
        elif isinstance(germ, Poly):
            self.source = germ.embed(XL)
            self.text = str(self.source)
        else:
            self.source = germ
            self.text = to_text(germ)
        self._jets = {}
        self._certs = {}
        if check:
            j = self.jet(1).poly
            if j.coeff((0, 0)) or j.coeff((1, 0)):
                raise NotSingularError(
                    f"{self.text} is not singular at the origin: g(0,0) = {j.coeff((0, 0))}, "
                    f"g_x(0,0) = {j.coeff((1, 0))}"
                )

    def __repr__(self):
        return f"SingularGerm({self.text!r})"

    @property
    def is_polynomial(self) -> bool:
        return isinstance(self.source, Poly)

    def jet(self, N: int) -> Jet:
        j = self._jets.get(N)
        if j is None:
            if isinstance(self.source, Poly):
                j = as_jet(self.source, N)
            else:
                j = taylor_jet(self.source, N)
            self._jets[N] = j
        return j

    def derivative_jets(self, N: int):
        """(g, g_x, g_lambda) as jets of degree N."""
        top = self.jet(N + 1)
        return top.truncated(N), top.diff("x"), top.diff("lambda")

    def high_order_generators(self, N: int):
        g, gx, _ = self.derivative_jets(N)
        return [g.mul_poly(X), g.mul_poly(L), gx.mul_poly(X * X), gx.mul_poly(L)]

    def tangent_generators(self, N: int):
        g, gx, _ = self.derivative_jets(N)
        return [g, gx.mul_poly(X), gx.mul_poly(L)]

    def certificate(self, kind: str, N0: int = 1, cap: int = DEFAULT_CAP) -> TruncationCertificate:
        key = (kind, N0, cap)
        cert = self._certs.get(key)
        if cert is None:
            gens = {"P": self.high_order_generators, "RT": self.tangent_generators}[kind]
            cert = verify_truncation(gens, N0, cap)
            self._certs[key] = cert
        return cert


def as_germ(g, check=True) -> SingularGerm:
    return g if isinstance(g, SingularGerm) else SingularGerm(g, check)


# ---------------------------------------------------------------------------
# P(g), S(g), intermediate terms


def high_order_ideal(g, cap: int = DEFAULT_CAP) -> IntrinsicIdeal:
    """P(g), the intrinsic part of <x g, lambda g, x^2 g_x, lambda g_x>."""
    g = as_germ(g)
    cert = g.certificate("P", cap=cap)
    require_finite(cert, "the high order term ideal")
    return intrinsic_part(cert.basis)


@dataclass
class DerivativeStairs:
    S: IntrinsicIdeal
    S_perp: list
    S_gens: list


def stairs_from_coefficients(p: Poly) -> IntrinsicIdeal:
    """The staircase whose corners are the nonzero, non-dominated coefficients of ``p``."""
    support = [e for e in p.embed(XL).terms]
    corners = []
    for m, n in support:
        dominated = any(
            (p_, q) != (m, n) and q <= n and p_ + q <= m + n for p_, q in support
        )
        if not dominated:
            corners.append((m, n))
    corners.sort(key=lambda t: t[1])
    return IntrinsicIdeal(tuple(corners))


def derivative_stairs(g, N: int | None = None) -> DerivativeStairs:
    """S(g) from the nonzero partial derivatives of g at the origin."""
    g = as_germ(g, check=False)
    if N is None:
        N = _working_degree(g)
    S = stairs_from_coefficients(g.jet(N).poly)
    if not S.is_finite:
        raise InfiniteCodimensionError(
            f"the derivative staircase {S} of {g.text} has no pure power of x up to degree {N}",
            evidence={"stairs": list(S.stairs)},
        )
    if S.stairs[0][0] > N:
        raise InconclusiveError("derivative staircase reaches the truncation degree")
    return DerivativeStairs(S, S.complement(), S.corners())


def _working_degree(g: SingularGerm) -> int:
    """Degree at which P(g) is certified, falling back to a plain cap for S-only uses."""
    try:
        cert = g.certificate("P")
        if cert.finite:
            return max(cert.N, cert.k)
    except GermforgeError:
        pass
    return DEFAULT_CAP


def intermediate_terms(g, P: IntrinsicIdeal | None = None, S: DerivativeStairs | None = None):
    """A = P^perp minus (S^perp and the intrinsic generators of S)."""
    g = as_germ(g)
    if P is None:
        P = high_order_ideal(g)
    if S is None:
        S = derivative_stairs(g, max(P.stairs[0][0], 1))
    excluded = set(S.S_perp) | set(S.S_gens)
    return [m for m in P.complement() if m not in excluded]


# ---------------------------------------------------------------------------
# normal forms


@dataclass
class NormalForm:
    poly: Poly
    degree: int
    high_order: IntrinsicIdeal
    intermediate: list
    removed: list = field(default_factory=list)
    unremoved: list = field(default_factory=list)
    shift: object = 0  # b in x -> x + b*lambda
    scaling: tuple | None = None  # (c, a, b): g -> c*g(a*x, b*lambda)


def _strip(P: IntrinsicIdeal, p: Poly) -> Poly:
    return project_out(P, p)


def _rational_roots(coeffs):
    """Rational roots of sum coeffs[i] * b^i (exact; via sympy's factorization over QQ)."""
    import sympy

    b = sympy.Symbol("b")
    expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * b**i for i, c in enumerate(coeffs))
    if expr == 0:
        return None  # every b works
    poly = sympy.Poly(expr, b, domain="QQ")
    roots = []
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() == 1:
            a1, a0 = factor.all_coeffs()
            r = -a0 / a1
            roots.append(mpq(int(r.p), int(r.q)))
    return sorted(set(roots))


def _shifted(h: Poly, b) -> Poly:
    return h.subs({"x": X + L * b}) if b else h


def _eliminate_intermediate(h: Poly, P: IntrinsicIdeal, A):
    """Choose x -> x + b*lambda to clear as many intermediate terms as possible.

    Candidates for b are 0 and the rational roots of each intermediate-term
    coefficient (a polynomial in b); the winner annihilates the
    lexicographically best set of terms taken in increasing degree.
    """
    present = [m for m in A if h.coeff(m)]
    if not present:
        return h, 0, [], []
    gens = ("x", "lambda", "b")
    hb = h.embed(gens).subs({"x": Poly.var("x", gens) + Poly.var("lambda", gens) * Poly.var("b", gens)})
    coeff_polys = {}
    for m in A:
        cs = {}
        for e, c in hb.terms.items():
            if (e[0], e[1]) == m:
                cs[e[2]] = c
        top = max(cs, default=-1)
        coeff_polys[m] = [cs.get(i, mpq(0)) for i in range(top + 1)]
    candidates = {mpq(0)}
    for m in sorted(A, key=lambda e: (sum(e), e[0])):
        roots = _rational_roots(coeff_polys[m]) if coeff_polys[m] else None
        if roots:
            candidates.update(roots)

    def score(bv):
        return tuple(
            not any(c * bv**i for i, c in enumerate(coeff_polys[m]))
            for m in sorted(A, key=lambda e: (sum(e), e[0]))
        )

    best = max(sorted(candidates, key=lambda v: (abs(v), v)), key=score)
    out = _strip(P, _shifted(h, best))
    removed = [m for m in present if not out.coeff(m)]
    unremoved = [m for m in A if out.coeff(m)]
    return out, best, removed, unremoved


def _nth_root(q, n):
    """Exact rational n-th root of a positive rational, or None."""
    if n == 1:
        return q
    num, exact1 = gmpy2.iroot(gmpy2.mpz(q.numerator), n)
    den, exact2 = gmpy2.iroot(gmpy2.mpz(q.denominator), n)
    if exact1 and exact2:
        return mpq(num, den)
    return None


def _scale_corners(p: Poly, corners):
    """Find rational c, a, b > 0 making every corner coefficient of c*p(a x, b lambda) equal to +-1."""
    coeffs = {m: abs(p.coeff(m)) for m in corners}
    if not corners or any(not c for c in coeffs.values()):
        return None

    def check(c, a, b):
        return all(c * coeffs[(m, n)] * a**m * b**n == 1 for m, n in corners)

    pure = [m for m in corners if m[1] == 0]
    rest = [m for m in corners if m[1] > 0]
    # strategy 1: a = 1, c from the x-pure corner, b from the first lambda corner
    for a in (mpq(1),):
        c = 1 / (coeffs[pure[0]] * a ** pure[0][0]) if pure else mpq(1)
        b = mpq(1)
        if rest:
            m, n = rest[0]
            b = _nth_root(1 / (c * coeffs[(m, n)] * a**m), n)
        if b is not None and check(c, a, b):
            return c, a, b
    # strategy 2: b = 1, c from the first lambda corner's equation together with the pure one
    if pure and rest:
        (m0, _), (m1, _) = pure[0], rest[0]
        if m0 != m1:
            ratio = coeffs[rest[0]] / coeffs[pure[0]]  # a^(m0 - m1) = ratio
            d = m0 - m1
            a = _nth_root(ratio if d > 0 else 1 / ratio, abs(d))
            if a is not None:
                c = 1 / (coeffs[pure[0]] * a**m0)
                if check(c, a, mpq(1)):
                    return c, a, mpq(1)
    return None


def normal_form_details(g, N: int | None = None, normalize: bool = False) -> NormalForm:
    """Normal form with the bookkeeping of what was removed and how."""
    g = as_germ(g)
    cert = g.certificate("P")
    require_finite(cert, "a normal form")
    P = intrinsic_part(cert.basis)
    top = P.stairs[0][0]
    degree = max(N or 0, top - 1, 1)
    h = _strip(P, g.jet(degree).poly)
    S = derivative_stairs(g, max(degree, top))
    A = intermediate_terms(g, P, S)
    h, shift, removed, unremoved = _eliminate_intermediate(h, P, A)
    scaling = None
    if normalize:
        corners = stairs_from_coefficients(h).corners()
        found = _scale_corners(h, corners)
        if found is not None:
            c, a, b = found
            h = h.subs({"x": X * a, "lambda": L * b}) * c
            scaling = (c, a, b)
    return NormalForm(h, degree, P, A, removed, unremoved, shift, scaling)


def normal_form(g, N: int | None = None, normalize: bool = False) -> Poly:
    """Normal form of ``g``: high order terms deleted, intermediate terms reduced.

    With ``normalize=True`` the stair-corner coefficients are scaled to +-1
    by x -> a x, lambda -> b lambda and an overall factor c (all positive).
    """
    return normal_form_details(g, N, normalize).poly


# ---------------------------------------------------------------------------
# tangent spaces


@dataclass
class TangentPresentation:
    """An ideal or vector space given as ``itr ⊕ span(complement)``."""

    itr: IntrinsicIdeal
    complement: list = field(default_factory=list)
    certificate: TruncationCertificate | None = None
    ell: int | None = None

    @property
    def is_intrinsic(self) -> bool:
        return not self.complement

    def quotient_basis(self):
        """Monomials completing a basis of the quotient (outside itr and the pivots)."""
        pivots = {max(p.terms, key=lambda e: (sum(e), e[0])) for p in self.complement}
        return [m for m in self.itr.complement() if m not in pivots]

    def __str__(self):
        s = str(self.itr)
        if self.complement:
            s += " + K{" + ", ".join(str(p) for p in self.complement) + "}"
        return s


def restricted_tangent(g, cap: int = DEFAULT_CAP) -> TangentPresentation:
    """RT(g) = <g, x g_x, lambda g_x>; infinite codimension is certified by staircase."""
    g = as_germ(g)
    cert = g.certificate("RT", cap=cap)
    if not cert.finite:
        return TangentPresentation(IntrinsicIdeal(tuple(cert.staircase)), [], cert)
    dec = intrinsic_decomposition(cert.basis)
    return TangentPresentation(dec.itr, dec.complement_part, cert)


def tangent_space(g, cap: int = DEFAULT_CAP) -> TangentPresentation:
    """T(g) = RT(g) ⊕ K{g_x, g_lambda, lambda g_lambda, ..., lambda^l g_lambda}."""
    g = as_germ(g)
    cert = g.certificate("RT", cap=cap)
    require_finite(cert, "the tangent space")
    N = cert.N
    B = standard(cert.basis)
    _, gx, gl = g.derivative_jets(N)
    span = [gx.poly]
    ell = None
    power = gl.poly
    for l in range(N + 1):
        if not remainder(power * L, B):
            ell = l
            break
        power = (power * L).truncate(N)
    if ell is None:
        raise InconclusiveError(f"no power lambda^(l+1) g_lambda lies in RT(g) within degree {N}")
    power = gl.poly
    for _ in range(ell + 1):
        span.append(power)
        power = (power * L).truncate(N)
    dec = intrinsic_decomposition(cert.basis, span)
    return TangentPresentation(dec.itr, dec.complement_part, cert, ell)


# ---------------------------------------------------------------------------
# recognition


@dataclass(frozen=True)
class Condition:
    monomial: tuple
    vanishes: bool  # True: derivative must be 0; False: must be nonzero
    holds: bool | None = None

    @property
    def derivative(self) -> str:
        m, n = self.monomial
        sub = "x" * m + "l" * n
        return f"g_{sub}" if sub else "g"

    def __str__(self):
        rel = "= 0" if self.vanishes else "!= 0"
        s = f"{self.derivative}(0,0) {rel}"
        if self.holds is not None:
            s += "  [holds]" if self.holds else "  [fails]"
        return s


def recognition_conditions(nf, g=None):
    """Zero conditions on S^perp and nonvanishing conditions at the corners of S(nf).

    When ``g`` is given each condition records whether ``g`` satisfies it.
    """
    nf = as_germ(nf, check=False)
    top = nf.jet(DEFAULT_CAP).poly.degree() if nf.is_polynomial else DEFAULT_CAP
    D = derivative_stairs(nf, max(top, 1))
    gj = None
    if g is not None:
        g = as_germ(g, check=False)
        gj = g.jet(max(D.S.stairs[0][0], 1)).poly
    out = []
    for m in D.S_perp:
        out.append(Condition(m, True, None if gj is None else not gj.coeff(m)))
    for m in D.S_gens:
        out.append(Condition(m, False, None if gj is None else bool(gj.coeff(m))))
    return out


# ---------------------------------------------------------------------------
# contact transformations


@dataclass
class ContactTransformation:
    X: Poly
    S: Poly
    degree: int

    def residual(self, g, f) -> Poly:
        return transformation_residual(g, f, self.X, self.S, self.degree)


def transformation_residual(g, f, Xp, Sp, k) -> Poly:
    """J^k(g - S * f(X, lambda))."""
    gj = as_germ(g, check=False).jet(k).poly
    f = as_germ(f, check=False).jet(k).poly
    comp = f.subs({"x": Xp.embed(XL)}, truncate=k)
    return (gj - (Sp.embed(XL) * comp).truncate(k)).truncate(k)


def transformation_solve(g, f, k: int, max_iter: int | None = None) -> ContactTransformation:
    """Jets X, S of degree <= k with J^k(g - S f(X, lambda)) = 0.

    Exact Newton iteration in the jet ring: each step solves the linear
    system  dS * f(X) + S * f_x(X) * dX = residual  for the coefficients of
    dS (degree <= k) and dX (degree 1..k), free unknowns set to zero.
    """
    g = as_germ(g, check=False)
    fg = as_germ(f, check=False)
    gj = g.jet(k).poly
    fj = fg.jet(k + 1).poly
    fx = fj.diff("x")
    fj = fj.truncate(k)
    Xp = X
    # start from the ratio of the lowest common coefficient so S(0) is sensible
    Sp = Poly.const(1, XL)
    monos_S = monomials_up_to(2, k)
    monos_X = [m for m in monos_S if sum(m)]
    rows_index = {m: i for i, m in enumerate(monos_S)}
    for _ in range(max_iter or 4 * (k + 2)):
        comp = fj.subs({"x": Xp}, truncate=k)
        res = (gj - (Sp * comp).truncate(k)).truncate(k)
        if not res:
            break
        dcomp = fx.subs({"x": Xp}, truncate=k)
        sfx = (Sp * dcomp).truncate(k)
        cols = []
        for m in monos_S:
            cols.append(comp.mul_term(m, mpq(1)).truncate(k))
        for m in monos_X:
            cols.append(sfx.mul_term(m, mpq(1)).truncate(k))
        A = [[mpq(0)] * len(cols) for _ in monos_S]
        for j, col in enumerate(cols):
            for e, c in col.terms.items():
                A[rows_index[e]][j] = c
        b = [res.coeff(m) for m in monos_S]
        sol = solve(A, b)
        if sol is None:
            raise InconsistentSystemError(
                f"no jet transformation of degree {k} maps f to g; the germs are not strongly equivalent to order {k}"
            )
        dS = Poly({m: sol[i] for i, m in enumerate(monos_S)}, XL)
        dX = Poly({m: sol[len(monos_S) + i] for i, m in enumerate(monos_X)}, XL)
        Sp = (Sp + dS).truncate(k)
        Xp = (Xp + dX).truncate(k)
    else:
        raise InconsistentSystemError(f"transformation iteration did not converge at degree {k}")
    if Xp.coeff((0, 0)) or Xp.coeff((1, 0)) <= 0 or Sp.coeff((0, 0)) <= 0:
        raise InconsistentSystemError(
            f"solution violates the side conditions X(0)=0, X_x(0)>0, S(0)>0: X={Xp}, S={Sp}"
        )
    return ContactTransformation(Xp, Sp, k)


# ---------------------------------------------------------------------------
# everything at once


@dataclass
class AlgebraicObjects:
    P: IntrinsicIdeal
    RT: TangentPresentation
    T: TangentPresentation
    ET_basis: list
    S: IntrinsicIdeal
    S_perp: list
    S_gens: list


def alg_objects(g) -> AlgebraicObjects:
    g = as_germ(g)
    P = high_order_ideal(g)
    RT = restricted_tangent(g)
    T = tangent_space(g)
    D = derivative_stairs(g, max(P.stairs[0][0], 1))
    return AlgebraicObjects(P, RT, T, T.quotient_basis(), D.S, D.S_perp, D.S_gens)


def format_monomials(monos):
    return "{" + ", ".join(format_monomial(m, XL) or "1" for m in monos) + "}"


__all__ = [
    "SingularGerm",
    "DerivativeStairs",
    "NormalForm",
    "TangentPresentation",
    "Condition",
    "ContactTransformation",
    "AlgebraicObjects",
    "high_order_ideal",
    "derivative_stairs",
    "intermediate_terms",
    "normal_form",
    "normal_form_details",
    "restricted_tangent",
    "tangent_space",
    "recognition_conditions",
    "transformation_solve",
    "transformation_residual",
    "alg_objects",
    "format_monomials",
    "stairs_from_coefficients",
    "Fraction",
]
