"""Transition sets B, H, D of an unfolding by elimination, plus real-feasibility filtering."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq
from scipy.optimize import least_squares

from .division import IdealBasis, groebner_basis
from .errors import InconsistentSystemError
from .poly import MonomialOrder, Poly, merged_gens
from .unfolding import Unfolding

COMPONENTS = ("B", "H", "D")
DEFAULT_TOL = 1e-9


# ---------------------------------------------------------------------------
# elimination


def _linear_solution(p: Poly, v: str):
    """If ``p = c*v + r`` with c a nonzero constant and r free of v, return -r/c."""
    i = p.gens.index(v)
    c = None
    rest = {}
    for e, coef in p.terms.items():
        if e[i] == 0:
            rest[e] = coef
        elif e[i] == 1 and not any(k for j, k in enumerate(e) if j != i):
            c = coef
        else:
            return None
    if c is None:
        return None
    return Poly(rest, p.gens) * (-1 / c)


def _substitute_linear(polys, elim):
    """Remove eliminated variables that some generator defines linearly.

    ``v - s`` with s free of v identifies K[..., v]/(v - s) with the ring
    without v, so substituting v = s everywhere leaves the elimination ideal
    unchanged.
    """
    polys = [p for p in polys if p]
    elim = list(elim)
    changed = True
    while changed:
        changed = False
        for v in list(elim):
            for k, p in enumerate(polys):
                s = _linear_solution(p, v)
                if s is None:
                    continue
                polys = [q.subs({v: s}) for j, q in enumerate(polys) if j != k]
                polys = [q for q in polys if q]
                elim.remove(v)
                changed = True
                break
            if changed:
                break
    return polys, elim


def eliminate(polys, elim, keep):
    """Reduced Gröbner basis of ``<polys> ∩ K[keep]``.

    Uses a block order with the ``elim`` variables first (grevlex inside
    each block), after substituting away variables that occur linearly.
    """
    elim, keep = tuple(elim), tuple(keep)
    gens = elim + keep
    polys = [p.embed(merged_gens(gens, p.gens)).embed(gens) for p in polys]
    polys, rest = _substitute_linear(polys, elim)
    if not polys:
        return []
    gens = tuple(rest) + keep
    polys = [p.embed(gens) for p in polys]
    blocks = (tuple(rest), keep) if rest else (keep,)
    B = IdealBasis(polys, MonomialOrder.block(*blocks), ring="poly", variables=gens)
    G = groebner_basis(B)
    out = []
    idx = [gens.index(v) for v in rest]
    for g in G.gens:
        if all(not e[i] for e in g.terms for i in idx):
            out.append(g.embed(merged_gens(keep, g.gens)).embed(keep))
    return out


def divided_difference(p: Poly, x: str, x1: str, x2: str) -> Poly:
    """(p(x1) - p(x2)) / (x1 - x2) computed termwise."""
    gens = tuple(v for v in p.gens if v != x) + (x1, x2)
    i = p.gens.index(x)
    others = [j for j in range(len(p.gens)) if j != i]
    t = {}
    for e, c in p.terms.items():
        k = e[i]
        base = tuple(e[j] for j in others)
        for a in range(k):
            ne = base + (a, k - 1 - a)
            t[ne] = t.get(ne, 0) + c
    return Poly(t, gens)


def defining_systems(G: Unfolding):
    """The polynomial systems whose projections to parameter space are B, H, D.

    Returns ``{name: (polys, eliminated variables)}``.  The D system uses two
    state copies x1, x2 with a shared lambda and the auxiliary zeta making
    x1 != x2; the divided differences of G and G_x are included since they
    lie in the ideal and speed up completion.
    """
    P = G.poly
    Gx = P.diff("x")
    systems = {
        "B": ([P, Gx, P.diff("lambda")], ("x", "lambda")),
        "H": ([P, Gx, Gx.diff("x")], ("x", "lambda")),
    }
    rest = tuple(v for v in P.gens if v != "x")

    def copy(p, name):
        return Poly(p.terms, tuple(name if v == "x" else v for v in p.gens))

    gens = ("x1", "x2", "zeta") + rest
    one = Poly.const(1, gens)
    zeta = Poly.var("zeta", gens)
    x1, x2 = Poly.var("x1", gens), Poly.var("x2", gens)
    d = [
        copy(P, "x1").embed(gens),
        copy(P, "x2").embed(gens),
        copy(Gx, "x1").embed(gens),
        copy(Gx, "x2").embed(gens),
        divided_difference(P, "x", "x1", "x2").embed(gens),
        divided_difference(Gx, "x", "x1", "x2").embed(gens),
        one - zeta * (x1 - x2),
    ]
    systems["D"] = (d, ("x1", "x2", "zeta", "lambda"))
    return systems


# ---------------------------------------------------------------------------
# numeric evaluation


class CompiledSystem:
    """Float evaluation of a list of Polys (and their Jacobian) over fixed variables."""

    def __init__(self, polys, variables):
        self.variables = tuple(variables)
        self._parts = [self._compile(p) for p in polys]
        self._jac = [[self._compile(p.embed(merged_gens(self.variables, p.gens)).diff(v)) if v in p.gens else None
                      for v in self.variables] for p in polys]

    def _compile(self, p: Poly):
        p = p.embed(merged_gens(self.variables, p.gens))
        idx = [p.gens.index(v) for v in self.variables]
        extra = [i for i, v in enumerate(p.gens) if v not in self.variables]
        if extra and any(e[i] for e in p.terms for i in extra):
            raise ValueError("polynomial uses variables outside the compiled list")
        if not p.terms:
            return np.zeros((0, len(idx)), dtype=int), np.zeros(0)
        exps = np.array([[e[i] for i in idx] for e in p.terms], dtype=int)
        coeffs = np.array([float(c) for c in p.terms.values()])
        return exps, coeffs

    @staticmethod
    def _eval(part, pts):
        exps, coeffs = part
        if not len(coeffs):
            return np.zeros(pts.shape[:-1])
        mon = np.prod(pts[..., None, :] ** exps, axis=-1)
        return mon @ coeffs

    def __call__(self, point):
        pts = np.asarray(point, dtype=float)
        return np.array([self._eval(part, pts) for part in self._parts])

    def evaluate_many(self, points):
        """Values of each polynomial at an (..., n) array of points; shape (k, ...)."""
        pts = np.asarray(points, dtype=float)
        return np.stack([self._eval(part, pts) for part in self._parts])

    def jacobian(self, point):
        pts = np.asarray(point, dtype=float)
        n = len(self.variables)
        J = np.zeros((len(self._parts), n))
        for i, row in enumerate(self._jac):
            for j, part in enumerate(row):
                if part is not None:
                    J[i, j] = self._eval(part, pts)
        return J


def _substitute_point(polys, point: dict):
    return [p.subs({k: mpq(v) for k, v in point.items() if k in p.gens}) for p in polys]


# ---------------------------------------------------------------------------
# real feasibility


@dataclass(frozen=True)
class SideCondition:
    """Advisory numeric descriptor of where a transition variety is realised by real points.

    ``kind`` is ``"sign"`` (realised only where ``variable relation 0``),
    ``"all-real"`` (every sampled point realised), ``"empty-real"`` (no
    sampled point realised) or ``"undetermined"``.
    """

    kind: str
    variable: str | None = None
    relation: str | None = None
    realized: int = 0
    sampled: int = 0

    def holds(self, values: dict) -> bool:
        if self.kind == "empty-real":
            return False
        if self.kind != "sign":
            return True
        v = values[self.variable]
        return v <= 0 if self.relation == "<=" else v >= 0

    def holds_array(self, values: dict):
        if self.kind == "empty-real":
            return np.zeros(np.shape(next(iter(values.values()))), dtype=bool)
        if self.kind != "sign":
            return np.ones(np.shape(next(iter(values.values()))), dtype=bool)
        v = values[self.variable]
        return v <= 0 if self.relation == "<=" else v >= 0

    def __str__(self):
        if self.kind == "sign":
            return f"{self.variable} {self.relation} 0"
        return self.kind


def _witness_system(G: Unfolding, name: str):
    """Unknowns and equations used to look for real witnesses at fixed parameters."""
    P = G.poly
    Gx = P.diff("x")
    if name == "B":
        return [P, Gx, P.diff("lambda")], ("x", "lambda")
    if name == "H":
        return [P, Gx, Gx.diff("x")], ("x", "lambda")

    def copy(p, v):
        return Poly(p.terms, tuple(v if g == "x" else g for g in p.gens))

    return [copy(P, "x1"), copy(P, "x2"), copy(Gx, "x1"), copy(Gx, "x2")], ("x1", "x2", "lambda")


def find_real_witness(G: Unfolding, name: str, alpha, starts: int = 24, radius: float = 2.0,
                      tol: float = DEFAULT_TOL, seed: int = 0):
    """Search for a real solution of the defining system of ``name`` at parameters ``alpha``.

    Multistart least squares; returns the solution vector or None.  For D a
    solution must have two distinct state values.
    """
    polys, unknowns = _witness_system(G, name)
    point = dict(zip(G.parameters, alpha))
    fixed = [p.subs({k: mpq(float(v)) for k, v in point.items()}) if G.parameters else p for p in polys]
    fixed = [p.embed(merged_gens(unknowns, p.gens)) for p in fixed]
    sysf = CompiledSystem(fixed, unknowns)
    rng = np.random.default_rng(seed)
    n = len(unknowns)
    for k in range(starts):
        scale = radius if k % 2 == 0 else radius / 4
        x0 = rng.uniform(-scale, scale, n)
        try:
            sol = least_squares(sysf, x0, jac=sysf.jacobian, xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                max_nfev=200)
        except (ValueError, FloatingPointError):
            continue
        if not np.all(np.isfinite(sol.x)):
            continue
        if np.max(np.abs(sysf(sol.x))) > tol:
            continue
        if name == "D" and abs(sol.x[0] - sol.x[1]) < 1e-5:
            continue
        return sol.x
    return None


def sample_variety(poly: Poly, parameters, box, samples: int = 40, seed: int = 0):
    """Real points of {poly = 0} inside ``box``: fix all but one parameter, solve for the last."""
    parameters = tuple(parameters)
    poly = poly.embed(merged_gens(parameters, poly.gens)).embed(parameters)
    used = [i for i, v in enumerate(parameters) if any(e[i] for e in poly.terms)]
    if not used:
        return []
    degs = {i: max(e[i] for e in poly.terms) for i in used}
    solve_for = min(used, key=lambda i: (degs[i], i))
    var = parameters[solve_for]
    rng = np.random.default_rng(seed)
    out = []
    lo, hi = box[solve_for]
    for _ in range(samples):
        pt = {v: float(rng.uniform(*box[i])) for i, v in enumerate(parameters) if i != solve_for}
        uni = poly.subs({k: mpq(v) for k, v in pt.items()}) if pt else poly
        uni = uni.embed(merged_gens((var,), uni.gens))
        j = uni.gens.index(var)
        coeffs = np.zeros(degs[solve_for] + 1)
        for e, c in uni.terms.items():
            coeffs[degs[solve_for] - e[j]] += float(c)
        nz = np.flatnonzero(np.abs(coeffs) > 0)
        if not len(nz):
            continue
        roots = np.roots(coeffs[nz[0]:])
        for r in roots:
            if abs(r.imag) < 1e-9 and lo <= r.real <= hi:
                q = dict(pt)
                q[var] = float(r.real)
                out.append(tuple(q[v] for v in parameters))
    return out


def real_filter(G: Unfolding, name: str, poly: Poly, box=None, samples: int = 40, seed: int = 0):
    """Side conditions describing where ``{poly = 0}`` carries real solutions of system ``name``."""
    params = G.parameters
    box = box or [(-1.0, 1.0)] * len(params)
    pts = sample_variety(poly, params, box, samples, seed)
    if not pts:
        return [SideCondition("undetermined")]
    realized, unrealized = [], []
    for k, a in enumerate(pts):
        (realized if find_real_witness(G, name, a, seed=seed + k) is not None else unrealized).append(a)
    n = len(pts)
    if not realized:
        return [SideCondition("empty-real", realized=0, sampled=n)]
    R = np.array(realized)
    U = np.array(unrealized) if unrealized else np.zeros((0, len(params)))
    eps = 1e-9
    conds = []
    for i, v in enumerate(params):
        if np.all(np.abs(R[:, i]) <= eps):
            continue  # the variety pins this coordinate to zero; a sign says nothing
        for rel, ok_r, bad_u in (("<=", R[:, i] <= eps, U[:, i] > eps), (">=", R[:, i] >= -eps, U[:, i] < -eps)):
            if ok_r.all() and bad_u.all():
                conds.append(SideCondition("sign", v, rel, len(realized), n))
    if not conds:
        kind = "all-real" if not unrealized else "undetermined"
        conds = [SideCondition(kind, realized=len(realized), sampled=n)]
    return conds


# ---------------------------------------------------------------------------
# transition sets


@dataclass
class TransitionPiece:
    """One irreducible factor of a transition component, with its side conditions."""

    component: str
    poly: Poly
    conditions: list = field(default_factory=list)

    def realized(self, values: dict) -> bool:
        return all(c.holds(values) for c in self.conditions)

    def realized_array(self, values: dict):
        ok = None
        for c in self.conditions:
            h = c.holds_array(values)
            ok = h if ok is None else ok & h
        return ok

    def __str__(self):
        s = f"{self.poly} = 0"
        extra = [str(c) for c in self.conditions if c.kind != "all-real"]
        return s + (", " + ", ".join(extra) if extra else "")


@dataclass
class TransitionComponent:
    """Elimination ideal of one defining system; ``generators == [1]`` means empty."""

    name: str
    generators: list
    pieces: list = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant()

    @property
    def is_everything(self) -> bool:
        return not self.generators

    def __str__(self):
        if self.is_empty:
            return "empty"
        if self.is_everything:
            return "whole parameter space"
        if self.pieces:
            return "; ".join(str(p) for p in self.pieces)
        return ", ".join(f"{g} = 0" for g in self.generators)


@dataclass
class TransitionSet:
    unfolding: Unfolding
    B: TransitionComponent
    H: TransitionComponent
    D: TransitionComponent

    @property
    def parameters(self):
        return self.unfolding.parameters

    @property
    def components(self):
        return [self.B, self.H, self.D]

    def pieces(self):
        """All hypersurface pieces of Sigma = B ∪ H ∪ D."""
        return [p for c in self.components for p in c.pieces]


def _factors(p: Poly):
    import sympy

    syms = sympy.symbols(p.gens)
    expr = sum(
        sympy.Rational(int(c.numerator), int(c.denominator)) * sympy.Mul(*[s**k for s, k in zip(syms, e)])
        for e, c in p.terms.items()
    )
    _, facs = sympy.factor_list(expr, *syms)
    out = []
    for f, _mult in facs:
        fp = sympy.Poly(f, *syms)
        terms = {tuple(m): mpq(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for m, c in fp.terms()}
        q = Poly(terms, p.gens)
        if not q.is_constant():
            out.append(_normalize_scale(q))
    return out


def _normalize_scale(p: Poly) -> Poly:
    """Primitive integer multiple of ``p`` with positive leading coefficient (graded lex)."""
    from math import gcd, lcm

    den = 1
    for c in p.terms.values():
        den = lcm(den, int(c.denominator))
    nums = [int(c * den) for c in p.terms.values()]
    g = 0
    for n in nums:
        g = gcd(g, n)
    lead = max(p.terms, key=lambda e: (sum(e), e))
    sign = -1 if p.terms[lead] < 0 else 1
    return p * mpq(sign * den, g)


def transition_set(G: Unfolding, box=None, filter_real: bool = True, samples: int = 40, seed: int = 0):
    """B, H and D of an unfolding, each as a reduced elimination ideal in the parameters."""
    if not G.parameters:
        empty = [Poly.const(1, ())]
        return TransitionSet(G, *(TransitionComponent(n, list(empty)) for n in COMPONENTS))
    params = G.parameters
    comps = {}
    for name, (polys, elim) in defining_systems(G).items():
        gens = eliminate(polys, elim, params)
        comp = TransitionComponent(name, gens)
        if comp.is_everything:
            raise InconsistentSystemError(f"the {name} elimination ideal is zero: the component fills parameter space")
        if not comp.is_empty:
            facs = []
            for g in gens[:1] if len(gens) == 1 else []:
                facs = _factors(g)
            for f in facs:
                conds = real_filter(G, name, f, box, samples, seed) if filter_real else [SideCondition("undetermined")]
                comp.pieces.append(TransitionPiece(name, f, conds))
        comps[name] = comp
    return TransitionSet(G, comps["B"], comps["H"], comps["D"])
