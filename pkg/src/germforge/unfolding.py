"""Universal unfoldings G = g + sum alpha_i p_i with p_i spanning a complement of T(g)."""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .linalg import rank
from .poly import XL, Poly, format_monomial, merged_gens
from .singularity import as_germ, normal_form, tangent_space


@dataclass
class Unfolding:
    """``poly = base + sum alpha_i * directions[i]`` over (x, lambda, alpha_1, ...)."""

    base: Poly
    directions: list
    parameters: tuple
    poly: Poly = field(init=False)

    def __post_init__(self):
        self.base = self.base.embed(XL) if self.base.gens != XL else self.base
        self.parameters = tuple(self.parameters)
        if len(self.parameters) != len(self.directions):
            raise ValueError("one parameter per direction")
        gens = XL + self.parameters
        p = self.base.embed(gens)
        for a, d in zip(self.parameters, self.directions):
            p = p + Poly.var(a, gens) * d.embed(XL).embed(gens)
        self.poly = p

    @property
    def variables(self):
        return XL + self.parameters

    @property
    def codimension(self) -> int:
        return len(self.directions)

    @classmethod
    def from_poly(cls, G: Poly, parameters=None):
        """Split a polynomial in (x, lambda, alphas) that is affine in the alphas."""
        if parameters is None:
            parameters = tuple(v for v in G.gens if v not in XL)
        gens = XL + tuple(parameters)
        G = G.embed(merged_gens(gens, G.gens)).embed(gens)
        base = {}
        dirs = [dict() for _ in parameters]
        for e, c in G.terms.items():
            alpha = e[2:]
            if not any(alpha):
                base[e[:2]] = c
            elif sum(alpha) == 1:
                dirs[alpha.index(1)][e[:2]] = c
            else:
                raise ValueError("the unfolding must be affine in its parameters")
        return cls(Poly(base, XL), [Poly(d, XL) for d in dirs], tuple(parameters))

    def __str__(self):
        return str(self.poly)


def parameter_names(k: int):
    return tuple(f"alpha{i}" for i in range(1, k + 1))


def universal_unfolding(g, normalize: bool = True, use_normal_form: bool = True) -> Unfolding:
    """Universal unfolding built on the normal form of ``g``.

    Directions are the monomials of E/T(nf), lowest degree first and
    lambda-pure before mixed terms at equal degree.
    """
    g = as_germ(g)
    base = normal_form(g, normalize=normalize) if use_normal_form else g.jet(_degree_for(g)).poly
    T = tangent_space(base)
    dirs = [Poly.monomial(m, XL) for m in T.quotient_basis()]
    return Unfolding(base, dirs, parameter_names(len(dirs)))


def _degree_for(g):
    cert = g.certificate("P")
    return max(cert.N, cert.k or 0)


def codimension(g) -> int:
    """dim E / T(g)."""
    return len(tangent_space(as_germ(g)).quotient_basis())


@dataclass
class UniversalityWitness:
    is_universal: bool
    missing: list  # monomials of E/T not reached by the unfolding directions
    redundant: bool  # more directions than the codimension


def _vector(p: Poly, itr, index):
    from .intrinsic import project_out

    v = [mpq(0)] * len(index)
    for e, c in project_out(itr, p).terms.items():
        v[index[e]] = c
    return v


def is_universal_unfolding(G: Unfolding) -> UniversalityWitness:
    """Rank test: the directions together with T(g) must span the whole jet space.

    Vectors are taken modulo the intrinsic part of T(g) (which contains a
    power of M), so the test is a finite rank computation.
    """
    T = tangent_space(as_germ(G.base))
    comp = T.itr.complement()
    index = {m: i for i, m in enumerate(comp)}
    t_rows = [_vector(p, T.itr, index) for p in T.complement]
    d_rows = [_vector(d, T.itr, index) for d in G.directions]
    full = rank(t_rows + d_rows) if comp else 0
    need = len(comp)
    missing = []
    if full < need:
        base_rank = rank(t_rows + d_rows) if (t_rows or d_rows) else 0
        for m in comp:
            unit = [mpq(0)] * need
            unit[index[m]] = mpq(1)
            if rank(t_rows + d_rows + [unit]) > base_rank:
                missing.append(m)
                t_rows = t_rows + [unit]
                base_rank += 1
    redundant = len(G.directions) > need - len(T.complement)
    return UniversalityWitness(full == need, missing, redundant)


def format_directions(G: Unfolding):
    return [format_monomial(next(iter(d.terms)), XL) or "1" if d.is_monomial() else str(d) for d in G.directions]
