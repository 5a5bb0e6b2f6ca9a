"""Algebraic objects of a codimension-four germ and an infinite-codimension restricted tangent space.

Run:  python3 demos/algebraic_objects.py
"""

import germforge as gf
from germforge.poly import XL, format_monomial

g = "x^5+lambda*x+lambda^2"
A = gf.alg_objects(g)
print("germ:", g)
print("  high-order terms P     ", A.P)
print("  restricted tangent RT  ", A.RT.itr)
print("  tangent space T        ", A.T.itr, "+ span", [str(p) for p in A.T.complement])
print("  E/T basis              ", [format_monomial(m, XL) or "1" for m in A.ET_basis])
print("  S                      ", A.S)
print("  S^perp                 ", [format_monomial(m, XL) or "1" for m in A.S_perp])
print("  normal form            ", gf.normal_form(g))
print("  codimension            ", gf.codimension(g))

h = "lambda^3*sin(x)"
RT = gf.restricted_tangent(h)
print("germ:", h)
print("  restricted tangent RT  ", RT.itr, "(certified at N =", RT.certificate.N, ")")
try:
    gf.tangent_space(h)
except gf.InfiniteCodimensionError as exc:
    print("  tangent space          infinite codimension:", exc)
