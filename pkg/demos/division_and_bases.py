"""Division in the local jet ring, standard bases, and global Groebner bases.

Run:  python3 demos/division_and_bases.py
"""

from germforge import IdealBasis, MonomialOrder, divide, groebner_basis, normal_set, reduce_basis, standard_basis
from germforge.expr import as_jet
from germforge.poly import XL, format_monomial

local = MonomialOrder.alex()

# a remainder that only terminates because the jet ring is truncated
B = IdealBasis(["x*lambda-x^2*lambda^2-x^4"], local, "jet", 21)
print("Rem(x^2*lambda) mod M^22:", divide("x^2*lambda", B).remainder)

# a standard basis of jets of transcendental generators
texts = ["lambda-lambda*exp(x)", "x-sin(x)", "lambda*x+lambda^3+lambda^2*ln1p(x)"]
J = IdealBasis([as_jet(t, 6).poly for t in texts], local, "jet", 6)
S = reduce_basis(standard_basis(J))
print("reduced standard basis:  ", ", ".join(map(str, S.gens)))
print("normal set:              ", [format_monomial(m, XL) or "1" for m in normal_set(S).monomials])

# the same ideal machinery in the polynomial ring with lex order
G = groebner_basis(IdealBasis(["x^5+x^3*lambda+lambda^2", "5*x^5+3*x^3*lambda", "5*x^4*lambda+3*x^2*lambda^2"],
                              MonomialOrder.lex(), "poly"))
print("lex Groebner basis:      ", ", ".join(map(str, G.gens)))
for n in range(3, 9):
    print(f"  Rem(x^{n}) =", divide(f"x^{n}", G, quotients=False).remainder)
