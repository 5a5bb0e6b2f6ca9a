"""From a transcendental germ to its persistent bifurcation diagrams.

Run:  python3 demos/quartic_classification.py [output-dir]
Writes the transition-set plot and one diagram per region as SVG files.
"""

import pathlib
import sys

import germforge as gf

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "demo-output")
out.mkdir(parents=True, exist_ok=True)

g = "exp(x^2)+2*cos(x)-3+sin(lambda)"
print("germ:              ", g)
print("5-jet:             ", gf.taylor_jet(gf.parse_germ(g), 5).poly)
nf = gf.normal_form(g, 5)
print("normal form:       ", nf)
t = gf.transformation_solve(g, nf, 5)
print("transformation:     X =", t.X, "  S =", t.S)

U = gf.universal_unfolding(g)
print("universal unfolding:", U)
T = gf.transition_set(U)
for comp in T.components:
    print(f"  {comp.name}: {comp}")

P = gf.persistent_diagrams(U, resolution=120, T=T)
gf.emit_svg(T, out / "transition_set.svg", regions=[r for r, _ in P.entries], title="transition set")
for region, diagram in P.entries:
    print(f"  region {region.id} at {tuple(round(v, 3) for v in region.point)}: {diagram.describe()}")
    gf.emit_svg(diagram, out / f"region_{region.id}.svg", title=f"region {region.id}")
print("SVG files written to", out)
