"""Command-line front end: ``germforge <subcommand> ...``.

Every subcommand prints a human-readable report, or deterministic JSON
(sorted keys, schema 1) with ``--json``.  Errors are reported on stderr and
mapped to exit codes: 1 malformed input, 2 certification failure,
3 infinite codimension where finiteness is required, 4 numeric budget
exhausted.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import serialize
from .classify import persistent_diagrams
from .division import IdealBasis, divide, groebner_basis, reduce_basis, standard_basis
from .errors import GermforgeError
from .expr import as_jet, parse_polynomial
from .ideals import colon_ideal, grevlex, mult_matrix, normal_set, verify_truncation
from .intrinsic import intrinsic_part
from .poly import XL, MonomialOrder, format_monomial
from .singularity import (
    alg_objects,
    format_monomials,
    normal_form_details,
    recognition_conditions,
    transformation_residual,
    transformation_solve,
)
from .svg import diagram_svg, emit_svg, transition_svg
from .transition import transition_set
from .unfolding import Unfolding, format_directions, is_universal_unfolding, universal_unfolding

COMMANDS = (
    "verify",
    "standard-basis",
    "division",
    "colon-ideal",
    "mult-matrix",
    "normal-set",
    "intrinsic",
    "alg-objects",
    "normal-form",
    "universal-unfolding",
    "recognition",
    "transformation",
    "transition-set",
    "persistent-diagrams",
)


class UsageError(GermforgeError):
    exit_code = 1


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors: exit 1, like malformed germs."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers


def _variables(args):
    return tuple(v.strip() for v in args.vars.split(",")) if args.vars else XL


def _basis(args, texts) -> IdealBasis:
    """Generators in the ring chosen by ``--ring`` / ``--degree``.

    In the jet ring without ``--degree`` the truncation degree is the one
    certified for the generators (only over the variables x, lambda).
    """
    variables = _variables(args)
    if args.ring == "poly":
        polys = [parse_polynomial(t, variables) for t in texts]
        order = MonomialOrder("lex", variables) if args.order == "lex" else grevlex(variables)
        return IdealBasis(polys, order, "poly", variables=variables)
    N = args.degree
    if N is None:
        if variables != XL:
            raise UsageError("--degree is required for jet-ring computations in other variables")
        N = verify_truncation(texts).N
    polys = [as_jet(t, N, variables).poly for t in texts]
    return IdealBasis(polys, MonomialOrder.alex(*variables), "jet", N, variables)


def _format_basis(B: IdealBasis) -> str:
    return "{" + ", ".join(str(g) for g in B.gens) + "}"


def _box(text, k):
    if not text:
        return None
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 2 * k:
        raise UsageError(f"--box needs {2 * k} numbers (lo,hi per parameter), got {len(vals)}")
    return [(vals[2 * i], vals[2 * i + 1]) for i in range(k)]


def _unfolding(args) -> Unfolding:
    """``--params a,b`` reads TEXT as an unfolding; otherwise TEXT is a germ and is universally unfolded."""
    if args.params:
        params = tuple(p.strip() for p in args.params.split(","))
        G = parse_polynomial(args.text, XL + params)
        return Unfolding.from_poly(G, params)
    return universal_unfolding(args.text)


def _document(kind, **fields):
    out = {"schema": serialize.SCHEMA, "type": kind}
    out.update(fields)
    return out


def _emit(args, text, obj):
    print(serialize.dumps(obj) if args.json else text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args):
    cert = verify_truncation(args.germs, N0=args.degree or 1, allow_infinite=not args.finite)
    lines = [f"certified degree N = {cert.N}"]
    if cert.finite:
        lines.append(f"M^{cert.k} is contained in the ideal")
    else:
        lines.append(f"infinite codimension; ideal = staircase {list(cert.staircase)}")
    lines.append(f"suggested ring: {'global polynomial' if cert.ring == 'poly' else 'local jet'} (--ring {cert.ring})")
    lines.extend(cert.notes)
    _emit(args, "\n".join(lines), cert)


def cmd_standard_basis(args):
    B = _basis(args, args.gens)
    S = groebner_basis(B) if args.ring == "poly" else standard_basis(B)
    if args.reduced:
        S = reduce_basis(S, assume_standard=True)
    _emit(args, _format_basis(S), S)


def cmd_division(args):
    B = _basis(args, args.gens)
    f = as_jet(args.f, B.N, B.variables).poly if B.ring == "jet" else parse_polynomial(args.f, B.variables)
    res = divide(f, B)
    lines = [f"remainder: {res.remainder}"]
    lines += [f"q{i + 1} = {q}" for i, q in enumerate(res.quotients)]
    if res.truncated:
        lines.append(f"(terms above degree {B.N} were dropped)")
    doc = _document(
        "division",
        remainder=serialize.poly_to_json(res.remainder),
        quotients=[serialize.poly_to_json(q) for q in res.quotients],
        truncated=res.truncated,
        basis=serialize.to_json(B),
    )
    _emit(args, "\n".join(lines), doc)


def _monomial(text, variables):
    p = parse_polynomial(text, variables)
    if not p.is_monomial():
        raise UsageError(f"{text!r} is not a monomial")
    return next(iter(p.terms))


def cmd_colon_ideal(args):
    B = _basis(args, args.gens)
    C = colon_ideal(B, _monomial(args.by, B.variables))
    C = groebner_basis(C) if C.ring == "poly" else standard_basis(C)
    C = reduce_basis(C, assume_standard=True)
    _emit(args, _format_basis(C), C)


def cmd_mult_matrix(args):
    B = _basis(args, args.gens)
    M = mult_matrix(B, args.var)
    names = [format_monomial(m, M.basis.variables) or "1" for m in M.basis.monomials]
    width = max([len(n) for n in names] + [len(str(v)) for row in M.matrix for v in row] + [1])
    lines = [f"basis: {{{', '.join(names)}}}"]
    lines += ["  ".join(str(v).rjust(width) for v in row) for row in M.matrix]
    lines.append(f"nilpotency degree N_{args.var} = {M.nilpotency}")
    _emit(args, "\n".join(lines), M)


def cmd_normal_set(args):
    Q = normal_set(_basis(args, args.gens))
    text = "{" + ", ".join(format_monomial(m, Q.variables) or "1" for m in Q.monomials) + "}"
    _emit(args, f"{text}\ndimension {Q.dimension}", Q)


def cmd_intrinsic(args):
    if args.ring == "poly" or args.vars:
        raise UsageError("intrinsic parts live in the local ring of (x, lambda); drop --ring poly / --vars")
    if args.degree is None:
        cert = verify_truncation(args.gens)
        itr = intrinsic_part(cert)
    else:
        itr = intrinsic_part(_basis(args, args.gens))
    _emit(args, str(itr), itr)


def cmd_alg_objects(args):
    a = alg_objects(args.germ)
    lines = [
        f"P       = {a.P}",
        f"RT      = {a.RT}",
        f"T       = {a.T}",
        f"E/T     = K{format_monomials(a.ET_basis)}",
        f"S       = {a.S}",
        f"S^perp  = K{format_monomials(a.S_perp)}",
        f"intrinsic generators of S: {format_monomials(a.S_gens)}",
    ]
    _emit(args, "\n".join(lines), a)


def cmd_normal_form(args):
    nf = normal_form_details(args.germ, args.degree, normalize=args.normalize)
    text = str(nf.poly)
    if args.verbose:
        text += f"\nhigh order terms: {nf.high_order}"
        text += f"\nintermediate terms: {format_monomials(nf.intermediate)}"
        if nf.shift:
            text += f"\nshift x -> x + ({nf.shift})*lambda"
        if nf.unremoved:
            text += f"\nkept intermediate terms: {format_monomials(nf.unremoved)}"
    _emit(args, text, nf)


def cmd_universal_unfolding(args):
    G = universal_unfolding(args.germ, normalize=not args.no_normalize, use_normal_form=not args.no_normal_form)
    text = f"{G}\ncodimension {G.codimension}; directions {{{', '.join(format_directions(G))}}}"
    if args.check:
        w = is_universal_unfolding(G)
        text += f"\nuniversal: {'yes' if w.is_universal else 'no'}"
    _emit(args, text, G)


def cmd_recognition(args):
    conds = recognition_conditions(args.normal_form, args.germ)
    text = "\n".join(str(c) for c in conds)
    verdict = None
    if args.germ is not None:
        verdict = all(c.holds for c in conds)
        text += f"\n{'germ satisfies' if verdict else 'germ violates'} the recognition conditions"
    doc = _document(
        "recognition",
        conditions=[
            {"monomial": list(c.monomial), "vanishes": c.vanishes, "holds": c.holds} for c in conds
        ],
        satisfied=verdict,
    )
    _emit(args, text, doc)


def cmd_transformation(args):
    t = transformation_solve(args.g, args.f, args.degree)
    res = transformation_residual(args.g, args.f, t.X, t.S, t.degree)
    text = f"X = {t.X}\nS = {t.S}\ng - S*f(X, lambda) = {res or 0} mod M^{t.degree + 1}"
    _emit(args, text, t)


def cmd_transition_set(args):
    G = _unfolding(args)
    box = _box(args.box, len(G.parameters))
    T = transition_set(G, box=box, seed=args.seed)
    lines = [f"unfolding: {G}"]
    for comp in T.components:
        lines.append(f"{comp.name}: {comp}")
    _emit(args, "\n".join(lines), T)
    if args.svg:
        emit_svg(T, args.svg, box=box, title=str(G))


def cmd_persistent_diagrams(args):
    G = _unfolding(args)
    box = _box(args.box, len(G.parameters))
    P = persistent_diagrams(G, box=box, resolution=args.resolution, seed=args.seed)
    groups = P.short_list()
    lines = [f"unfolding: {G}", f"{len(P.entries)} regions, {len(groups)} distinct diagrams"]
    for group in groups:
        ids = ", ".join(str(r.id) for r, _ in group)
        region, diag = group[0]
        point = ", ".join(f"{v:.4g}" for v in region.point)
        lines.append(f"regions [{ids}] e.g. ({point}): {diag.describe()}")
    doc = _document(
        "persistent_diagrams",
        transition_set=serialize.to_json(P.transition),
        entries=[{"region": serialize.to_json(r), "diagram": serialize.to_json(d)} for r, d in P.entries],
    )
    _emit(args, "\n".join(lines), doc)
    if args.svg:
        text = transition_svg(P.transition, box=box, regions=[r for r, _ in P.entries], title=str(G))
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.panels:
        os.makedirs(args.panels, exist_ok=True)
        for region, diag in P.entries:
            path = os.path.join(args.panels, f"region{region.id}.svg")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(diagram_svg(diag, title=f"region {region.id}"))


# ---------------------------------------------------------------------------
# parser


def _ring_options(p, jet_default=True):
    p.add_argument("--ring", choices=("poly", "jet"), default="jet" if jet_default else "poly",
                   help="global polynomial ring or local jet ring K[vars]/M^(N+1) (default: jet)")
    p.add_argument("--degree", type=int, default=None,
                   help="jet truncation degree N (default: the certified degree)")
    p.add_argument("--vars", default=None, help="comma-separated variables, most significant first (default x,lambda)")
    p.add_argument("--order", choices=("grevlex", "lex"), default="grevlex", help="global order for --ring poly")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="germforge", description="Exact local bifurcation analysis of scalar germs g(x, lambda).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print versioned JSON instead of text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, help=help_, description=help_, parents=[common])

    p = add("verify", "certify a truncation degree for an ideal of germs and suggest a ring")
    p.add_argument("germs", nargs="+")
    p.add_argument("--degree", type=int, default=None, help="smallest degree to try")
    p.add_argument("--finite", action="store_true", help="require finite codimension")
    p.set_defaults(func=cmd_verify)

    p = add("standard-basis", "standard basis (jet ring) or Groebner basis (polynomial ring)")
    p.add_argument("gens", nargs="+")
    _ring_options(p)
    p.add_argument("--reduced", action="store_true", help="reduce the basis")
    p.set_defaults(func=cmd_standard_basis)

    p = add("division", "divide F by the generators")
    p.add_argument("f")
    p.add_argument("gens", nargs="+")
    _ring_options(p)
    p.set_defaults(func=cmd_division)

    p = add("colon-ideal", "the colon ideal <gens> : <monomial>")
    p.add_argument("gens", nargs="+")
    p.add_argument("--by", required=True, help="monomial to divide by, e.g. lambda^2")
    _ring_options(p)
    p.set_defaults(func=cmd_colon_ideal)

    p = add("mult-matrix", "matrix of multiplication by a variable on the quotient ring")
    p.add_argument("gens", nargs="+")
    p.add_argument("--var", default="x", help="variable to multiply by (default x)")
    _ring_options(p)
    p.set_defaults(func=cmd_mult_matrix)

    p = add("normal-set", "monomial basis of the quotient ring")
    p.add_argument("gens", nargs="+")
    _ring_options(p)
    p.set_defaults(func=cmd_normal_set)

    p = add("intrinsic", "largest intrinsic ideal contained in the ideal")
    p.add_argument("gens", nargs="+")
    _ring_options(p)
    p.set_defaults(func=cmd_intrinsic)

    p = add("alg-objects", "P, RT, T, E/T, S, S^perp and the intrinsic generators of S")
    p.add_argument("germ")
    p.set_defaults(func=cmd_alg_objects)

    p = add("normal-form", "normal form of a germ")
    p.add_argument("germ")
    p.add_argument("--degree", type=int, default=None, help="truncation degree (default: certified)")
    p.add_argument("--normalize", action="store_true", help="scale coefficients to +-1 where possible")
    p.add_argument("--verbose", action="store_true", help="also print high order and intermediate terms")
    p.set_defaults(func=cmd_normal_form)

    p = add("universal-unfolding", "universal unfolding of a germ")
    p.add_argument("germ")
    p.add_argument("--no-normal-form", action="store_true", help="unfold the germ itself, not its normal form")
    p.add_argument("--no-normalize", action="store_true", help="keep normal-form coefficients unscaled")
    p.add_argument("--check", action="store_true", help="re-verify universality")
    p.set_defaults(func=cmd_universal_unfolding)

    p = add("recognition", "recognition conditions for a normal form")
    p.add_argument("normal_form")
    p.add_argument("--germ", default=None, help="germ to test against the conditions")
    p.set_defaults(func=cmd_recognition)

    p = add("transformation", "jets X, S with g = S*f(X, lambda) up to degree k")
    p.add_argument("g")
    p.add_argument("f")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_transformation)

    for name, func, help_ in (
        ("transition-set", cmd_transition_set, "bifurcation, hysteresis and double-limit-point sets"),
        ("persistent-diagrams", cmd_persistent_diagrams, "one bifurcation diagram per transition-set region"),
    ):
        p = add(name, help_)
        p.add_argument("text", help="unfolding polynomial (with --params) or germ to unfold universally")
        p.add_argument("--params", default=None, help="comma-separated parameter names of the unfolding")
        p.add_argument("--box", default=None, help="lo,hi per parameter, e.g. -1,1,-1,1")
        p.add_argument("--svg", default=None, metavar="PATH", help="write an SVG plot (at most two parameters)")
        p.add_argument("--seed", type=int, default=0)
        if name == "persistent-diagrams":
            p.add_argument("--resolution", type=int, default=80, help="grid cells per parameter")
            p.add_argument("--panels", default=None, metavar="DIR", help="write one diagram SVG per region")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except GermforgeError as exc:
        print(f"germforge {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"germforge {args.command}: invalid input: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
