"""Versioned JSON encoding of the package's result types.

Polynomials are ``{"variables": [...], "terms": [[num, den, [exps]], ...]}``;
staircases are lists of ``[m, n]`` pairs; rationals are ``[num, den]``.
Every top-level document carries ``"schema": 1`` and a ``"type"`` tag.
"""

from __future__ import annotations

import json

from gmpy2 import mpq

from .classify import BifurcationDiagram, LimitPoint, ParameterRegion
from .division import IdealBasis
from .expr import Jet, TailSupport
from .ideals import MultMatrix, QuotientBasis, TruncationCertificate
from .intrinsic import IntrinsicIdeal
from .poly import MonomialOrder, Poly
from .singularity import AlgebraicObjects, ContactTransformation, NormalForm, TangentPresentation
from .transition import SideCondition, TransitionComponent, TransitionPiece, TransitionSet
from .unfolding import Unfolding

SCHEMA = 1


# ---------------------------------------------------------------------------
# leaves


def rational(q):
    q = mpq(q)
    return [int(q.numerator), int(q.denominator)]


def from_rational(v):
    return mpq(int(v[0]), int(v[1]))


def poly_to_json(p: Poly):
    terms = sorted(p.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))
    return {
        "variables": list(p.gens),
        "terms": [[int(c.numerator), int(c.denominator), list(e)] for e, c in terms],
    }


def poly_from_json(d) -> Poly:
    gens = tuple(d["variables"])
    return Poly({tuple(e): mpq(int(n), int(den)) for n, den, e in d["terms"]}, gens)


def stairs_to_json(itr: IntrinsicIdeal):
    return [[m, n] for m, n in itr.stairs]


def stairs_from_json(v) -> IntrinsicIdeal:
    return IntrinsicIdeal(tuple((m, n) for m, n in v))


def _monos(v):
    return [list(m) for m in v]


def _from_monos(v):
    return [tuple(m) for m in v]


def order_to_json(o: MonomialOrder):
    if o.kind == "block":
        return {"kind": "block", "blocks": [list(b) for b in o.blocks]}
    return {"kind": o.kind, "precedence": list(o.precedence)}


def order_from_json(d) -> MonomialOrder:
    if d["kind"] == "block":
        return MonomialOrder.block(*(tuple(b) for b in d["blocks"]))
    return MonomialOrder(d["kind"], tuple(d["precedence"]))


# ---------------------------------------------------------------------------
# encoders / decoders per type


def _enc_basis(B: IdealBasis):
    return {
        "gens": [poly_to_json(g) for g in B.gens],
        "order": order_to_json(B.order),
        "ring": B.ring,
        "N": B.N,
        "variables": list(B.variables),
    }


def _dec_basis(d):
    return IdealBasis(
        [poly_from_json(g) for g in d["gens"]],
        order_from_json(d["order"]),
        d["ring"],
        d["N"],
        tuple(d["variables"]),
    )


def _enc_tangent(T: TangentPresentation):
    return {"itr": stairs_to_json(T.itr), "complement": [poly_to_json(p) for p in T.complement], "ell": T.ell}


def _dec_tangent(d):
    return TangentPresentation(stairs_from_json(d["itr"]), [poly_from_json(p) for p in d["complement"]], None, d["ell"])


def _enc_unfolding(U: Unfolding):
    return {
        "base": poly_to_json(U.base),
        "directions": [poly_to_json(p) for p in U.directions],
        "parameters": list(U.parameters),
        "poly": poly_to_json(U.poly),
    }


def _dec_unfolding(d):
    return Unfolding(poly_from_json(d["base"]), [poly_from_json(p) for p in d["directions"]], tuple(d["parameters"]))


def _enc_condition(c: SideCondition):
    return {"kind": c.kind, "variable": c.variable, "relation": c.relation, "realized": c.realized, "sampled": c.sampled}


def _dec_condition(d):
    return SideCondition(d["kind"], d["variable"], d["relation"], d["realized"], d["sampled"])


def _enc_component(c: TransitionComponent):
    return {
        "name": c.name,
        "generators": [poly_to_json(g) for g in c.generators],
        "pieces": [
            {"poly": poly_to_json(p.poly), "conditions": [_enc_condition(k) for k in p.conditions]} for p in c.pieces
        ],
    }


def _dec_component(d):
    comp = TransitionComponent(d["name"], [poly_from_json(g) for g in d["generators"]])
    comp.pieces = [
        TransitionPiece(d["name"], poly_from_json(p["poly"]), [_dec_condition(k) for k in p["conditions"]])
        for p in d["pieces"]
    ]
    return comp


def _enc_region(r: ParameterRegion):
    return {
        "id": r.id,
        "point": list(r.point),
        "sign_vector": list(r.sign_vector),
        "cells": r.cells,
        "samples": [list(s) for s in r.samples],
        "clearance": r.clearance if r.clearance != float("inf") else None,
    }


def _dec_region(d):
    clearance = d["clearance"] if d["clearance"] is not None else float("inf")
    return ParameterRegion(d["id"], tuple(d["point"]), tuple(d["sign_vector"]), d["cells"],
                           [tuple(s) for s in d["samples"]], clearance)


def _enc_diagram(b: BifurcationDiagram):
    return {
        "alpha": list(b.alpha),
        "lambdas": list(b.lambdas),
        "roots": [list(r) for r in b.roots],
        "branches": [[list(p) for p in br] for br in b.branches],
        "limit_points": [{"lambda": lp.lam, "x": lp.x, "index": lp.index, "opens": lp.opens} for lp in b.limit_points],
        "counts": list(b.counts),
        "signature": _signature_json(b.signature),
        "dropped": b.dropped,
        "max_residual": b.max_residual,
    }


def _signature_json(sig):
    return [sig[0]] + [[i, o] for i, o in sig[1:]]


def _dec_diagram(d):
    return BifurcationDiagram(
        tuple(d["alpha"]),
        list(d["lambdas"]),
        [list(r) for r in d["roots"]],
        [[tuple(p) for p in br] for br in d["branches"]],
        [LimitPoint(lp["lambda"], lp["x"], lp["index"], lp["opens"]) for lp in d["limit_points"]],
        list(d["counts"]),
        d["dropped"],
        d["max_residual"],
    )


def _enc_nf(nf: NormalForm):
    return {
        "poly": poly_to_json(nf.poly),
        "degree": nf.degree,
        "high_order": stairs_to_json(nf.high_order),
        "intermediate": _monos(nf.intermediate),
        "removed": _monos(nf.removed),
        "unremoved": _monos(nf.unremoved),
        "shift": rational(nf.shift),
        "scaling": [rational(v) for v in nf.scaling] if nf.scaling else None,
    }


def _dec_nf(d):
    return NormalForm(
        poly_from_json(d["poly"]),
        d["degree"],
        stairs_from_json(d["high_order"]),
        _from_monos(d["intermediate"]),
        _from_monos(d["removed"]),
        _from_monos(d["unremoved"]),
        from_rational(d["shift"]),
        tuple(from_rational(v) for v in d["scaling"]) if d["scaling"] else None,
    )


def _enc_alg(a: AlgebraicObjects):
    return {
        "P": stairs_to_json(a.P),
        "RT": _enc_tangent(a.RT),
        "T": _enc_tangent(a.T),
        "ET_basis": _monos(a.ET_basis),
        "S": stairs_to_json(a.S),
        "S_perp": _monos(a.S_perp),
        "S_gens": _monos(a.S_gens),
    }


def _dec_alg(d):
    return AlgebraicObjects(
        stairs_from_json(d["P"]),
        _dec_tangent(d["RT"]),
        _dec_tangent(d["T"]),
        _from_monos(d["ET_basis"]),
        stairs_from_json(d["S"]),
        _from_monos(d["S_perp"]),
        _from_monos(d["S_gens"]),
    )


def _enc_jet(j: Jet):
    cone = None if j.tail.cone is None else [list(e) for e in j.tail.cone]
    return {"poly": poly_to_json(j.poly), "degree": j.degree, "tail": cone}


def _dec_jet(d):
    tail = None if d["tail"] is None else [tuple(e) for e in d["tail"]]
    return Jet(poly_from_json(d["poly"]), d["degree"], TailSupport.unknown() if tail is None else tail)


def _enc_cert(c: TruncationCertificate):
    return {
        "N": c.N,
        "k": c.k,
        "ring": c.ring,
        "finite": c.finite,
        "staircase": [list(s) for s in c.staircase],
        "jets": [_enc_jet(j) for j in c.jets],
        "basis": _enc_basis(c.basis) if c.basis is not None else None,
        "notes": list(c.notes),
    }


def _dec_cert(d):
    return TruncationCertificate(
        d["N"], d["k"], d["ring"], d["finite"], [tuple(s) for s in d["staircase"]],
        [_dec_jet(j) for j in d["jets"]], _dec_basis(d["basis"]) if d["basis"] else None, list(d["notes"]),
    )


_CODECS = [
    ("poly", Poly, poly_to_json, poly_from_json),
    ("ideal_basis", IdealBasis, _enc_basis, _dec_basis),
    ("intrinsic_ideal", IntrinsicIdeal, lambda i: {"stairs": stairs_to_json(i)}, lambda d: stairs_from_json(d["stairs"])),
    ("quotient_basis", QuotientBasis,
     lambda q: {"monomials": _monos(q.monomials), "variables": list(q.variables)},
     lambda d: QuotientBasis(_from_monos(d["monomials"]), tuple(d["variables"]))),
    ("mult_matrix", MultMatrix,
     lambda m: {"variable": m.variable, "matrix": [[rational(v) for v in row] for row in m.matrix],
                "basis": {"monomials": _monos(m.basis.monomials), "variables": list(m.basis.variables)},
                "nilpotency": m.nilpotency},
     lambda d: MultMatrix(d["variable"], [[from_rational(v) for v in row] for row in d["matrix"]],
                          QuotientBasis(_from_monos(d["basis"]["monomials"]), tuple(d["basis"]["variables"])),
                          d["nilpotency"])),
    ("tangent", TangentPresentation, _enc_tangent, _dec_tangent),
    ("alg_objects", AlgebraicObjects, _enc_alg, _dec_alg),
    ("normal_form", NormalForm, _enc_nf, _dec_nf),
    ("transformation", ContactTransformation,
     lambda t: {"X": poly_to_json(t.X), "S": poly_to_json(t.S), "degree": t.degree},
     lambda d: ContactTransformation(poly_from_json(d["X"]), poly_from_json(d["S"]), d["degree"])),
    ("unfolding", Unfolding, _enc_unfolding, _dec_unfolding),
    ("transition_set", TransitionSet,
     lambda t: {"unfolding": _enc_unfolding(t.unfolding), "B": _enc_component(t.B), "H": _enc_component(t.H),
                "D": _enc_component(t.D)},
     lambda d: TransitionSet(_dec_unfolding(d["unfolding"]), _dec_component(d["B"]), _dec_component(d["H"]),
                             _dec_component(d["D"]))),
    ("region", ParameterRegion, _enc_region, _dec_region),
    ("diagram", BifurcationDiagram, _enc_diagram, _dec_diagram),
    ("certificate", TruncationCertificate, _enc_cert, _dec_cert),
]


def to_json(obj) -> dict:
    """Tagged, versioned JSON-ready dict for a supported result object."""
    for tag, cls, enc, _ in _CODECS:
        if isinstance(obj, cls):
            out = {"schema": SCHEMA, "type": tag}
            out.update(enc(obj))
            return out
    raise TypeError(f"no JSON encoding for {type(obj).__name__}")


def from_json(d: dict):
    if d.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {d.get('schema')!r}")
    for tag, _, _, dec in _CODECS:
        if d.get("type") == tag:
            return dec(d)
    raise ValueError(f"unknown type tag {d.get('type')!r}")


def dumps(obj, **kw) -> str:
    """Deterministic JSON text (sorted keys)."""
    data = obj if isinstance(obj, dict) else to_json(obj)
    return json.dumps(data, sort_keys=True, ensure_ascii=False, **kw)


def loads(text: str):
    return from_json(json.loads(text))
