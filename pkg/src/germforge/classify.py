"""Regions of the transition-set complement and their persistent bifurcation diagrams."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from gmpy2 import mpq
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NumericBudgetError
from .poly import Poly, merged_gens
from .roots import count_roots, real_roots, sturm_sequence, squarefree
from .transition import DEFAULT_TOL, CompiledSystem, TransitionSet, transition_set
from .unfolding import Unfolding


class GridWarning(UserWarning):
    """The sampling grid may be too coarse to resolve every region."""


@dataclass
class ParameterRegion:
    """A connected component of the complement of the transition set, as sampled on a grid."""

    id: int
    point: tuple
    sign_vector: tuple
    cells: int
    samples: list = field(default_factory=list)
    clearance: float = 0.0


# ---------------------------------------------------------------------------
# regions


def _grid_axes(box, resolution):
    return [lo + (np.arange(resolution) + 0.5) * (hi - lo) / resolution for lo, hi in box]


def _neighbour_offsets(k):
    """One offset per undirected pair of grid neighbours (faces, edges and corners)."""
    out = []
    for off in np.ndindex(*(3,) * k):
        o = tuple(int(v) - 1 for v in off)
        if any(o) and o > tuple(-v for v in o):
            out.append(o)
    return out


def _segment_clear(p, q, pieces, sysf, params, steps=256):
    """True if no realised piece changes sign along the segment from p to q."""
    t = np.linspace(0.0, 1.0, steps)[:, None]
    pts = (1 - t) * np.asarray(p) + t * np.asarray(q)
    vals = np.sign(sysf.evaluate_many(pts))
    mids = 0.5 * (pts[1:] + pts[:-1])
    values = {v: mids[:, j] for j, v in enumerate(params)}
    for i, piece in enumerate(pieces):
        change = vals[i][1:] != vals[i][:-1]
        ok = piece.realized_array(values)
        if np.any(change & (ok if ok is not None else True)):
            return False
    return True


def _merge_fragments(regions, pieces, sysf, params):
    """Join grid components with equal sign vectors that a straight segment connects."""
    parent = list(range(len(regions)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            if regions[i].sign_vector != regions[j].sign_vector or find(i) == find(j):
                continue
            if _segment_clear(regions[i].point, regions[j].point, pieces, sysf, params):
                parent[find(j)] = find(i)
    groups = {}
    for i in range(len(regions)):
        groups.setdefault(find(i), []).append(regions[i])
    merged = []
    for members in groups.values():
        best = max(members, key=lambda r: (r.clearance, r.cells))
        samples = [s for r in members for s in r.samples]
        merged.append(ParameterRegion(0, best.point, best.sign_vector, sum(r.cells for r in members),
                                      samples[: max(len(best.samples), 1)] if samples else [], best.clearance))
    return merged


def region_decompose(T: TransitionSet, box=None, resolution: int = 200, samples: int = 5,
                     min_cells: int = 4, seed: int = 0):
    """Connected components of the complement of Sigma sampled on a grid of cell centres.

    Grid neighbours (including diagonal ones) are joined unless some transition piece changes sign
    between them (at either end or at the midpoint) at a place where the
    piece is realised (its side conditions hold at the midpoint).  Each component gets the grid point
    farthest (to first order) from every piece as representative, plus up to
    ``samples`` further points drawn from its better-separated half.
    Components with equal sign vectors joined by a segment free of realised
    sign changes are merged (thin regions fall apart on coarse grids).
    """
    params = T.parameters
    k = len(params)
    if k == 0:
        return [ParameterRegion(0, (), (), 1, [()], float("inf"))]
    if k > 3:
        raise NumericBudgetError("region decomposition is limited to at most three parameters")
    box = list(box or [(-1.0, 1.0)] * k)
    axes = _grid_axes(box, resolution)
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    shape = mesh.shape[:-1]
    pieces = T.pieces()
    if pieces:
        sysf = CompiledSystem([p.poly for p in pieces], params)
        vals = sysf.evaluate_many(mesh)
        grads = np.zeros_like(vals)
        for i in range(len(pieces)):
            g2 = 0.0
            for j in range(k):
                part = sysf._jac[i][j]
                if part is not None:
                    g2 = g2 + sysf._eval(part, mesh) ** 2
            grads[i] = np.sqrt(g2)
        dist = np.abs(vals) / (grads + 1e-300)
        clearance = dist.min(axis=0)
        signs = np.sign(vals).astype(np.int8)
    else:
        clearance = np.full(shape, np.inf)
        signs = np.zeros((0,) + shape, dtype=np.int8)
    n = int(np.prod(shape))
    ids = np.arange(n).reshape(shape)
    # grid points lying on a piece (to rounding) belong to no region
    on_sigma = np.zeros(shape, dtype=bool)
    if pieces:
        full = {v: mesh[..., j] for j, v in enumerate(params)}
        for i, piece in enumerate(pieces):
            ok = piece.realized_array(full)
            zero = np.abs(vals[i]) <= 1e-12 * (1 + grads[i])
            on_sigma |= zero & (ok if ok is not None else True)
    rows, cols = [], []
    for off in _neighbour_offsets(k):
        a = tuple(slice(max(0, -o), shape[d] - max(0, o)) for d, o in enumerate(off))
        b = tuple(slice(max(0, o), shape[d] - max(0, -o)) for d, o in enumerate(off))
        blocked = on_sigma[a] | on_sigma[b]
        if pieces:
            mid = 0.5 * (mesh[a] + mesh[b])
            values = {v: mid[..., j] for j, v in enumerate(params)}
            mid_signs = np.sign(sysf.evaluate_many(mid)).astype(np.int8)
            for i, piece in enumerate(pieces):
                # a sign change at the midpoint catches surfaces touched between two nodes
                change = (signs[i][a] != signs[i][b]) | (mid_signs[i] != signs[i][a])
                if not change.any():
                    continue
                ok = piece.realized_array(values)
                blocked |= change & (ok if ok is not None else True)
        rows.append(ids[a][~blocked])
        cols.append(ids[b][~blocked])
    rows = np.concatenate(rows) if rows else np.zeros(0, dtype=int)
    cols = np.concatenate(cols) if cols else np.zeros(0, dtype=int)
    adj = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    ncomp, labels = connected_components(adj, directed=False)
    flat_pts = mesh.reshape(n, k)
    flat_clear = clearance.reshape(n)
    flat_signs = signs.reshape(len(pieces), n)
    rng = np.random.default_rng(seed)
    regions = []
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(ncomp + 1))
    flat_on = on_sigma.reshape(n)
    for c in range(ncomp):
        members = order[bounds[c]:bounds[c + 1]]
        if flat_on[members].all():
            continue
        best = members[np.argmax(flat_clear[members])]
        ranked = members[np.argsort(-flat_clear[members], kind="stable")]
        pool = ranked[: max(1, len(ranked) // 2)]
        pick = rng.choice(pool, size=min(samples, len(pool)), replace=False) if samples else []
        regions.append(
            ParameterRegion(
                0,
                tuple(float(v) for v in flat_pts[best]),
                tuple(int(s) for s in flat_signs[:, best]),
                int(len(members)),
                [tuple(float(v) for v in flat_pts[i]) for i in sorted(pick)],
                float(flat_clear[best]),
            )
        )
    if pieces:
        regions = _merge_fragments(regions, pieces, sysf, params)
    regions.sort(key=lambda r: (-r.cells, r.point))
    for i, r in enumerate(regions):
        r.id = i + 1
    small = [r for r in regions if r.cells < min_cells]
    if small:
        warnings.warn(
            f"{len(small)} region(s) cover fewer than {min_cells} grid cells; "
            f"refine the grid (resolution > {resolution}) or shrink the box to confirm them",
            GridWarning,
            stacklevel=2,
        )
    return regions


# ---------------------------------------------------------------------------
# bifurcation diagrams


@dataclass
class LimitPoint:
    """A fold of the diagram: at ``lam`` the roots ``index`` and ``index+1`` merge at ``x``."""

    lam: float
    x: float
    index: int
    opens: str  # "right": the pair exists for lambda > lam; "left": for lambda < lam


@dataclass
class BifurcationDiagram:
    alpha: tuple
    lambdas: list
    roots: list  # per lambda, sorted real roots
    branches: list  # polylines [(lam, x), ...]
    limit_points: list
    counts: list  # root counts between consecutive limit points, left to right
    dropped: int = 0
    max_residual: float = 0.0

    @property
    def signature(self):
        return (self.counts[0],) + tuple((lp.index, lp.opens) for lp in self.limit_points)

    def describe(self) -> str:
        parts = [f"{self.counts[0]} root(s)"]
        for lp, c in zip(self.limit_points, self.counts[1:]):
            arrow = "+2" if lp.opens == "right" else "-2"
            parts.append(f"fold at branch {lp.index} ({arrow}) -> {c}")
        return ", ".join(parts)


def _exact(v):
    return mpq(Fraction(float(v)))


def _specialize(G: Unfolding, alpha) -> Poly:
    """G at fixed parameters, as an exact Poly in (x, lambda)."""
    alpha = tuple(alpha)
    if len(alpha) != len(G.parameters):
        raise ValueError(f"expected {len(G.parameters)} parameter values")
    p = G.poly.subs({a: _exact(v) for a, v in zip(G.parameters, alpha)}) if alpha else G.poly
    return p.embed(merged_gens(("x", "lambda"), p.gens)).embed(("x", "lambda"))


def _x_coeffs(p: Poly, lam):
    """Coefficient list in x (highest first) of p(x, lam) for exact lam."""
    deg = max((e[0] for e in p.terms), default=0)
    c = [mpq(0)] * (deg + 1)
    for (i, j), v in p.terms.items():
        c[deg - i] += v * lam**j
    return c


def _discriminant_lambda(p: Poly):
    """Exact coefficient list (highest first) of Res_x(p, p_x) as a polynomial in lambda."""
    import sympy

    x, lam = sympy.symbols("x lambda")
    expr = sum(
        sympy.Rational(int(c.numerator), int(c.denominator)) * x**e[0] * lam**e[1] for e, c in p.terms.items()
    )
    r = sympy.Poly(sympy.resultant(expr, sympy.diff(expr, x), x), lam)
    return [mpq(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in r.all_coeffs()]


def _count(p: Poly, lam) -> int:
    c = squarefree(_x_coeffs(p, lam))
    if len(c) < 2:
        return 0
    seq = sturm_sequence(c)
    from .roots import root_bound

    R = root_bound(c) + 1
    return count_roots(seq, -R, R)


def limit_points(G: Unfolding, alpha):
    """Folds of the diagram at ``alpha`` and the root counts between them."""
    p = _specialize(G, alpha)
    if not p.terms or max(e[0] for e in p.terms) < 1:
        raise ValueError("the specialised germ does not depend on x")
    disc = _discriminant_lambda(p)
    if not any(disc):
        raise NumericBudgetError("the diagram is degenerate at this parameter (identically singular)")
    if len(disc) > 1:
        lams, _ = real_roots(disc)
    else:
        lams = []
    px = p.diff("x")
    events = []
    for lc in lams:
        lq = _exact(lc)
        gx_roots, _ = real_roots(_x_coeffs(px, lq)) if max(e[0] for e in px.terms) >= 1 else ([], [])
        if not gx_roots:
            continue
        pf = CompiledSystem([p], ("x", "lambda"))
        xc = min(gx_roots, key=lambda xv: abs(pf((xv, lc))[0]))
        if abs(pf((xc, lc))[0]) > 1e-6 * (1 + abs(lc)):
            continue  # discriminant root coming from complex double roots
        events.append((lc, xc))
    events.sort()
    # root counts between events at exact rational midpoints
    mids = []
    if events:
        mids.append(_exact(events[0][0]) - 1)
        for (a, _), (b, _) in zip(events, events[1:]):
            mids.append((_exact(a) + _exact(b)) / 2)
        mids.append(_exact(events[-1][0]) + 1)
    else:
        mids.append(mpq(0))
    counts = [_count(p, m) for m in mids]
    out = []
    for i, (lc, xc) in enumerate(events):
        if counts[i] == counts[i + 1]:
            continue  # not a fold in the generic sense (e.g. isolated tangency)
        opens = "right" if counts[i + 1] > counts[i] else "left"
        side = mids[i + 1] if opens == "right" else mids[i]
        lside = float(side)
        # roots on the richer side, continued back to the fold: the merging pair
        # is the adjacent pair closest to xc
        rs, _ = real_roots(_x_coeffs(p, _exact(lc)))
        others = [r for r in rs if abs(r - xc) > 1e-4 * (1 + abs(xc))]
        index = sum(1 for r in others if r < xc)
        del lside
        out.append(LimitPoint(float(lc), float(xc), int(index), opens))
    # drop non-fold events from the counts list
    kept_counts = [counts[0]]
    for i in range(len(events)):
        if counts[i] != counts[i + 1]:
            kept_counts.append(counts[i + 1])
    return out, kept_counts


def _link(lambdas, roots, jump):
    branches = []
    active = []  # (branch index, last x)
    for lam, rs in zip(lambdas, roots):
        new_active = []
        used = set()
        for x in rs:
            best = None
            for bi, (b, lx) in enumerate(active):
                if bi in used:
                    continue
                d = abs(lx - x)
                if d <= jump and (best is None or d < best[1]):
                    best = (bi, d)
            if best is None:
                branches.append([(lam, x)])
                new_active.append((len(branches) - 1, x))
            else:
                used.add(best[0])
                b = active[best[0]][0]
                branches[b].append((lam, x))
                new_active.append((b, x))
        active = new_active
    return branches


def diagram_trace(G: Unfolding, alpha=(), lambdas=None, points: int = 201, tol: float = DEFAULT_TOL):
    """Sample the bifurcation diagram {G(x, lambda, alpha) = 0} and extract its fold signature."""
    alpha = tuple(alpha)
    lps, counts = limit_points(G, alpha)
    if lambdas is None:
        if lps:
            lo, hi = lps[0].lam, lps[-1].lam
            pad = max(0.5, 0.25 * (hi - lo))
            lambdas = np.linspace(lo - pad, hi + pad, points)
        else:
            lambdas = np.linspace(-1.0, 1.0, points)
    p = _specialize(G, alpha)
    roots, dropped, worst = [], 0, 0.0
    for lam in lambdas:
        rs, res = real_roots(_x_coeffs(p, _exact(lam)))
        keep = []
        for r, e in zip(rs, res):
            if e <= tol:
                keep.append(r)
                worst = max(worst, e)
            else:
                dropped += 1
        roots.append(keep)
    span = max((abs(x) for rs in roots for x in rs), default=1.0)
    branches = _link(list(map(float, lambdas)), roots, jump=0.25 * max(span, 1e-3))
    return BifurcationDiagram(alpha, [float(v) for v in lambdas], roots, branches, lps, counts, dropped, worst)


@dataclass
class PersistentDiagrams:
    transition: TransitionSet
    entries: list  # (ParameterRegion, BifurcationDiagram)

    def short_list(self):
        """Regions grouped by diagram signature, first-seen order."""
        groups = {}
        for region, diag in self.entries:
            groups.setdefault(diag.signature, []).append((region, diag))
        return list(groups.values())


def persistent_diagrams(G: Unfolding, box=None, resolution: int = 200, T: TransitionSet | None = None,
                        points: int = 201, seed: int = 0) -> PersistentDiagrams:
    """One diagram per region of the transition-set complement."""
    T = T or transition_set(G, box=box, seed=seed)
    regions = region_decompose(T, box=box, resolution=resolution, seed=seed)
    entries = [(r, diagram_trace(G, r.point, points=points)) for r in regions]
    return PersistentDiagrams(T, entries)
