"""Real roots of univariate rational polynomials by Sturm sequences.

Polynomials are coefficient lists, highest degree first, of exact
rationals.  Roots are isolated exactly, bracketed to a rational width
threshold and then polished by float bisection.
"""

from __future__ import annotations

from gmpy2 import mpq

DEFAULT_WIDTH = mpq(1, 2**10)


def _trim(p):
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return list(p[i:])


def _degree(p):
    return len(p) - 1 if any(p) else -1


def _rem(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        if a[0] == 0:
            a.pop(0)
            continue
        q = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= q * b[i]
        a.pop(0)
    return _trim(a) if a else [mpq(0)]


def _quo(a, b):
    a = list(a)
    out = []
    while len(a) >= len(b):
        q = a[0] / b[0]
        out.append(q)
        for i in range(len(b)):
            a[i] -= q * b[i]
        a.pop(0)
    return _trim(out) if out else [mpq(0)]


def derivative(p):
    n = len(p) - 1
    return _trim([c * (n - i) for i, c in enumerate(p[:-1])]) if n > 0 else [mpq(0)]


def gcd(a, b):
    a, b = _trim(a), _trim(b)
    while _degree(b) >= 0:
        a, b = b, _rem(a, b)
    return [c / a[0] for c in a]


def squarefree(p):
    """``p / gcd(p, p')``: same real roots, all simple."""
    p = _trim([mpq(c) for c in p])
    if _degree(p) < 1:
        return p
    g = gcd(p, derivative(p))
    return _quo(p, g) if _degree(g) > 0 else p


def sturm_sequence(p):
    p = _trim([mpq(c) for c in p])
    seq = [p, derivative(p)]
    while _degree(seq[-1]) > 0:
        r = _rem(seq[-2], seq[-1])
        if _degree(r) < 0:
            break
        seq.append([-c for c in r])
    return seq


def evaluate(p, x):
    v = 0
    for c in p:
        v = v * x + c
    return v


def _variations(seq, x):
    signs = [s for s in (evaluate(p, x) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(seq, a, b) -> int:
    """Number of distinct real roots in (a, b] of the first polynomial of ``seq``."""
    return _variations(seq, a) - _variations(seq, b)


def root_bound(p):
    """Cauchy bound: every real root lies in [-R, R]."""
    p = _trim(p)
    lead = abs(p[0])
    return 1 + max((abs(c) / lead for c in p[1:]), default=mpq(0))


def isolate(p, width=DEFAULT_WIDTH):
    """Disjoint rational intervals (a, b], each holding exactly one root, with b - a <= width."""
    p = squarefree(p)
    if _degree(p) < 1:
        return []
    seq = sturm_sequence(p)
    R = root_bound(p)
    out = []
    stack = [(-R - 1, R + 1, count_roots(seq, -R - 1, R + 1))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1 and b - a <= width:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if evaluate(p, m) == 0:
            # land the exact root in the left interval's closed end
            out.append((m - width / 4, m))
            left = count_roots(seq, a, m - width / 4)
            right = count_roots(seq, m, b)
            stack.append((a, m - width / 4, left))
            stack.append((m, b, right))
            continue
        stack.append((m, b, count_roots(seq, m, b)))
        stack.append((a, m, count_roots(seq, a, m)))
    out.sort()
    return out


def _polish(pf, a, b, tol):
    fa = pf(a)
    if fa == 0:
        return a
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = pf(m)
        if fm == 0 or b - a <= 1e-15 * max(1.0, abs(m)):
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def real_roots(p, tol=1e-9, width=DEFAULT_WIDTH):
    """Sorted floats approximating every distinct real root of ``p``.

    Returns ``(roots, residuals)`` where residuals are ``|p(root)|`` in
    floating point; callers compare them with ``tol``.
    """
    p = [mpq(c) for c in p]
    sf = squarefree(p)
    coeffs = [float(c) for c in sf]

    def pf(x):
        v = 0.0
        for c in coeffs:
            v = v * x + c
        return v

    full = [float(c) for c in _trim(p)]

    def pfull(x):
        v = 0.0
        for c in full:
            v = v * x + c
        return v

    roots, res = [], []
    for a, b in isolate(p, width):
        if evaluate(sf, b) == 0:
            x = float(b)
        else:
            x = _polish(pf, float(a), float(b), tol)
        roots.append(x)
        res.append(abs(pfull(x)))
    return roots, res
