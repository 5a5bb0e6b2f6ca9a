"""Region decomposition, diagram tracing and persistent-diagram lists."""

import numpy as np
import pytest

from germforge.classify import diagram_trace, limit_points, persistent_diagrams, region_decompose
from germforge.errors import NumericBudgetError
from germforge.poly import Poly
from germforge.transition import transition_set
from germforge.unfolding import Unfolding, universal_unfolding


@pytest.fixture(scope="module")
def quartic():
    U = universal_unfolding("x^4+lambda")
    return U, persistent_diagrams(U, resolution=80)


def test_fold_diagram():
    F = Unfolding(Poly.parse("x^2+lambda"), [], ())
    lps, counts = limit_points(F, ())
    assert counts == [2, 0] and len(lps) == 1 and lps[0].lam == 0.0 and lps[0].opens == "left"
    d = diagram_trace(F)
    for lam, rs in zip(d.lambdas, d.roots):
        expect = sorted({-(-lam) ** 0.5, (-lam) ** 0.5}) if lam <= 0 else []
        assert np.allclose(rs, expect, atol=1e-7)


def test_quartic_three_regions(quartic):
    U, P = quartic
    assert len(P.entries) == 3
    assert len({d.signature for _, d in P.entries}) == 3
    assert all(d.max_residual <= 1e-9 and d.dropped == 0 for _, d in P.entries)
    assert len(P.short_list()) == 3


def test_signature_stable_within_region(quartic):
    U, P = quartic
    for region, diag in P.entries:
        for s in region.samples:
            assert diagram_trace(U, s).signature == diag.signature


def test_region_points_avoid_transition_set(quartic):
    U, P = quartic
    for region, _ in P.entries:
        a1, a2 = region.point
        assert abs(a1) > 1e-6 and abs(8 * a2**3 + 27 * a1**2) > 1e-6


def test_empty_transition_set_is_one_region():
    T = transition_set(universal_unfolding("x^2+lambda"))
    assert len(region_decompose(T)) == 1


def test_too_many_parameters():
    T = transition_set(universal_unfolding("x^5+lambda*x+lambda^2"))
    with pytest.raises(NumericBudgetError):
        region_decompose(T)


def test_deterministic(quartic):
    U, P = quartic
    Q = persistent_diagrams(U, resolution=80)
    assert [(r.point, d.signature) for r, d in P.entries] == [(r.point, d.signature) for r, d in Q.entries]
