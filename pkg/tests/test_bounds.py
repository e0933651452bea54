from __future__ import annotations

import pytest

from quiverjet import catalog
from quiverjet.bounds import (cb_bound, check_loop_lemma, check_totneg_lemma, dim_M, dim_R_double,
                              dim_X, loop_lemma_lhs, mustata_ledger)
from quiverjet.quiver import QuiverError, dot
from quiverjet.strata import enumerate_top_types, tau_min


def test_dims_examples(s2):
    assert (dim_X(s2, (2,)), dim_M(s2, (2,)), dim_R_double(s2, (2,))) == (13, 10, 16)
    assert dim_X(s2, (1,)) == 4
    assert dim_M(s2, (2,)) + dim_R_double(s2, (2,)) == 2 * dim_X(s2, (2,))


def test_codimension_identity_everywhere():
    for Q in catalog.small_quivers(2, 2, 2):
        for d in catalog.dim_vectors(len(Q), 3):
            assert dim_X(Q, d) == dim_R_double(Q, d) - (dot(d, d) - 1)


def test_cb_bound_examples(s2, a2):
    assert cb_bound(s2, [(1,)], ((1, 2),), (2,)) == 0
    assert cb_bound(s2, [(1,)], ((1, 1), (1, 1)), (2,)) == 5
    assert cb_bound(a2, [(1, 0), (0, 1)], ((1, 1), (2, 1)), (1, 1)) == 1
    with pytest.raises(QuiverError):
        cb_bound(s2, [(1,)], ((1, 1),), (2,))


def test_cb_bound_interleaving_invariant(tn2):
    d = (2, 2)
    tau = tau_min(tn2, d)
    by_class = {}
    for top in enumerate_top_types(tau):
        key = tuple(tuple(m for j, m in top if j == c) for c in (1, 2))
        by_class.setdefault(key, set()).add(cb_bound(tn2, tau.dims, top, d))
    assert all(len(v) == 1 for v in by_class.values())


def test_loop_lemma_examples():
    rep = check_loop_lemma(2, 2)
    rows = {c: (lhs, margin) for c, lhs, margin in rep.rows}
    assert rows[(1, 1)] == (1, 0)
    assert rows[(2,)][0] == 6
    assert loop_lemma_lhs(3, 2, (1, 1)) == 5


@pytest.mark.parametrize("g", [2, 3, 4])
@pytest.mark.parametrize("d", range(2, 7))
def test_loop_lemma_equality_set(g, d):
    rep = check_loop_lemma(g, d)
    assert rep.ok
    assert rep.equality_set == ([tuple([1] * d)] if g == 2 else [])


def test_totneg_lemma_examples(s2, tn2):
    rep = check_totneg_lemma(s2, (2,))
    assert (rep.max_bound, rep.threshold, rep.margin) == (5, 6, 1)
    rep = check_totneg_lemma(tn2, (2, 1))
    assert (rep.max_bound, rep.threshold, rep.margin) == (7, 8, 1)
    assert rep.remainder_lhs == 0 and rep.remainder_ok
    assert rep.decomposition_exact


def test_totneg_lemma_preconditions(tn2, a2):
    with pytest.raises(QuiverError):
        check_totneg_lemma(tn2, (1, 1))
    with pytest.raises(QuiverError):
        check_totneg_lemma(a2, (2, 1))
    with pytest.raises(QuiverError):
        check_totneg_lemma(catalog.named()["TN3"], (1, 1, 1))


def test_totneg_lemma_support_restriction():
    Q = catalog.named()["TN3-mixed"]
    full = check_totneg_lemma(Q, (2, 0, 1))
    sub = check_totneg_lemma(Q.full_subquiver([0, 2]), (2, 1))
    assert (full.max_bound, full.threshold) == (sub.max_bound, sub.threshold)


def test_totneg_lemma_catalog():
    n = 0
    for name, Q, d in catalog.property_p_pairs(3, max_total=6, exclude_ones=True):
        rep = check_totneg_lemma(Q, d)
        assert rep.verdict and rep.remainder_ok and rep.decomposition_exact, (name, d)
        n += 1
    assert n >= 20


def test_mustata_ledger(s2):
    led = mustata_ledger(s2, (2,), 5)
    assert led["ok"] and all(r["equality"] for r in led["rows"])
    led = mustata_ledger(catalog.loops(3), (2,), 5)
    assert led["ok"] and led["identity"]
