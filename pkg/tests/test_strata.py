from __future__ import annotations

from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverjet import catalog
from quiverjet.predicates import has_property_P, is_totally_negative
from quiverjet.quiver import Quiver, QuiverError
from quiverjet.strata import (CapExceeded, SemisimpleType, aux_quiver, enumerate_semisimple_types,
                              enumerate_top_types, tau_min, types_leq, z_sequence)


def T(*summands):
    return SemisimpleType(tuple(((tuple(d) if isinstance(d, tuple) else (d,)), m) for d, m in summands))


def test_tau_min(s2, tn2):
    assert tau_min(s2, (3,)) == T((1, 3))
    assert tau_min(tn2, (2, 1)) == T(((1, 0), 2), ((0, 1), 1))
    bare = Quiver(("1", "2"))
    assert tau_min(bare, (2, 1)) == tau_min(tn2, (2, 1))


def test_semisimple_types_s2(s2):
    assert enumerate_semisimple_types(s2, (2,)) == sorted([T((2, 1)), T((1, 2)), T((1, 1), (1, 1))])
    assert len(enumerate_semisimple_types(s2, (1,))) == 1


def test_kronecker_strict_excludes_delta_multiple(kronecker):
    strict = enumerate_semisimple_types(kronecker, (2, 2))
    assert all(((2, 2), 1) not in t.summands for t in strict)
    # (1,1) is the dimension of a simple, so it may appear twice
    assert T(((1, 1), 2)) in strict
    assert T(((1, 1), 1), ((1, 1), 1)) in strict


def test_rigid_dims_appear_once(a2):
    # vertex simples of A2 are rigid: a single isoclass each
    types = enumerate_semisimple_types(a2, (2, 1))
    for t in types:
        dims = t.dims
        assert len(dims) == len(set(dims))


def test_cap(s2):
    with pytest.raises(CapExceeded):
        enumerate_semisimple_types(s2, (6,), cap=3)
    with pytest.raises(CapExceeded):
        enumerate_top_types([4], cap=2)


def test_aux_quiver_examples(s2):
    aux, e = aux_quiver(s2, T((1, 2)))
    assert aux.loop_counts == (2,) and e == (2,)
    S3 = catalog.loops(3)
    aux, e = aux_quiver(S3, T((1, 1), (2, 1)))
    assert aux.loop_counts == (3, 9)
    assert aux.pair_counts[0][1] == 8
    assert e == (1, 1)


def test_aux_preserves_property_p():
    for name, Q, d in catalog.property_p_pairs(2):
        for tau in enumerate_semisimple_types(Q, d):
            aux, e = aux_quiver(Q, tau)
            assert is_totally_negative(aux)[0], (name, d, tau)
            assert has_property_P(aux, e), (name, d, tau)


def test_types_leq_examples(s2):
    assert types_leq(T((1, 2)), T((2, 1)))
    assert not types_leq(T((1, 1), (1, 1)), T((1, 2)))
    assert types_leq(T((1, 2)), T((1, 1), (1, 1)))
    with pytest.raises(QuiverError):
        types_leq(T((1, 2)), T((1, 3)))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_types_leq_partial_order(s2, d):
    types = enumerate_semisimple_types(s2, (d,))
    leq = {(a, b): types_leq(a, b) for a in types for b in types}
    tmin = tau_min(s2, (d,))
    for a in types:
        assert leq[a, a]
        assert leq[tmin, a]
        for b in types:
            if leq[a, b] and leq[b, a]:
                assert a == b
            if leq[a, b]:
                assert sum(m * m for m in a.mults) >= sum(m * m for m in b.mults)
            for c in types:
                if leq[a, b] and leq[b, c]:
                    assert leq[a, c]


def test_top_types_and_z(s2):
    assert enumerate_top_types(T((1, 2))) == [((1, 1), (1, 1)), ((1, 2),)]
    assert z_sequence(((1, 1), (1, 1)), [(1,)], s2) == [0, 1]
    a2 = catalog.a2()
    # classes with <N, N> = 1 never contribute
    for top in enumerate_top_types([2, 3]):
        assert set(z_sequence(top, [(1, 0), (0, 1)], a2)) == {0}


def test_top_type_count_matches_compositions():
    # compositions of e_j interleaved: for a single class, 2^(e-1) sequences
    for e in range(1, 7):
        assert len(enumerate_top_types([e])) == 2 ** (e - 1)


tops = st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=6).map(tuple)


@settings(max_examples=150, deadline=None)
@given(tops, st.randoms(use_true_random=False))
def test_interleaving_invariance(top, rnd):
    Q = catalog.loops(2)
    dims = [(1,), (2,), (3,)]
    base = sum(m * z for (_, m), z in zip(top, z_sequence(top, dims, Q)))
    # random interleaving that keeps each class's subsequence
    queues = {j: [s for s in top if s[0] == j] for j in (1, 2, 3)}
    labels = [s[0] for s in top]
    rnd.shuffle(labels)
    perm = tuple(queues[j].pop(0) for j in labels)
    assert sum(m * z for (_, m), z in zip(perm, z_sequence(perm, dims, Q))) == base


def test_interleaving_exhaustive_small():
    Q = catalog.loops(3)
    dims = [(1,), (2,)]
    top = ((1, 1), (2, 1), (1, 2), (2, 1))
    base = sum(m * z for (_, m), z in zip(top, z_sequence(top, dims, Q)))
    seen = 0
    for perm in set(permutations(top)):
        if [s for s in perm if s[0] == 1] == [(1, 1), (1, 2)] and [s for s in perm if s[0] == 2] == [(2, 1), (2, 1)]:
            seen += 1
            assert sum(m * z for (_, m), z in zip(perm, z_sequence(perm, dims, Q))) == base
    assert seen == 6


def test_type_json_roundtrip(tn2):
    t = T(((1, 0), 2), ((0, 1), 1))
    assert SemisimpleType.from_json(tn2, t.to_json(tn2)) == t
    with pytest.raises(QuiverError):
        SemisimpleType.from_json(tn2, [{"dim": {"1": 1}}])
