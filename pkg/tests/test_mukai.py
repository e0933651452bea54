from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverjet import catalog
from quiverjet.mukai import (MukaiError, MukaiVector, NSLattice, cross_check_gloop, ext_quiver_from_mukai,
                            gloop_base, gloop_consistent, is_positive, is_primitive, mukai_pairing,
                            parse_vectors, sym_form_identity_check, total_negativity_euler_check)
from quiverjet.predicates import is_totally_negative

L0 = NSLattice(((0,),))


def test_pairing_examples():
    v = MukaiVector(0, (1,), 1)
    assert mukai_pairing(v, v, L0) == 0
    w = MukaiVector(1, (0,), 1)
    assert mukai_pairing(w, w, L0) == -2
    with pytest.raises(MukaiError):
        mukai_pairing(MukaiVector(0, (1, 2), 0), v, L0)


lattices = st.integers(1, 3).flatmap(
    lambda r: st.lists(st.integers(-3, 3), min_size=r * r, max_size=r * r).map(
        lambda xs: (lambda A: NSLattice(tuple(map(tuple, (A + A.T).tolist()))))(np.array(xs).reshape(r, r))))


@settings(max_examples=100, deadline=None)
@given(lattices, st.data())
def test_pairing_symmetric(L, data):
    vec = st.builds(lambda r, c, a: MukaiVector(r, tuple(c), a), st.integers(-5, 5),
                    st.lists(st.integers(-5, 5), min_size=L.rank, max_size=L.rank), st.integers(-5, 5))
    v, w = data.draw(vec), data.draw(vec)
    assert mukai_pairing(v, w, L) == mukai_pairing(w, v, L)


def test_primitive_and_positive():
    assert not is_primitive(MukaiVector(0, (0,), 3))
    assert is_positive(MukaiVector(0, (0,), 1), L0)
    assert not is_positive(MukaiVector(0, (0,), -1), L0)
    assert is_primitive(MukaiVector(1, (2,), 1))
    # rank zero with c != 0 depends on the caller's effectivity flag
    v = MukaiVector(0, (1,), 1)
    assert not is_positive(v, L0) and is_positive(v, L0, c_effective=True)
    assert not is_positive(MukaiVector(0, (1,), 0), L0, c_effective=True)
    assert is_positive(MukaiVector(1, (0,), 1), L0)  # v.v = -2 is allowed
    assert not is_positive(MukaiVector(1, (0,), 2), L0)  # v.v = -4


def test_ext_quiver_examples():
    ext = ext_quiver_from_mukai([MukaiVector(0, (1,), 1)], L0)
    assert ext.underlying == catalog.jordan()
    assert not ext.totally_negative
    v0, L = gloop_base(2)
    ext = ext_quiver_from_mukai([v0, v0.scale(2)], L)
    assert ext.underlying.loop_counts == (2, 5)
    assert ext.underlying.pair_counts[0][1] == 4
    assert ext.double.loop_counts == (4, 10)
    assert ext.totally_negative


def test_ext_quiver_errors():
    with pytest.raises(MukaiError, match="even"):
        ext_quiver_from_mukai([MukaiVector(0, (1,), 0)], NSLattice(((1,),)))
    with pytest.raises(MukaiError, match="arrow count"):
        ext_quiver_from_mukai([MukaiVector(0, (1,), 0), MukaiVector(0, (-1,), 0)], NSLattice(((2,),)))
    with pytest.raises(MukaiError):
        NSLattice(((0, 1), (2, 0)))


def test_double_loops_even_and_verdict_matches_structure():
    L = NSLattice(((2, 1), (1, 2)))
    rng = np.random.default_rng(0)
    for _ in range(200):
        vecs = [MukaiVector(0, tuple(int(x) for x in rng.integers(0, 3, 2)), int(rng.integers(0, 2)))
                for _ in range(int(rng.integers(1, 4)))]
        try:
            ext = ext_quiver_from_mukai(vecs, L)
        except MukaiError:
            continue
        assert all(g % 2 == 0 for g in ext.double.loop_counts)
        assert gloop_consistent(ext)
        assert ext.totally_negative == is_totally_negative(ext.underlying)[0]


def _partitions(k, largest=None):
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def test_gloop_examples():
    r = cross_check_gloop(2, [1, 1], [1, 1])
    assert r["ok"] and r["ext"] == [[2, 2], [2, 2]]
    r = cross_check_gloop(2, [1, 2], [1, 1])
    assert r["ok"] and r["ext"] == [[2, 4], [4, 5]]
    assert cross_check_gloop(3, [1, 1, 2], [2, 1, 1])["ok"]


@pytest.mark.parametrize("g", [2, 3])
def test_gloop_all_partitions(g):
    rng = np.random.default_rng(g)
    for k in range(1, 5):
        for m in _partitions(k):
            e = [int(x) for x in rng.integers(1, 4, len(m))]
            assert cross_check_gloop(g, list(m), e)["ok"]


def test_sym_form_identity():
    v0, L = gloop_base(3)
    assert sym_form_identity_check([v0, v0.scale(2), v0.scale(3)], L, trials=100)
    assert sym_form_identity_check([MukaiVector(0, (1,), 1)], L0)
    L2 = NSLattice(((2, 1), (1, -2)))
    assert sym_form_identity_check([MukaiVector(1, (1, 0), 1), MukaiVector(0, (1, 1), 0)], L2, trials=50)


def test_total_negativity_descriptors():
    assert total_negativity_euler_check({"kind": "preprojective", "quiver": catalog.loops(2)})
    assert not total_negativity_euler_check({"kind": "multiplicative", "quiver": catalog.jordan()})
    v0, L = gloop_base(2)
    assert total_negativity_euler_check({"kind": "k3", "vectors": [v0, v0.scale(2)], "lattice": L})
    with pytest.raises(MukaiError):
        total_negativity_euler_check({"kind": "derived"})
    for Q in catalog.small_quivers(2, 3, 2):
        assert total_negativity_euler_check(Q) == is_totally_negative(Q)[0]


def test_parse_vectors():
    assert parse_vectors("(0,(1),1);(0,(2),2)") == [MukaiVector(0, (1,), 1), MukaiVector(0, (2,), 2)]
    assert parse_vectors("(1,(),-1)") == [MukaiVector(1, (), -1)]
    with pytest.raises(MukaiError):
        parse_vectors("(0,1,1)")
