from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverjet.quiver import Quiver, QuiverError, ZeroDimensionError, euler_form, sym_form


def test_euler_form_examples(s2, a2):
    assert euler_form(s2, (1,), (1,)) == -1
    assert euler_form(a2, (1, 1), (1, 1)) == 1
    assert euler_form(a2, (0, 0), (3, 2)) == 0


def test_sym_form_examples(s2, a2):
    assert sym_form(s2, (1,), (1,)) == -2
    assert euler_form(a2, (1, 0), (0, 1)) == -1
    assert euler_form(a2, (0, 1), (1, 0)) == 0
    assert sym_form(a2, (1, 0), (0, 1)) == -1


quivers = st.builds(
    lambda loops, between: Quiver.from_counts(loops, {(0, 1): between[0], (1, 2): between[1], (0, 2): between[2]}),
    st.lists(st.integers(0, 3), min_size=3, max_size=3),
    st.lists(st.integers(0, 3), min_size=3, max_size=3),
)
vecs = st.lists(st.integers(-4, 4), min_size=3, max_size=3).map(tuple)


@settings(max_examples=100, deadline=None)
@given(quivers, vecs, vecs, vecs)
def test_bilinear_and_symmetric(Q, d, d2, e):
    s = tuple(a + b for a, b in zip(d, d2))
    assert euler_form(Q, s, e) == euler_form(Q, d, e) + euler_form(Q, d2, e)
    assert sym_form(Q, d, e) == sym_form(Q, e, d)


def test_json_roundtrip_and_hash():
    Q = Quiver(("x", "y"), (("x", "y"), ("x", "x"), ("y", "x")))
    back = Quiver.from_json(json.loads(json.dumps(Q.to_json())))
    assert back == Q
    shuffled = Quiver(("y", "x"), (("y", "x"), ("x", "y"), ("x", "x")))
    assert shuffled.canonical_hash == Q.canonical_hash
    assert Quiver(("x", "y"), (("x", "y"),)).canonical_hash != Q.canonical_hash


def test_validation():
    with pytest.raises(QuiverError, match="duplicate"):
        Quiver(("a", "a"))
    with pytest.raises(QuiverError, match="undeclared"):
        Quiver(("a",), (("a", "b"),))
    Q = Quiver.loop_quiver(2)
    with pytest.raises(ZeroDimensionError):
        Q.nonzero_vec((0,))
    with pytest.raises(QuiverError):
        Q.vec((1, 2))
    with pytest.raises(QuiverError):
        Q.vec({"nope": 1})


def test_counts_and_variants(tn2):
    assert tn2.loop_counts == (2, 2)
    assert tn2.pair_counts[0][1] == 1
    assert tn2.vec({"1": 2, "2": 1}) == (2, 1)
    rev = tn2.reversed_arrow(len(tn2.arrows) - 1)
    assert rev.arrows[-1] == ("2", "1")
    assert len(tn2.double().arrows) == 2 * len(tn2.arrows)
    assert tn2.full_subquiver([1]).loop_counts == (2,)
