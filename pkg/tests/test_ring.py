from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverjet import kernels
from quiverjet.ring import (BudgetExceeded, NotAUnit, RingError, RingMatrix, TruncatedPoly,
                            brute_kernel_count, enumerate_ring, fq_rank, inverse_table,
                            kernel_exponent_array, kernel_size_exponent, solution_exponent)


def P(q, n, *c):
    return TruncatedPoly(q, n, c)


def test_arithmetic_examples():
    assert P(2, 2, 1, 1) * P(2, 2, 1, 1) == P(2, 2, 1)
    assert P(2, 2, 0, 1) * P(2, 2, 0, 1) == P(2, 2)
    assert P(2, 3, 1, 1).inverse() == P(2, 3, 1, 1, 1)
    assert -P(3, 2, 1, 2) == P(3, 2, 2, 1)
    assert P(5, 2, 3) + P(5, 2, 4, 1) == P(5, 2, 2, 1)


def test_errors():
    with pytest.raises(NotAUnit):
        P(3, 2, 0, 1).inverse()
    with pytest.raises(RingError):
        P(4, 2, 1)
    with pytest.raises(RingError):
        P(2, 0)
    with pytest.raises(RingError):
        P(2, 2, 1) + P(3, 2, 1)


ring_params = st.sampled_from([(2, 1), (2, 3), (3, 2), (5, 3), (7, 4)])


@settings(max_examples=200, deadline=None)
@given(ring_params, st.data())
def test_ring_axioms_and_inverse(qn, data):
    q, n = qn
    coeff = st.lists(st.integers(0, q - 1), min_size=n, max_size=n).map(tuple)
    a, b, c = (TruncatedPoly(q, n, data.draw(coeff)) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a + (-a) == TruncatedPoly(q, n, ())
    if a.is_unit:
        assert a * a.inverse() == TruncatedPoly(q, n, (1,))
    assert a.is_unit == (a.valuation == 0)


def test_enumerate_ring():
    assert [e.coeffs for e in enumerate_ring(2, 2)] == [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert [e.coeffs for e in enumerate_ring(3, 1)] == [(0,), (1,), (2,)]
    for q, n in [(2, 3), (3, 2), (5, 2)]:
        assert len(list(enumerate_ring(q, n))) == q**n
    with pytest.raises(BudgetExceeded):
        list(enumerate_ring(3, 5, budget=100))


def test_kernel_examples():
    assert kernel_exponent_array(np.zeros((1, 1, 2)), 2, 2) == 2
    assert kernel_size_exponent(RingMatrix.from_array(np.array([[[0, 1]]]), 2, 2)) == 1
    for q, n in [(2, 1), (3, 3), (5, 2)]:
        assert kernel_size_exponent(RingMatrix.identity(3, q, n)) == 0


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2)])
def test_kernel_matches_brute_force(q, n):
    rng = np.random.default_rng(q * 10 + n)
    for _ in range(1000):
        r, c = rng.integers(1, 4, size=2)
        A = rng.integers(0, q, size=(r, c, n))
        mask = rng.random((r, c)) < 0.4
        A[mask, 0] = 0  # plenty of non-units
        assert q ** kernel_exponent_array(A, q, n) == brute_kernel_count(A, q, n)


def test_block_diagonal_exponents_add():
    rng = np.random.default_rng(7)
    q, n = 3, 3
    for _ in range(200):
        r1, c1, r2, c2 = rng.integers(1, 4, size=4)
        A = rng.integers(0, q, size=(r1, c1, n))
        B = rng.integers(0, q, size=(r2, c2, n))
        A[rng.random((r1, c1)) < 0.5, 0] = 0
        M = np.zeros((r1 + r2, c1 + c2, n), dtype=np.int64)
        M[:r1, :c1] = A
        M[r1:, c1:] = B
        assert kernel_exponent_array(M, q, n) == kernel_exponent_array(A, q, n) + kernel_exponent_array(B, q, n)


def test_rank_nullity_residue_field():
    rng = np.random.default_rng(3)
    for q in (2, 3, 5):
        for _ in range(200):
            r, c = rng.integers(1, 6, size=2)
            A = rng.integers(0, q, size=(r, c))
            assert kernel_exponent_array(A[:, :, None], q, 1) == c - fq_rank(A, q)


def test_solution_exponent_affine():
    rng = np.random.default_rng(11)
    q, n = 2, 2
    from itertools import product
    elems = [np.array(e.coeffs) for e in enumerate_ring(q, n)]
    for _ in range(200):
        r, c = rng.integers(1, 3, size=2)
        A = rng.integers(0, q, size=(r, c, n))
        b = rng.integers(0, q, size=(r, n))
        count = 0
        for y in product(elems, repeat=c):
            ok = True
            for i in range(r):
                acc = np.zeros(n, dtype=np.int64)
                for j in range(c):
                    prod = np.zeros(n, dtype=np.int64)
                    kernels.poly_mul(A[i, j], y[j], prod, q, n)
                    acc = (acc + prod) % q
                ok &= bool((acc == b[i]).all())
            count += ok
        k = solution_exponent(A, b, q, n)
        assert (0 if k is None else q**k) == count


def test_inverse_table():
    for q in (2, 3, 7, 11):
        inv = inverse_table(q)
        assert all((a * inv[a]) % q == 1 for a in range(1, q))


def test_matrix_validation():
    with pytest.raises(RingError):
        RingMatrix(1, 2, ((P(2, 2, 1),),))
    with pytest.raises(RingError):
        RingMatrix(1, 2, ((P(2, 2, 1), P(3, 2, 1)),))
