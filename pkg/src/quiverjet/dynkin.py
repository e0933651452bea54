"""Exact positive-semidefiniteness and extended-Dynkin detection."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .quiver import Quiver, QuiverError, quiver_is_connected


def psd_rank(mat: Sequence[Sequence[int]]) -> tuple[bool, int]:
    """Return (is_psd, rank) by symmetric elimination over the rationals.

    A zero diagonal entry with a non-zero entry in its row certifies an
    indefinite 2x2 minor, so it is enough to pivot on positive diagonals.
    """
    a = [[Fraction(x) for x in row] for row in mat]
    n = len(a)
    live = list(range(n))
    rank = 0
    while live:
        if any(a[i][i] < 0 for i in live):
            return False, rank
        piv = next((i for i in live if a[i][i] > 0), None)
        if piv is None:
            if any(a[i][j] != 0 for i in live for j in live):
                return False, rank
            break
        live.remove(piv)
        p = a[piv][piv]
        for i in live:
            f = a[i][piv] / p
            if f:
                for j in live:
                    a[i][j] -= f * a[piv][j]
        rank += 1
    return True, rank


def nullspace(mat: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Basis of the rational right kernel (reduced row echelon form)."""
    a = [[Fraction(x) for x in row] for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis


def primitive_integer(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = g or 1
    ints = [x // g for x in ints]
    if sum(ints) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def is_extended_dynkin(Q: Quiver) -> tuple[int, ...] | None:
    """Minimal imaginary root delta if Q is extended Dynkin, else None.

    Q is extended Dynkin iff its symmetrized Euler matrix is positive
    semidefinite of nullity one with a strictly positive kernel vector.
    """
    if len(Q) == 0 or not quiver_is_connected(Q):
        raise QuiverError("is_extended_dynkin needs a connected, non-empty quiver")
    C = Q.cartan_matrix
    ok, rank = psd_rank(C)
    if not ok or len(Q) - rank != 1:
        return None
    (k,) = nullspace(C)
    delta = primitive_integer(k)
    if all(x > 0 for x in delta):
        return delta
    return None
