"""Per-quiver predicates: total negativity, fundamental domain, property (P),
and the existence oracle for simple modules of the preprojective algebra."""

from __future__ import annotations

from typing import Optional

from .dynkin import is_extended_dynkin
from .graph import bridge_ids, is_two_edge_connected
from .quiver import DimLike, Quiver, is_connected, sym_form

Witness = Optional[tuple[tuple[int, ...], tuple[int, ...]]]


def is_totally_negative(Q: Quiver) -> tuple[bool, Witness]:
    """Structural test: >= 2 loops everywhere and every pair of vertices joined.

    On failure the witness is a pair of unit vectors (e_i, e_j) whose
    symmetrized pairing is >= 0.
    """
    for i, g in enumerate(Q.loop_counts):
        if g < 2:
            u = Q.unit(i)
            return False, (u, u)
    n = len(Q)
    for i in range(n):
        for j in range(i + 1, n):
            if Q.pair_counts[i][j] == 0:
                return False, (Q.unit(i), Q.unit(j))
    return True, None


def _support_connected(Q: Quiver, d: tuple[int, ...]) -> bool:
    return is_connected(len(Q), Q.arrow_indices, [i for i, x in enumerate(d) if x])


def fundamental_domain_contains(Q: Quiver, d: DimLike, *, strict: bool = True) -> bool:
    """Membership in the fundamental domain F_Q.

    ``strict=True`` demands (d, e_i) < 0 for every i in supp(d).  With
    ``strict=False`` the classical region is used instead: (d, e_i) <= 0 for
    every vertex i; this is the region on which the simplicity exceptions
    below are stated.
    """
    d = Q.nonzero_vec(d)
    if not _support_connected(Q, d):
        return False
    if strict:
        return all(sym_form(Q, d, Q.unit(i)) < 0 for i in range(len(Q)) if d[i])
    return all(sym_form(Q, d, Q.unit(i)) <= 0 for i in range(len(Q)))


def has_property_P(Q: Quiver, d: DimLike, *, strict_exception: bool = False) -> bool:
    """Total negativity plus the (1,1) single-arrow exclusion.

    By default the exclusion fires only when supp(d) is exactly two vertices
    joined by one arrow and d = (1,1) there.  ``strict_exception=True``
    fires whenever d is 1 on its support and some pair in the support is
    joined by exactly one arrow.
    """
    d = Q.nonzero_vec(d)
    if not is_totally_negative(Q)[0]:
        return False
    supp = [i for i, x in enumerate(d) if x]
    if strict_exception:
        if all(d[i] == 1 for i in supp):
            for a in supp:
                for b in supp:
                    if a < b and Q.pair_counts[a][b] == 1:
                        return False
        return True
    if len(supp) == 2:
        i, j = supp
        if Q.pair_counts[i][j] == 1 and d[i] == d[j] == 1:
            return False
    return True


def _multiple(vec: tuple[int, ...], delta: tuple[int, ...]) -> int | None:
    m = vec[0] // delta[0]
    if m >= 1 and all(v == m * x for v, x in zip(vec, delta)):
        return m
    return None


def _dynkin_multiple(Q: Quiver, d: tuple[int, ...]) -> int | None:
    delta = is_extended_dynkin(Q)
    if delta is None:
        return None
    return _multiple(d, delta)


def _sides(Q: Quiver, k: int) -> tuple[list[int], list[int]]:
    """Vertex sets on each side of bridge k (source side first)."""
    s, t = Q.arrow_indices[k]
    edges = [e for j, e in enumerate(Q.arrow_indices) if j != k]
    adj: dict[int, list[int]] = {v: [] for v in range(len(Q))}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {s}
    stack = [s]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    left = sorted(seen)
    right = [v for v in range(len(Q)) if v not in seen]
    return left, right


def no_simple_exceptions(Q: Quiver, d: tuple[int, ...]) -> list[str]:
    """Which of the three obstructions to a simple module apply to a sincere d
    on a connected quiver (empty list when none does)."""
    hits = []
    m = _dynkin_multiple(Q, d)
    if m is not None and m >= 2:
        hits.append("extended-dynkin-multiple")
    for k in bridge_ids(Q):
        s, t = Q.arrow_indices[k]
        if d[s] == 1 and d[t] == 1:
            hits.append("unit-bridge")
        left, right = _sides(Q, k)
        for end, other in ((s, right), (t, left)):
            if d[end] != 1:
                continue
            sub = Q.full_subquiver(other)
            m = _dynkin_multiple(sub, tuple(d[i] for i in other))
            if m is not None and m >= 2:
                hits.append("bridge-to-dynkin-multiple")
    return sorted(set(hits))


def simple_module_exists(Q: Quiver, d: DimLike) -> Optional[bool]:
    """True / False when decidable from the quoted criteria, None if unknown."""
    d = Q.nonzero_vec(d)
    supp = [i for i, x in enumerate(d) if x]
    if not _support_connected(Q, d):
        return False
    if has_property_P(Q, d):
        return True
    sub = Q.full_subquiver(supp)
    ds = tuple(d[i] for i in supp)
    if all(x == 1 for x in ds):
        return is_two_edge_connected(sub)
    if fundamental_domain_contains(sub, ds, strict=False):
        return not no_simple_exceptions(sub, ds)
    return None
