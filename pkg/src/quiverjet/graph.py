"""Bridges, 2-edge-connectivity and the b(Q) decomposition criterion."""

from __future__ import annotations

from typing import Iterator, Sequence

from .quiver import Quiver, QuiverError, quiver_is_connected


def bridge_ids(Q: Quiver) -> list[int]:
    """Indices of arrows that are bridges of the underlying multigraph.

    Iterative Tarjan lowpoint search keyed on arrow ids, so a parallel copy
    of the tree edge is correctly treated as a back edge.  Loops are skipped.
    """
    if not quiver_is_connected(Q):
        raise QuiverError("bridges() needs a connected quiver")
    n = len(Q)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for k, (s, t) in enumerate(Q.arrow_indices):
        if s != t:
            adj[s].append((t, k))
            adj[t].append((s, k))

    pre = [-1] * n
    low = [0] * n
    out: list[int] = []
    counter = 0
    for root in range(n):
        if pre[root] != -1:
            continue
        pre[root] = low[root] = counter
        counter += 1
        # frames: (vertex, arrow id used to enter, iterator position)
        stack = [(root, -1, 0)]
        while stack:
            v, via, pos = stack[-1]
            if pos < len(adj[v]):
                stack[-1] = (v, via, pos + 1)
                w, k = adj[v][pos]
                if k == via:
                    continue
                if pre[w] == -1:
                    pre[w] = low[w] = counter
                    counter += 1
                    stack.append((w, k, 0))
                else:
                    low[v] = min(low[v], pre[w])
            else:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > pre[u]:
                        out.append(via)
    return sorted(out)


def bridges(Q: Quiver) -> list[tuple[str, str]]:
    return [Q.arrows[k] for k in bridge_ids(Q)]


def is_two_edge_connected(Q: Quiver) -> bool:
    return not bridge_ids(Q)


def b_invariant(Q: Quiver) -> int:
    """b(Q) = 1 - #vertices + #arrows."""
    return 1 - len(Q) + len(Q.arrows)


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """All set partitions of ``items`` (restricted growth strings)."""
    items = list(items)
    if not items:
        yield []
        return

    def rec(k: int, blocks: list[list]):
        if k == len(items):
            yield [list(b) for b in blocks]
            return
        x = items[k]
        for b in blocks:
            b.append(x)
            yield from rec(k + 1, blocks)
            b.pop()
        blocks.append([x])
        yield from rec(k + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def two_connected_via_decompositions(Q: Quiver) -> bool:
    """b(Q) > sum of b over blocks, for every partition of Q_0 into >= 2 blocks."""
    total = b_invariant(Q)
    for blocks in set_partitions(range(len(Q))):
        if len(blocks) < 2:
            continue
        parts = sum(b_invariant(Q.full_subquiver(b)) for b in blocks)
        if not total > parts:
            return False
    return True
