"""Quivers, dimension vectors and the Euler form.

A quiver is stored as an ordered tuple of vertex names plus a tuple of
``(source, target)`` arrows.  Dimension vectors are plain tuples of ints
aligned with the vertex order; every public function also accepts a
``{vertex: int}`` mapping and normalizes it through :meth:`Quiver.vec`.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

DimLike = Union[Mapping[str, int], Sequence[int]]
DimVector = tuple


class QuiverError(ValueError):
    """Malformed quiver or dimension vector."""


class ZeroDimensionError(QuiverError):
    """An operation that needs d != 0 received the zero vector."""


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            dup = [v for v, c in Counter(verts).items() if c > 1]
            raise QuiverError(f"duplicate vertex id(s): {dup}")
        arrows = tuple((str(s), str(t)) for s, t in self.arrows)
        known = set(verts)
        for k, (s, t) in enumerate(arrows):
            if s not in known or t not in known:
                raise QuiverError(f"arrow {k} ({s}->{t}) names an undeclared vertex")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(verts)})

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_counts(cls, loops: Sequence[int], between: Mapping[tuple[int, int], int] | None = None,
                    names: Sequence[str] | None = None) -> "Quiver":
        """Build a quiver from loop counts and unordered pair counts.

        Arrows between ``i < j`` are oriented ``i -> j``.
        """
        n = len(loops)
        names = [str(i + 1) for i in range(n)] if names is None else list(names)
        arrows = []
        for i, g in enumerate(loops):
            arrows += [(names[i], names[i])] * int(g)
        for (i, j), r in sorted((between or {}).items()):
            if i == j:
                raise QuiverError("use `loops` for arrows i -> i")
            a, b = min(i, j), max(i, j)
            arrows += [(names[a], names[b])] * int(r)
        return cls(tuple(names), tuple(arrows))

    @classmethod
    def loop_quiver(cls, g: int) -> "Quiver":
        """The one-vertex quiver S_g with g loops."""
        return cls.from_counts([g])

    @classmethod
    def from_json(cls, obj: Mapping) -> "Quiver":
        try:
            vertices = obj["vertices"]
            arrows = [(a["src"], a["tgt"]) for a in obj.get("arrows", [])]
        except (KeyError, TypeError) as exc:
            raise QuiverError(f"quiver JSON must look like "
                              f'{{"vertices": [...], "arrows": [{{"src":..,"tgt":..}}]}}: {exc}') from exc
        if not isinstance(vertices, list):
            raise QuiverError('"vertices" must be a list')
        return cls(tuple(vertices), tuple(arrows))

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "arrows": [{"src": s, "tgt": t} for s, t in self.arrows]}

    # -- basic data -----------------------------------------------------

    def __len__(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise QuiverError(f"unknown vertex {v!r}") from None

    @cached_property
    def arrow_indices(self) -> tuple[tuple[int, int], ...]:
        return tuple((self._index[s], self._index[t]) for s, t in self.arrows)

    @cached_property
    def loop_counts(self) -> tuple[int, ...]:
        g = [0] * len(self)
        for s, t in self.arrow_indices:
            if s == t:
                g[s] += 1
        return tuple(g)

    @cached_property
    def pair_counts(self) -> tuple[tuple[int, ...], ...]:
        """Symmetric matrix of arrow counts between distinct vertices."""
        n = len(self)
        r = [[0] * n for _ in range(n)]
        for s, t in self.arrow_indices:
            if s != t:
                r[s][t] += 1
                r[t][s] += 1
        return tuple(tuple(row) for row in r)

    def loops(self, v: str | int) -> int:
        return self.loop_counts[v if isinstance(v, int) else self.index(v)]

    def arrows_between(self, u: str | int, v: str | int) -> int:
        i = u if isinstance(u, int) else self.index(u)
        j = v if isinstance(v, int) else self.index(v)
        if i == j:
            raise QuiverError("arrows_between takes distinct vertices; use loops()")
        return self.pair_counts[i][j]

    @cached_property
    def euler_matrix(self) -> tuple[tuple[int, ...], ...]:
        """E[i][j] = delta_ij - #{arrows i -> j}."""
        n = len(self)
        e = [[int(i == j) for j in range(n)] for i in range(n)]
        for s, t in self.arrow_indices:
            e[s][t] -= 1
        return tuple(tuple(row) for row in e)

    @cached_property
    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Symmetrized matrix C = E + E^T."""
        e = self.euler_matrix
        n = len(self)
        return tuple(tuple(e[i][j] + e[j][i] for j in range(n)) for i in range(n))

    @cached_property
    def canonical_hash(self) -> str:
        payload = json.dumps({"vertices": sorted(self.vertices),
                              "arrows": sorted(list(a) for a in self.arrows)},
                             separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    # -- dimension vectors ----------------------------------------------

    def vec(self, d: DimLike, *, allow_negative: bool = False) -> tuple[int, ...]:
        """Normalize a dimension vector to a tuple aligned with ``vertices``."""
        if isinstance(d, Mapping):
            keys = set(d)
            if keys != set(self.vertices):
                missing = set(self.vertices) - keys
                extra = keys - set(self.vertices)
                raise QuiverError(f"vertex-set mismatch (missing {sorted(missing)}, extra {sorted(extra)})")
            out = tuple(int(d[v]) for v in self.vertices)
        else:
            out = tuple(int(x) for x in d)
            if len(out) != len(self):
                raise QuiverError(f"dimension vector has {len(out)} entries, quiver has {len(self)} vertices")
        if not allow_negative and any(x < 0 for x in out):
            raise QuiverError(f"negative entry in dimension vector {out}")
        return out

    def nonzero_vec(self, d: DimLike) -> tuple[int, ...]:
        v = self.vec(d)
        if not any(v):
            raise ZeroDimensionError("dimension vector must be non-zero")
        return v

    def dim_json(self, d: DimLike) -> dict:
        return dict(zip(self.vertices, self.vec(d, allow_negative=True)))

    def unit(self, i: int) -> tuple[int, ...]:
        return tuple(int(k == i) for k in range(len(self)))

    def support(self, d: DimLike) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.vec(d)) if x)

    # -- subquivers and variants ----------------------------------------

    def full_subquiver(self, idx: Iterable[int]) -> "Quiver":
        keep = sorted(set(idx))
        names = [self.vertices[i] for i in keep]
        ks = set(keep)
        arrows = [(self.vertices[s], self.vertices[t]) for s, t in self.arrow_indices
                  if s in ks and t in ks]
        return Quiver(tuple(names), tuple(arrows))

    def reversed_arrow(self, k: int) -> "Quiver":
        arrows = list(self.arrows)
        s, t = arrows[k]
        arrows[k] = (t, s)
        return Quiver(self.vertices, tuple(arrows))

    def double(self) -> "Quiver":
        return Quiver(self.vertices, self.arrows + tuple((t, s) for s, t in self.arrows))


def dot(d: Sequence[int], e: Sequence[int]) -> int:
    """Plain coordinate product d . e."""
    return sum(a * b for a, b in zip(d, e))


def euler_form(Q: Quiver, d: DimLike, e: DimLike) -> int:
    d, e = Q.vec(d, allow_negative=True), Q.vec(e, allow_negative=True)
    return dot(d, e) - sum(d[s] * e[t] for s, t in Q.arrow_indices)


def sym_form(Q: Quiver, d: DimLike, e: DimLike) -> int:
    return euler_form(Q, d, e) + euler_form(Q, e, d)


def is_connected(n: int, edges: Iterable[tuple[int, int]], nodes: Iterable[int] | None = None) -> bool:
    """Undirected connectivity of ``nodes`` (default: all ``n``) using ``edges``."""
    nodes = list(range(n)) if nodes is None else list(nodes)
    if not nodes:
        return True
    allowed = set(nodes)
    adj: dict[int, list[int]] = {v: [] for v in nodes}
    for s, t in edges:
        if s in allowed and t in allowed:
            adj[s].append(t)
            adj[t].append(s)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(allowed)


def quiver_is_connected(Q: Quiver) -> bool:
    return is_connected(len(Q), Q.arrow_indices)
