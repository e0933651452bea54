"""Mukai vectors on a K3 lattice and the Ext-quivers they generate."""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Mapping, Optional, Sequence

import numpy as np

from .predicates import is_totally_negative
from .quiver import Quiver, QuiverError, sym_form
from .strata import SemisimpleType, aux_quiver


class MukaiError(ValueError):
    pass


@dataclass(frozen=True)
class NSLattice:
    """Free Z-module with a symmetric integer Gram matrix (the c-component pairing)."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        if any(len(row) != len(g) for row in g):
            raise MukaiError("gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(len(g))):
            raise MukaiError("gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, c1: Sequence[int], c2: Sequence[int]) -> int:
        return sum(c1[i] * self.gram[i][j] * c2[j] for i in range(self.rank) for j in range(self.rank))


@dataclass(frozen=True)
class MukaiVector:
    r: int
    c: tuple[int, ...]
    a: int

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))

    def scale(self, m: int) -> "MukaiVector":
        return MukaiVector(m * self.r, tuple(m * x for x in self.c), m * self.a)

    def __str__(self) -> str:
        return f"({self.r},({','.join(map(str, self.c))}),{self.a})"


def _check_rank(v: MukaiVector, L: NSLattice) -> None:
    if len(v.c) != L.rank:
        raise MukaiError(f"vector {v} has c of length {len(v.c)}, lattice rank is {L.rank}")


def mukai_pairing(v1: MukaiVector, v2: MukaiVector, L: NSLattice) -> int:
    _check_rank(v1, L)
    _check_rank(v2, L)
    return L.pair(v1.c, v2.c) - v1.r * v2.a - v2.r * v1.a


def is_primitive(v: MukaiVector) -> bool:
    g = 0
    for x in (v.r, *v.c, v.a):
        g = gcd(g, x)
    return g == 1


def is_positive(v: MukaiVector, L: NSLattice, c_effective: bool = False) -> bool:
    """Primitive, v.v >= -2, and one of the rank cases.

    Effectivity of c is not lattice data, so the caller states it through
    ``c_effective``; it is only consulted for rank-zero vectors with c != 0.
    """
    if not is_primitive(v) or mukai_pairing(v, v, L) < -2:
        return False
    if v.r > 0:
        return True
    if v.r < 0:
        return False
    if any(v.c):
        return c_effective and v.a != 0
    return v.a > 0


@dataclass
class ExtQuiver:
    double: Quiver
    underlying: Quiver
    pairings: list[list[int]]
    totally_negative: bool

    def to_json(self) -> dict:
        return {"double": self.double.to_json(), "underlying": self.underlying.to_json(),
                "pairings": self.pairings, "totally_negative": self.totally_negative}


def ext_quiver_from_mukai(vectors: Sequence[MukaiVector], L: NSLattice) -> ExtQuiver:
    """Double quiver with 2 + v_i.v_i loops and v_i.v_j arrows each way, plus
    its underlying quiver (half the loops, one direction i < j)."""
    if not vectors:
        raise MukaiError("need at least one Mukai vector")
    r = len(vectors)
    P = [[mukai_pairing(vi, vj, L) for vj in vectors] for vi in vectors]
    loops2 = []
    for i in range(r):
        g2 = 2 + P[i][i]
        if g2 < 0:
            raise MukaiError(f"vector {i + 1} has v.v = {P[i][i]} < -2, negative loop count")
        if g2 % 2:
            raise MukaiError(f"vector {i + 1} gives {g2} loops; Ext^1 of a 2CY object must be even-dimensional")
        loops2.append(g2)
    for i in range(r):
        for j in range(i + 1, r):
            if P[i][j] < 0:
                raise MukaiError(f"v_{i + 1}.v_{j + 1} = {P[i][j]} < 0 is not an arrow count")
    names = [str(i + 1) for i in range(r)]
    darrows = []
    for i in range(r):
        darrows += [(names[i], names[i])] * loops2[i]
        for j in range(r):
            if i != j:
                darrows += [(names[i], names[j])] * P[i][j]
    double = Quiver(tuple(names), tuple(darrows))
    underlying = Quiver.from_counts([g // 2 for g in loops2],
                                    {(i, j): P[i][j] for i in range(r) for j in range(i + 1, r) if P[i][j]})
    verdict = all(P[i][j] > 0 for i in range(r) for j in range(r))
    return ExtQuiver(double, underlying, P, verdict)


def _count_matrix(Q: Quiver) -> list[list[int]]:
    n = len(Q)
    return [[Q.loop_counts[i] if i == j else Q.pair_counts[i][j] for j in range(n)] for i in range(n)]


def gloop_base(g: int) -> tuple[MukaiVector, NSLattice]:
    """A vector v0 with v0.v0 = 2g - 2 on a rank-one lattice."""
    if g < 2:
        raise MukaiError("g must be >= 2")
    return MukaiVector(0, (1,), 1), NSLattice(((2 * g - 2,),))


def cross_check_gloop(g: int, m: Sequence[int], e: Sequence[int]) -> dict:
    """Compare the Ext-quiver of (m_i v0) with the g-loop auxiliary quiver of
    the semisimple type {(m_i, e_i)} as arrow-count matrices."""
    if len(m) != len(e) or not m or min(m) < 1 or min(e) < 1:
        raise MukaiError("m and e must be equal-length lists of positive integers")
    S = Quiver.loop_quiver(g)
    tau = SemisimpleType(tuple(((mi,), ei) for mi, ei in zip(m, e)))
    aux, mults = aux_quiver(S, tau)
    # aux_quiver orders classes as the sorted type; follow the same order
    v0, L = gloop_base(g)
    ext = ext_quiver_from_mukai([v0.scale(dim[0]) for dim in tau.dims], L)
    lhs, rhs = _count_matrix(ext.underlying), _count_matrix(aux)
    expected = [[1 + mi * mi * (g - 1) if i == j else 2 * mi * mj * (g - 1)
                 for j, (mj,) in enumerate(tau.dims)] for i, (mi,) in enumerate(tau.dims)]
    return {"g": g, "m": [d[0] for d in tau.dims], "e": list(mults), "ext": lhs, "aux": rhs,
            "formula": expected, "ok": lhs == rhs == expected}


def sym_form_identity_check(vectors: Sequence[MukaiVector], L: NSLattice, trials: int = 100,
                            rng: Optional[np.random.Generator] = None, max_entry: int = 5) -> bool:
    """(d, e) on the underlying Ext-quiver equals -(sum d_i v_i).(sum e_i v_i)."""
    rng = rng if rng is not None else np.random.default_rng(0)
    Q = ext_quiver_from_mukai(vectors, L).underlying
    r = len(vectors)

    def combo(coef):
        return MukaiVector(sum(int(c) * v.r for c, v in zip(coef, vectors)),
                           tuple(sum(int(c) * v.c[k] for c, v in zip(coef, vectors)) for k in range(L.rank)),
                           sum(int(c) * v.a for c, v in zip(coef, vectors)))

    for t in range(trials):
        if t == 0:
            d = e = [0] * r
        else:
            d = rng.integers(0, max_entry + 1, r).tolist()
            e = rng.integers(0, max_entry + 1, r).tolist()
        if sym_form(Q, tuple(d), tuple(e)) != -mukai_pairing(combo(d), combo(e), L):
            return False
    return True


DESCRIPTOR_KINDS = ("preprojective", "multiplicative", "k3")


def total_negativity_euler_check(obj) -> bool:
    """(e_i, e_j) < 0 for all pairs of unit vectors of the backing quiver.

    Accepts a Quiver, an ExtQuiver, or a descriptor mapping with ``kind`` in
    preprojective / multiplicative (key ``quiver``) or k3 (keys ``vectors``
    and ``lattice``).
    """
    if isinstance(obj, Quiver):
        Q = obj
    elif isinstance(obj, ExtQuiver):
        Q = obj.underlying
    elif isinstance(obj, Mapping):
        kind = obj.get("kind")
        if kind in ("preprojective", "multiplicative"):
            Q = obj["quiver"]
        elif kind == "k3":
            Q = ext_quiver_from_mukai(obj["vectors"], obj["lattice"]).underlying
        else:
            raise MukaiError(f"unsupported category descriptor {kind!r}; expected one of {DESCRIPTOR_KINDS}")
    else:
        raise MukaiError(f"unsupported category descriptor of type {type(obj).__name__}")
    n = len(Q)
    return all(sym_form(Q, Q.unit(i), Q.unit(j)) < 0 for i in range(n) for j in range(i, n))


_VEC_RE = re.compile(r"^\(\s*(-?\d+)\s*,\s*\(([^()]*)\)\s*,\s*(-?\d+)\s*\)$")


def parse_vectors(text: str) -> list[MukaiVector]:
    """Parse ``(r,(c1,c2,..),a);(r,(..),a)``."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        m = _VEC_RE.match(chunk)
        if not m:
            raise MukaiError(f"cannot parse Mukai vector {chunk!r}; expected (r,(c1,...),a)")
        cs = [x.strip() for x in m.group(2).split(",") if x.strip()]
        out.append(MukaiVector(int(m.group(1)), tuple(int(x) for x in cs), int(m.group(3))))
    if not out:
        raise MukaiError("no Mukai vectors given")
    return out


def gloop_consistent(ext: ExtQuiver) -> bool:
    """Verdict agrees with the structural total-negativity test."""
    return ext.totally_negative == is_totally_negative(ext.underlying)[0]


__all__ = ["NSLattice", "MukaiVector", "MukaiError", "ExtQuiver", "mukai_pairing", "is_primitive",
           "is_positive", "ext_quiver_from_mukai", "cross_check_gloop", "sym_form_identity_check",
           "total_negativity_euler_check", "parse_vectors", "gloop_base", "gloop_consistent",
           "QuiverError"]
