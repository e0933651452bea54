"""Semisimple types, top-types, the stratification order and auxiliary quivers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .predicates import simple_module_exists
from .quiver import DimLike, Quiver, QuiverError, euler_form, sym_form

DEFAULT_TYPE_CAP = 10**5
DEFAULT_TOP_CAP = 10**6


class CapExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured cap."""


@dataclass(frozen=True, order=True)
class SemisimpleType:
    """Multiset of (dimension vector, multiplicity) pairs, stored sorted."""

    summands: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        cleaned = []
        for dim, mult in self.summands:
            dim = tuple(int(x) for x in dim)
            if int(mult) < 1 or not any(dim) or any(x < 0 for x in dim):
                raise QuiverError(f"invalid summand ({dim}, {mult})")
            cleaned.append((dim, int(mult)))
        object.__setattr__(self, "summands", tuple(sorted(cleaned)))

    @property
    def dims(self) -> list[tuple[int, ...]]:
        return [dim for dim, _ in self.summands]

    @property
    def mults(self) -> list[int]:
        return [m for _, m in self.summands]

    def __len__(self) -> int:
        return len(self.summands)

    def total(self) -> tuple[int, ...]:
        n = len(self.summands[0][0])
        return tuple(sum(m * dim[k] for dim, m in self.summands) for k in range(n))

    def to_json(self, Q: Quiver) -> list[dict]:
        return [{"dim": Q.dim_json(dim), "mult": m} for dim, m in self.summands]

    @classmethod
    def from_json(cls, Q: Quiver, obj: Sequence[Mapping]) -> "SemisimpleType":
        try:
            return cls(tuple((Q.vec(s["dim"]), int(s["mult"])) for s in obj))
        except (KeyError, TypeError) as exc:
            raise QuiverError(f'type JSON must be [{{"dim": {{...}}, "mult": k}}, ...]: {exc}') from exc


TopType = tuple[tuple[int, int], ...]


def tau_min(Q: Quiver, d: DimLike) -> SemisimpleType:
    """Type of the zero representation: vertex simples with multiplicity d_i."""
    d = Q.nonzero_vec(d)
    return SemisimpleType(tuple((Q.unit(i), x) for i, x in enumerate(d) if x))


def _vectors_below(d: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if not d:
        yield ()
        return
    for head in range(d[0] + 1):
        for tail in _vectors_below(d[1:]):
            yield (head,) + tail


def admitted_dims(Q: Quiver, d: DimLike, policy: str = "strict") -> list[tuple[int, ...]]:
    if policy not in ("strict", "permissive"):
        raise ValueError(f"unknown policy {policy!r}")
    d = Q.nonzero_vec(d)
    out = []
    for v in _vectors_below(d):
        if not any(v):
            continue
        verdict = simple_module_exists(Q, v)
        if verdict or (policy == "permissive" and verdict is None):
            out.append(v)
    return out


def enumerate_semisimple_types(Q: Quiver, d: DimLike, policy: str = "strict",
                               cap: int = DEFAULT_TYPE_CAP) -> list[SemisimpleType]:
    d = Q.nonzero_vec(d)
    atoms = []
    for v in admitted_dims(Q, d, policy):
        e = 1
        while all(e * x <= y for x, y in zip(v, d)):
            atoms.append((v, e))
            e += 1
    atoms.sort()
    # a rigid dimension (<v,v> = 1) carries a single simple up to isomorphism
    rigid = {v for v, _ in atoms if euler_form(Q, v, v) == 1}

    out: list[SemisimpleType] = []
    chosen: list[tuple[tuple[int, ...], int]] = []

    def rec(start: int, rest: tuple[int, ...]):
        if not any(rest):
            if len(out) >= cap:
                raise CapExceeded(f"more than {cap} semisimple types")
            out.append(SemisimpleType(tuple(chosen)))
            return
        for k in range(start, len(atoms)):
            v, e = atoms[k]
            nxt = tuple(r - e * x for r, x in zip(rest, v))
            if min(nxt) < 0:
                continue
            if v in rigid and any(w == v for w, _ in chosen):
                continue
            chosen.append((v, e))
            rec(k, nxt)
            chosen.pop()

    rec(0, d)
    return sorted(set(out))


def aux_quiver(Q: Quiver, tau: SemisimpleType) -> tuple[Quiver, tuple[int, ...]]:
    """Auxiliary quiver Q_tau with its dimension vector e.

    Vertex i carries 1 - <d_i, d_i> loops; vertices i < j are joined by
    -(d_i, d_j) arrows oriented i -> j.
    """
    dims = tau.dims
    r = len(dims)
    loops = []
    for v in dims:
        g = 1 - euler_form(Q, v, v)
        if g < 0:
            raise QuiverError(f"negative loop count {g} for summand {v}")
        loops.append(g)
    between = {}
    for i in range(r):
        for j in range(i + 1, r):
            c = -sym_form(Q, dims[i], dims[j])
            if c < 0:
                raise QuiverError(f"negative arrow count {c} between summands {i + 1} and {j + 1}")
            if c:
                between[(i, j)] = c
    return Quiver.from_counts(loops, between), tuple(tau.mults)


def _decompositions(target: tuple[int, ...], parts: list[tuple[int, ...]], budget: list[int],
                    weight: int, j: int = 0) -> Iterator[list[int]]:
    """Non-negative c with sum_j c_j parts_j == target and c_j * weight <= budget_j."""
    if j == len(parts):
        if not any(target):
            yield []
        return
    p = parts[j]
    top = budget[j] // weight
    for x, y in zip(p, target):
        if x:
            top = min(top, y // x)
    for c in range(top, -1, -1):
        rest = tuple(y - c * x for x, y in zip(p, target))
        for tail in _decompositions(rest, parts, budget, weight, j + 1):
            yield [c] + tail


def types_leq(lower: SemisimpleType, upper: SemisimpleType) -> bool:
    """Refinement order: every simple of ``upper`` splits into simples of ``lower``.

    Decides existence of c_ij >= 0 with d_i = sum_j c_ij d'_j and
    e'_j = sum_i c_ij e_i, where (d_i, e_i) run over ``upper`` and
    (d'_j, e'_j) over ``lower``.
    """
    if lower.total() != upper.total():
        raise QuiverError("types refine different dimension vectors")
    parts = lower.dims
    budget = list(lower.mults)

    def rec(i: int) -> bool:
        if i == len(upper):
            return not any(budget)
        dim, e = upper.summands[i]
        for c in _decompositions(dim, parts, budget, e):
            for j, cj in enumerate(c):
                budget[j] -= cj * e
            if rec(i + 1):
                return True
            for j, cj in enumerate(c):
                budget[j] += cj * e
        return False

    return rec(0)


def compositions(total: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


def enumerate_top_types(tau: SemisimpleType | Sequence[int],
                        cap: int = DEFAULT_TOP_CAP) -> list[TopType]:
    """All sequences ((j_s, m_s)) whose per-class multiplicities sum to e_j.

    Classes are numbered from 1.  Consecutive steps in the same class are
    allowed.
    """
    mults = list(tau.mults if isinstance(tau, SemisimpleType) else tau)
    out: list[TopType] = []
    seq: list[tuple[int, int]] = []

    def rec():
        if not any(mults):
            if len(out) >= cap:
                raise CapExceeded(f"more than {cap} top types")
            out.append(tuple(seq))
            return
        for j, left in enumerate(mults):
            for m in range(1, left + 1):
                mults[j] -= m
                seq.append((j + 1, m))
                rec()
                seq.pop()
                mults[j] += m

    rec()
    return out


def z_sequence(top: TopType, class_dims: Sequence[DimLike], Q: Quiver) -> list[int]:
    self_forms = [euler_form(Q, v, v) for v in class_dims]
    last: dict[int, int] = {}
    z = []
    for j, m in top:
        if self_forms[j - 1] == 1 or j not in last:
            z.append(0)
        else:
            z.append(last[j])
        last[j] = m
    return z


def top_type_class_sums(top: TopType, r: int) -> list[int]:
    sums = [0] * r
    for j, m in top:
        sums[j - 1] += m
    return sums
