"""Dimension formulas for moment-map fibers and exhaustive checks of the
jet-dimension inequalities that feed Mustata's criterion.

Everything is exact Python-int arithmetic.  Checkers return margins, not
just verdicts, since the size of the slack is the interesting quantity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .predicates import has_property_P
from .quiver import DimLike, Quiver, QuiverError, dot, euler_form
from .strata import (DEFAULT_TOP_CAP, SemisimpleType, TopType, compositions,
                     enumerate_top_types, tau_min, top_type_class_sums, z_sequence)


def dim_X(Q: Quiver, d: DimLike) -> int:
    """Expected dimension of mu^{-1}(0): d.d - 1 + 2(1 - <d,d>)."""
    d = Q.nonzero_vec(d)
    return dot(d, d) - 1 + 2 * (1 - euler_form(Q, d, d))


def dim_M(Q: Quiver, d: DimLike) -> int:
    """Dimension of the quotient mu^{-1}(0) // GL(d): 2(1 - <d,d>)."""
    d = Q.nonzero_vec(d)
    return 2 * (1 - euler_form(Q, d, d))


def dim_R(Q: Quiver, d: DimLike) -> int:
    """dim R(Q, d) = sum over arrows of d_s d_t."""
    d = Q.vec(d)
    return sum(d[s] * d[t] for s, t in Q.arrow_indices)


def dim_R_double(Q: Quiver, d: DimLike) -> int:
    return 2 * dim_R(Q, d)


def geometric_dims(Q: Quiver, d: DimLike) -> dict:
    """All three dimensions plus whether property (P) makes them meaningful."""
    d = Q.nonzero_vec(d)
    return {"dim_X": dim_X(Q, d), "dim_M": dim_M(Q, d), "dim_R_double": dim_R_double(Q, d),
            "property_P": has_property_P(Q, d)}


def cb_bound(Q: Quiver, class_dims: Sequence[DimLike], top: TopType, d: DimLike) -> int:
    """Upper bound on the dimension of the top-type locus in mu^{-1}(0)."""
    d = Q.nonzero_vec(d)
    dims = [Q.vec(v) for v in class_dims]
    if any(not (1 <= j <= len(dims)) or m < 1 for j, m in top):
        raise QuiverError(f"top type {top} does not fit {len(dims)} classes")
    sums = top_type_class_sums(top, len(dims))
    total = tuple(sum(c * v[k] for c, v in zip(sums, dims)) for k in range(len(Q)))
    if total != d:
        raise QuiverError(f"top type {top} sums to {total}, expected {d}")
    z = z_sequence(top, dims, Q)
    self_forms = [euler_form(Q, v, v) for v in dims]
    value = dot(d, d) - 1 + (1 - euler_form(Q, d, d))
    value += sum(m * zs for (_, m), zs in zip(top, z))
    value -= sum(m * m * (1 - self_forms[j - 1]) for j, m in top)
    return value


# -- single-vertex lemma ----------------------------------------------------

def loop_lemma_lhs(g: int, d: int, comp: Sequence[int]) -> int:
    """Left side of the g-loop inequality for the composition ``comp`` of d."""
    dd = (1 - g) * d * d
    consecutive = sum(comp[s] * comp[s - 1] for s in range(1, len(comp)))
    squares = sum(m * m for m in comp)
    return 2 * (1 - dd - g) - (d * d - 1 + 1 - dd + consecutive - g * squares)


@dataclass
class LoopLemmaReport:
    g: int
    d: int
    rows: list[tuple[tuple[int, ...], int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(margin >= 0 for _, _, margin in self.rows)

    @property
    def equality_set(self) -> list[tuple[int, ...]]:
        return [c for c, _, margin in self.rows if margin == 0]

    def to_json(self) -> dict:
        return {"g": self.g, "d": self.d, "ok": self.ok,
                "rows": [{"composition": list(c), "lhs": lhs, "margin": m} for c, lhs, m in self.rows],
                "equality_set": [list(c) for c in self.equality_set]}


def check_loop_lemma(g: int, d: int) -> LoopLemmaReport:
    """Evaluate the g-loop inequality (lhs >= d - 1) on every composition of d."""
    if g < 2 or d < 2:
        raise ValueError("need g >= 2 and d >= 2")
    rep = LoopLemmaReport(g, d)
    for comp in compositions(d):
        lhs = loop_lemma_lhs(g, d, comp)
        rep.rows.append((comp, lhs, lhs - (d - 1)))
    return rep


# -- totally negative lemma -------------------------------------------------

@dataclass
class BoundReport:
    quiver_hash: str
    d: tuple[int, ...]
    tau: SemisimpleType
    bounds: list[tuple[TopType, int]]
    threshold: int
    remainder_lhs: int
    remainder_rhs: int
    decomposition_exact: bool

    @property
    def max_bound(self) -> int:
        return max(b for _, b in self.bounds)

    @property
    def margin(self) -> int:
        return self.threshold - self.max_bound

    @property
    def verdict(self) -> bool:
        return self.margin > 0

    @property
    def remainder_ok(self) -> bool:
        return self.remainder_lhs >= self.remainder_rhs

    def to_json(self, Q: Quiver | None = None) -> dict:
        tau = self.tau.to_json(Q) if Q is not None else [[list(v), m] for v, m in self.tau.summands]
        return {
            "quiver_hash": self.quiver_hash,
            "d": list(self.d),
            "tau": tau,
            "top_types": [{"top": [list(s) for s in t], "bound": b} for t, b in self.bounds],
            "max_bound": self.max_bound,
            "threshold": self.threshold,
            "margin": self.margin,
            "verdict": self.verdict,
            "remainder": {"lhs": self.remainder_lhs, "rhs": self.remainder_rhs, "ok": self.remainder_ok},
            "decomposition_exact": self.decomposition_exact,
        }


def remainder_terms(Q: Quiver, d: Sequence[int]) -> tuple[int, int]:
    """(sum_{i<j} r_ij d_i d_j - 2(r-1),  2(r2-1)(r-1) + r1(r1-1)/2) on a sincere d."""
    r = len(d)
    cross = sum(Q.pair_counts[i][j] * d[i] * d[j] for i in range(r) for j in range(i + 1, r))
    r1 = sum(1 for x in d if x == 1)
    r2 = sum(1 for x in d if x >= 2)
    return cross - 2 * (r - 1), 2 * (r2 - 1) * (r - 1) + r1 * (r1 - 1) // 2


def check_totneg_lemma(Q: Quiver, d: DimLike, cap: int = DEFAULT_TOP_CAP) -> BoundReport:
    """Exhaustive max of the top-type bound over types compatible with tau_min,
    compared against 2(1 - <d,d> - total loops) on the support of d."""
    d = Q.nonzero_vec(d)
    if not has_property_P(Q, d):
        raise QuiverError("check_totneg_lemma needs a pair with property (P)")
    supp = [i for i, x in enumerate(d) if x]
    if all(d[i] == 1 for i in supp):
        raise QuiverError("check_totneg_lemma excludes d = 1 on its support")
    sub = Q.full_subquiver(supp)
    ds = tuple(d[i] for i in supp)
    tau = tau_min(sub, ds)
    class_dims = tau.dims
    loops = sub.loop_counts
    threshold = 2 * (1 - euler_form(sub, ds, ds) - sum(loops))
    rem_lhs, rem_rhs = remainder_terms(sub, ds)

    # classes follow the sorted type, so class j is the simple at vertex_of[j]
    vertex_of = {j + 1: v.index(1) for j, v in enumerate(class_dims)}
    bounds = []
    exact = True
    for top in enumerate_top_types(tau, cap=cap):
        b = cb_bound(sub, class_dims, top, ds)
        bounds.append((top, b))
        # threshold - bound splits into per-vertex loop-lemma pieces plus the remainder
        per_vertex = 0
        for k, (g, di) in enumerate(zip(loops, ds)):
            comp = [m for j, m in top if vertex_of[j] == k]
            per_vertex += loop_lemma_lhs(g, di, comp)
        exact &= threshold - b == per_vertex + rem_lhs
    return BoundReport(Q.canonical_hash, d, tau, bounds, threshold, rem_lhs, rem_rhs, exact)


# -- Mustata arithmetic -----------------------------------------------------

def mustata_ledger(Q: Quiver, d: DimLike, m_max: int) -> dict:
    """Check the jet-dimension bookkeeping for 1 <= m <= m_max.

    For m = 1: dim M + dim R(Q-bar) = 2 dim X.  For m >= 2 the induction
    adds dim X_{m-2} = (m-1) dim X and must stay <= (m+1) dim X.
    """
    d = Q.nonzero_vec(d)
    x, mm, r = dim_X(Q, d), dim_M(Q, d), dim_R_double(Q, d)
    rows = []
    for m in range(1, m_max + 1):
        lhs = mm + r + (m - 1) * x
        rows.append({"m": m, "lhs": lhs, "rhs": (m + 1) * x, "ok": lhs <= (m + 1) * x,
                     "equality": lhs == (m + 1) * x})
    return {"d": list(d), "dim_X": x, "dim_M": mm, "dim_R_double": r,
            "identity": mm + r == 2 * x, "property_P": has_property_P(Q, d), "rows": rows,
            "ok": mm + r == 2 * x and all(row["ok"] for row in rows)}
