"""The desk-scale acceptance catalog, shared by ``quiverjet suite`` and the test suite.

Each criterion returns a :class:`CriterionResult`; the time limit is part
of the verdict.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Callable

import numpy as np

from . import catalog
from .bounds import check_loop_lemma, check_totneg_lemma, dim_M, dim_R_double, dim_X
from .counting import (count_fiber_over_origin, count_moment_fiber,
                       count_multiplicative_fiber, normalized_sequence)
from .mukai import cross_check_gloop
from .predicates import has_property_P, is_totally_negative
from .quiver import Quiver, dot, sym_form
from .strata import (aux_quiver, enumerate_semisimple_types, enumerate_top_types, tau_min, types_leq,
                     z_sequence)


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    seconds: float
    limit: float | None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.ok and (self.limit is None or self.seconds < self.limit)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        return f"criterion {self.number:2d} {status}  {self.title}  [{self.seconds:.2f}s{lim}]"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed, "checks_ok": self.ok,
                "seconds": round(self.seconds, 3), "limit": self.limit, "detail": _jsonable(self.detail)}


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


# -- criteria ---------------------------------------------------------------------

def c1_dimension_identities() -> tuple[bool, dict]:
    rng = np.random.default_rng(1)
    pool = []
    for r in (1, 2, 3):
        for Q in catalog.small_quivers(r, 3, 2):
            if len(Q) != r or not is_totally_negative(Q)[0]:
                continue
            for d in catalog.dim_vectors(r, 3):
                pool.append((Q, d))
    picks = rng.choice(len(pool), size=len(pool), replace=False)
    chosen = []
    for k in picks:
        Q, d = pool[int(k)]
        if has_property_P(Q, d):
            chosen.append((Q, d))
        if len(chosen) == 50:
            break
    bad = []
    for Q, d in chosen:
        x, m, r2 = dim_X(Q, d), dim_M(Q, d), dim_R_double(Q, d)
        if m + r2 != 2 * x or x != r2 - (dot(d, d) - 1):
            bad.append([Q.canonical_hash[:12], list(d)])
    return len(chosen) == 50 and not bad, {"pairs": len(chosen), "failures": bad}


def _unit_quantifier(Q: Quiver) -> bool:
    n = len(Q)
    return all(sym_form(Q, Q.unit(i), Q.unit(j)) < 0 for i in range(n) for j in range(i, n))


def c2_total_negativity() -> tuple[bool, dict]:
    mismatches = []
    witness_bad = []
    checked = 0
    full_checked = 0
    for Q in catalog.small_quivers(3, 3, 3):
        checked += 1
        verdict, wit = is_totally_negative(Q)
        if verdict != _unit_quantifier(Q):
            mismatches.append(Q.to_json())
        if not verdict and sym_form(Q, wit[0], wit[1]) < 0:
            witness_bad.append(Q.to_json())
        # full quantifier over non-negative vectors with entries <= 4
        if len(Q) <= 3:
            C = np.array(Q.cartan_matrix, dtype=np.int64)
            vecs = np.array(list(catalog.dim_vectors(len(Q), 4)), dtype=np.int64)
            full = bool((vecs @ C @ vecs.T < 0).all())
            full_checked += 1
            if full != verdict:
                mismatches.append(Q.to_json())
    ok = not mismatches and not witness_bad
    return ok, {"quivers": checked, "full_quantifier_checked": full_checked,
                "mismatches": len(mismatches), "bad_witnesses": len(witness_bad)}


def c3_loop_lemma() -> tuple[bool, dict]:
    rows = []
    ok = True
    for g in (2, 3, 4):
        for d in range(2, 7):
            rep = check_loop_lemma(g, d)
            ones = tuple([1] * d)
            expected_eq = [ones] if g == 2 else []
            good = rep.ok and rep.equality_set == expected_eq
            ok &= good
            rows.append({"g": g, "d": d, "compositions": len(rep.rows),
                         "min_margin": min(m for _, _, m in rep.rows), "ok": good})
    return ok, {"cases": rows}


def c4_totneg_lemma() -> tuple[bool, dict]:
    rows = []
    ok = True
    for name, Q, d in catalog.property_p_pairs(3, exclude_ones=True):
        rep = check_totneg_lemma(Q, d)
        good = rep.verdict and rep.remainder_ok and rep.decomposition_exact
        ok &= good
        rows.append({"quiver": name, "d": list(d), "top_types": len(rep.bounds), "max_bound": rep.max_bound,
                     "threshold": rep.threshold, "margin": rep.margin, "ok": good})
    return ok and len(rows) >= 20, {"pairs": len(rows), "min_margin": min(r["margin"] for r in rows),
                                    "failures": [r for r in rows if not r["ok"]]}


def c5_a2_counts() -> tuple[bool, dict]:
    A2 = catalog.a2()
    rows = []
    ok = True
    for q in (2, 3):
        closed = [2 * q - 1, 3 * q**2 - 2 * q, 4 * q**3 - 3 * q**2]
        for n, want in zip((1, 2, 3), closed):
            k = count_moment_fiber(A2, (1, 1), q, n, "kernel").count
            b = count_moment_fiber(A2, (1, 1), q, n, "brute").count
            ok &= k == b == want
            rows.append({"q": q, "n": n, "kernel": k, "brute": b, "expected": want})
    return ok, {"rows": rows}


def c6_smooth_baseline() -> tuple[bool, dict]:
    S2 = catalog.loops(2)
    out = {}
    ok = True
    for q in (2, 3):
        seq = normalized_sequence(S2, (1,), q, 4)["sequence"]
        ok &= all(a == 1 for a in seq)
        out[q] = seq
    return ok, {"sequences": out}


@lru_cache(maxsize=None)
def _fiber(qname: str, d: tuple[int, ...], q: int, m: int) -> int:
    Q = catalog.named()[qname]
    return count_fiber_over_origin(Q, d, q, m)


def c7_method_agreement() -> tuple[bool, dict]:
    S2 = catalog.loops(2)
    k1 = count_moment_fiber(S2, (2,), 2, 1, "kernel").count
    b1 = count_moment_fiber(S2, (2,), 2, 1, "brute").count
    k2 = count_moment_fiber(S2, (2,), 2, 2, "kernel").count
    fiber3 = _fiber("S2", (2,), 2, 3)
    consistent = fiber3 == 2 ** dim_R_double(S2, (2,)) * k2
    return k1 == b1 and consistent, {"n1_kernel": k1, "n1_brute": b1, "brute_points": 2**16,
                                     "n2_kernel": k2, "fiber_m3": fiber3, "fiber_consistent": consistent}


def c8_jet_fiber_lemma() -> tuple[bool, dict]:
    rows = []
    ok = True
    for qname, d in (("A2", (1, 1)), ("S2", (1,)), ("S2", (2,))):
        Q = catalog.named()[qname]
        for m in (1, 2, 3):
            fib = _fiber(qname, d, 2, m)
            factor = 2 ** dim_R_double(Q, d)
            expected = factor if m == 1 else factor * count_moment_fiber(Q, d, 2, m - 1).count
            ok &= fib == expected
            rows.append({"quiver": qname, "d": list(d), "m": m, "fiber": fib, "expected": expected})
    return ok, {"q": 2, "rows": rows}


def _difference_ratio(seq: list[Fraction]) -> tuple[list[Fraction], Fraction | None]:
    diffs = [b - a for a, b in zip(seq, seq[1:])]
    ratio = diffs[-1] / diffs[-2] if len(diffs) >= 2 and diffs[-2] != 0 else None
    return diffs, ratio


def c9_convergence_signatures() -> tuple[bool, dict]:
    a2 = normalized_sequence(catalog.a2(), (1, 1), 2, 3)["sequence"]
    tri = normalized_sequence(catalog.triangle(), (1, 1, 1), 2, 3)["sequence"]
    increasing = all(b > a for a, b in zip(a2, a2[1:]))
    a2_diffs, a2_ratio = _difference_ratio(a2)
    tri_diffs, tri_ratio = _difference_ratio(tri)
    # bounded signature: increments shrink geometrically, so the tail sum is finite
    bounded = tri_ratio is not None and 0 <= tri_ratio < 1
    extrapolated = tri[-1] + tri_diffs[-1] * tri_ratio / (1 - tri_ratio) if bounded else None
    return increasing and bounded, {
        "A2": {"sequence": a2, "differences": a2_diffs, "difference_ratio": a2_ratio,
               "strictly_increasing": increasing},
        "triangle": {"sequence": tri, "differences": tri_diffs, "difference_ratio": tri_ratio,
                     "geometric_tail_bound": extrapolated, "bounded_signature": bounded},
        "certified": False}


def _partitions(k: int, largest: int | None = None):
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def c10_gloop_crosscheck() -> tuple[bool, dict]:
    cases = 0
    bad = []
    for g in (2, 3):
        for k in range(1, 5):
            for m in _partitions(k):
                for e in ([1] * len(m), [i + 1 for i in range(len(m))]):
                    rep = cross_check_gloop(g, list(m), e)
                    cases += 1
                    if not rep["ok"]:
                        bad.append(rep)
    return not bad, {"cases": cases, "failures": bad}


def _jordan_oracle(q: int, alpha: int) -> int:
    """Scalar pairs (x, y) with 1 + xy a unit and (1+xy)(1+yx)^{-1} = alpha."""
    count = 0
    for x in range(q):
        for y in range(q):
            u = (1 + x * y) % q
            if u and (u * pow(u, q - 2, q)) % q == alpha % q:
                count += 1
    return count


def c11_multiplicative() -> tuple[bool, dict]:
    J = catalog.jordan()
    rows = []
    ok = True
    for q in (2, 3, 5):
        for alpha in range(1, q):
            got = count_multiplicative_fiber(J, (1,), q, alpha, 1)
            want = q * q - q + 1 if alpha == 1 else 0
            oracle = _jordan_oracle(q, alpha)
            ok &= got == want == oracle
            rows.append({"q": q, "alpha": alpha, "count": got, "closed_form": want, "oracle": oracle})
    return ok, {"rows": rows}


def c12_stratification() -> tuple[bool, dict]:
    S2 = catalog.loops(2)
    ok = True
    info = []
    for dd in range(1, 5):
        types = enumerate_semisimple_types(S2, (dd,))
        leq = {(a, b): types_leq(a, b) for a in types for b in types}
        refl = all(leq[a, a] for a in types)
        anti = all(not (leq[a, b] and leq[b, a]) or a == b for a in types for b in types)
        trans = all(not (leq[a, b] and leq[b, c]) or leq[a, c] for a in types for b in types for c in types)
        tmin = tau_min(S2, (dd,))
        least = tmin in types and all(leq[tmin, t] for t in types)
        sq = {t: sum(m * m for m in t.mults) for t in types}
        mono = all(not leq[a, b] or sq[a] >= sq[b] for a in types for b in types)
        good = refl and anti and trans and least and mono
        ok &= good
        info.append({"d": dd, "types": len(types), "reflexive": refl, "antisymmetric": anti,
                     "transitive": trans, "tau_min_least": least, "sum_e2_monotone": mono})
    preserved = 0
    failures = []
    for name, Q, d in catalog.property_p_pairs(2):
        for tau in enumerate_semisimple_types(Q, d):
            aux, e = aux_quiver(Q, tau)
            if has_property_P(aux, e):
                preserved += 1
            else:
                failures.append({"quiver": name, "d": list(d), "tau": tau.to_json(Q)})
    ok &= not failures
    return ok, {"S2": info, "aux_pairs_checked": preserved + len(failures), "aux_failures": failures}


def c13_interleaving() -> tuple[bool, dict]:
    cases = [
        (catalog.loops(2), [(1,), (2,)], (2, 1)),
        (catalog.loops(2), [(1,), (2,)], (3, 1)),
        (catalog.loops(3), [(1,), (1,), (2,)], (2, 1, 1)),
        (catalog.named()["TN2-single"], [(0, 1), (1, 0), (1, 1)], (2, 2, 1)),
        (catalog.a2(), [(0, 1), (1, 0)], (2, 2)),
    ]
    checked = 0
    bad = 0
    for Q, dims, mults in cases:
        for top in enumerate_top_types(list(mults)):
            if len(top) > 6:
                continue
            base = sum(m * z for (_, m), z in zip(top, z_sequence(top, dims, Q)))
            per_class = {j: [m for jj, m in top if jj == j] for j in range(1, len(dims) + 1)}
            for perm in set(permutations(top)):
                if {j: [m for jj, m in perm if jj == j] for j in per_class} != per_class:
                    continue
                checked += 1
                val = sum(m * z for (_, m), z in zip(perm, z_sequence(perm, dims, Q)))
                bad += val != base
    return bad == 0 and checked > 0, {"interleavings_checked": checked, "violations": bad}


CRITERIA: list[tuple[int, str, float | None, Callable[[], tuple[bool, dict]]]] = [
    (1, "dimension identities on 50 property-(P) pairs", 1.0, c1_dimension_identities),
    (2, "total negativity: structural test vs unit-vector quantifier", 10.0, c2_total_negativity),
    (3, "loop lemma margins and equality set", 5.0, c3_loop_lemma),
    (4, "total-negativity lemma on the catalog", 60.0, c4_totneg_lemma),
    (5, "A2 point counts by both methods", 10.0, c5_a2_counts),
    (6, "S2 d=(1) normalized sequence is constant 1", 5.0, c6_smooth_baseline),
    (7, "S2 d=(2) method agreement and n=2 fiber consistency", 300.0, c7_method_agreement),
    (8, "jet-fiber lemma for m=1,2,3", None, c8_jet_fiber_lemma),
    (9, "convergence signatures: A2 diverges, triangle bounded", None, c9_convergence_signatures),
    (10, "g-loop Ext-quiver cross-check", 1.0, c10_gloop_crosscheck),
    (11, "multiplicative counts on the Jordan quiver", 5.0, c11_multiplicative),
    (12, "stratification order sanity", 10.0, c12_stratification),
    (13, "interleaving invariance of sum m_s z_s", 5.0, c13_interleaving),
]


def run_criterion(number: int) -> CriterionResult:
    for num, title, limit, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            ok, detail = fn()
            return CriterionResult(num, title, bool(ok), time.perf_counter() - t0, limit, detail)
    raise KeyError(f"no criterion {number}")


def run_suite(numbers=None, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    out = []
    for num, *_ in CRITERIA:
        if numbers is not None and num not in numbers:
            continue
        res = run_criterion(num)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
