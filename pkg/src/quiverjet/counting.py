"""Exact point counts of the moment-map fiber over R_{q,n} = F_q[t]/(t^n).

Ring convention: every interface takes the ring length ``n``, except the
jet-fiber and singular-jet helpers which take the jet order ``m`` and work
over R_{q,m+1}.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from . import kernels
from ._accel import backend, set_threads
from .bounds import dim_R, dim_R_double, dim_X
from .cache import CountCache
from .quiver import DimLike, Quiver, QuiverError
from .ring import BudgetExceeded, check_ring, inverse_table

DEFAULT_BUDGET = 2**25
DEFAULT_CHUNKS = 64
METHODS = ("kernel", "brute")
METHOD_LABELS = {"kernel": "bilinear-kernel", "brute": "brute-force"}


class MomentSystem:
    """The moment map as a list of bilinear monomials.

    Coordinates: x_a is a d_t x d_s matrix stored row-major at x_off[a],
    y_a a d_s x d_t matrix at y_off[a].  Equation (i, p, r) is entry (p, r)
    of mu_i and lives at eq_off[i] + p * d_i + r.  Each monomial is
    (equation, sign, x coordinate, y coordinate).
    """

    def __init__(self, Q: Quiver, d: DimLike):
        self.Q = Q
        self.d = Q.vec(d)
        d = self.d
        self.x_off, self.y_off = [], []
        off = 0
        for s, t in Q.arrow_indices:
            self.x_off.append(off)
            self.y_off.append(off)
            off += d[s] * d[t]
        self.n_x = self.n_y = off
        self.eq_off = []
        e = 0
        for di in d:
            self.eq_off.append(e)
            e += di * di
        self.n_eq = e

        eqs, signs, xs, ys = [], [], [], []
        for a, (s, t) in enumerate(Q.arrow_indices):
            ds, dt = d[s], d[t]
            xo, yo = self.x_off[a], self.y_off[a]
            # + (x_a y_a)[p, r] at the target
            for p in range(dt):
                for r in range(dt):
                    for c in range(ds):
                        eqs.append(self.eq_off[t] + p * dt + r)
                        signs.append(1)
                        xs.append(xo + p * ds + c)
                        ys.append(yo + c * dt + r)
            # - (y_a x_a)[p, r] at the source
            for p in range(ds):
                for r in range(ds):
                    for c in range(dt):
                        eqs.append(self.eq_off[s] + p * ds + r)
                        signs.append(-1)
                        xs.append(xo + c * ds + r)
                        ys.append(yo + p * dt + c)
        self.t_eq = np.array(eqs, dtype=np.int64)
        self.t_sign = np.array(signs, dtype=np.int64)
        self.t_x = np.array(xs, dtype=np.int64)
        self.t_y = np.array(ys, dtype=np.int64)
        if not self.trace_vanishes():
            raise AssertionError("trace relation failed for the moment system")

    def trace_vanishes(self) -> bool:
        """Sum of traces of all mu_i is the zero polynomial."""
        diag = set()
        for i, di in enumerate(self.d):
            diag.update(self.eq_off[i] + p * di + p for p in range(di))
        acc: dict[tuple[int, int], int] = {}
        for e, s, x, y in zip(self.t_eq, self.t_sign, self.t_x, self.t_y):
            if int(e) in diag:
                key = (int(x), int(y))
                acc[key] = acc.get(key, 0) + int(s)
        return all(v == 0 for v in acc.values())

    def contributions(self) -> dict[str, list[tuple[int, str, str]]]:
        """Per vertex: (sign, arrow label, side) with side 'xy' or 'yx'."""
        out: dict[str, list] = {v: [] for v in self.Q.vertices}
        for a, (s, t) in enumerate(self.Q.arrow_indices):
            label = f"{a}:{self.Q.vertices[s]}->{self.Q.vertices[t]}"
            out[self.Q.vertices[t]].append((1, label, "xy"))
            out[self.Q.vertices[s]].append((-1, label, "yx"))
        return out

    def evaluate(self, x: np.ndarray, y: np.ndarray, q: int, n: int) -> np.ndarray:
        x = np.ascontiguousarray(np.asarray(x, dtype=np.int64).reshape(self.n_x, n) % q)
        y = np.ascontiguousarray(np.asarray(y, dtype=np.int64).reshape(self.n_y, n) % q)
        out = np.zeros((self.n_eq, n), dtype=np.int64)
        kernels.eval_moment(x, y, self.t_eq, self.t_x, self.t_y, self.t_sign, out, q, n)
        return out

    def arrow_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        src = np.array([s for s, _ in self.Q.arrow_indices], dtype=np.int64)
        tgt = np.array([t for _, t in self.Q.arrow_indices], dtype=np.int64)
        return (src, tgt, np.array(self.d, dtype=np.int64),
                np.array(self.x_off, dtype=np.int64), np.array(self.y_off, dtype=np.int64))


@dataclass
class CountRecord:
    quiver_hash: str
    d: tuple[int, ...]
    q: int
    n: int
    count: int
    normalized: Fraction
    method: str
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"quiver_hash": self.quiver_hash, "d": list(self.d), "q": self.q, "n": self.n,
               "count": self.count,
               "normalized": {"num": self.normalized.numerator, "den": self.normalized.denominator},
               "method": METHOD_LABELS.get(self.method, self.method),
               "wall_time": round(self.wall_time, 6)}
        out.update(self.extra)
        return out


def _check_budget(points: int, budget: int, what: str) -> None:
    if points > budget:
        raise BudgetExceeded(f"{what}: {points} enumeration points exceed budget {budget}")


def kernel_histogram(system: MomentSystem, q: int, n: int, start: int = 0, stop: Optional[int] = None,
                     chunks: int = DEFAULT_CHUNKS, x_shift: int = 0, mat_shift: int = 0) -> np.ndarray:
    """Histogram over x-indices [start, stop) of the y-kernel exponent."""
    digits = (n - x_shift) * system.n_x
    total = q**digits
    stop = total if stop is None else stop
    if not 0 <= start <= stop <= total:
        raise ValueError(f"range [{start}, {stop}) outside [0, {total})")
    chunks = max(1, min(chunks, stop - start)) if stop > start else 1
    return kernels.moment_kernel_hist(system.t_eq, system.t_y, system.t_x, system.t_sign,
                                      system.n_x, system.n_y, system.n_eq, q, n, x_shift, mat_shift,
                                      start, stop, chunks, inverse_table(q))


def hist_total(hist: Sequence[int], q: int, offset: int = 0) -> int:
    """sum_k hist[k] q^(k - offset) in exact integers."""
    total = 0
    for k, c in enumerate(hist):
        c = int(c)
        if c:
            if k < offset:
                raise AssertionError(f"exponent {k} below offset {offset}")
            total += c * q ** (k - offset)
    return total


def _count_kernel(system: MomentSystem, q: int, n: int, budget: int, chunks: int) -> int:
    _check_budget(q ** (n * system.n_x), budget, "kernel method")
    return hist_total(kernel_histogram(system, q, n, chunks=chunks), q)


def _count_brute(system: MomentSystem, q: int, n: int, budget: int) -> int:
    total = q ** (2 * n * system.n_x)
    _check_budget(total, budget, "brute-force method")
    src, tgt, dims, xo, yo = system.arrow_arrays()
    return int(kernels.brute_moment_count(src, tgt, dims, xo, yo, system.n_x, q, n, 0, 0, total))


def _normalized(Q: Quiver, d: tuple[int, ...], q: int, n: int, count: int) -> Fraction:
    return Fraction(count, q ** (n * dim_X(Q, d)))


def count_moment_fiber(Q: Quiver, d: DimLike, q: int, n: int, method: str = "kernel", *,
                       threads: Optional[int] = None, cache: Optional[CountCache] = None,
                       budget: int = DEFAULT_BUDGET, chunks: int = DEFAULT_CHUNKS) -> CountRecord:
    """#mu^{-1}(0)(R_{q,n})."""
    check_ring(q, n)
    d = Q.nonzero_vec(d)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    key = (Q.canonical_hash, d, q, n, method)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return CountRecord(Q.canonical_hash, d, q, n, hit, _normalized(Q, d, q, n, hit), method,
                               0.0, {"cached": True})
    set_threads(threads)
    t0 = time.perf_counter()
    system = MomentSystem(Q, d)
    if method == "kernel":
        count = _count_kernel(system, q, n, budget, chunks)
    else:
        count = _count_brute(system, q, n, budget)
    wall = time.perf_counter() - t0
    if cache is not None:
        cache.put(key, count)
    return CountRecord(Q.canonical_hash, d, q, n, count, _normalized(Q, d, q, n, count), method, wall,
                       {"backend": backend()})


def normalized_sequence(Q: Quiver, d: DimLike, q: int, n_max: int, method: str = "kernel",
                        **kw) -> dict:
    """a_n = count(n) / q^(n dim_X) for n = 1..n_max, with first differences."""
    d = Q.nonzero_vec(d)
    records = [count_moment_fiber(Q, d, q, n, method, **kw) for n in range(1, n_max + 1)]
    seq = [r.normalized for r in records]
    diffs = [b - a for a, b in zip(seq, seq[1:])]
    return {"quiver_hash": Q.canonical_hash, "d": list(d), "q": q, "dim_X": dim_X(Q, d),
            "records": records, "sequence": seq, "differences": diffs}


# -- fibers over the origin ---------------------------------------------------

def count_fiber_over_origin(Q: Quiver, d: DimLike, q: int, m: int, *, budget: int = DEFAULT_BUDGET,
                            chunks: int = DEFAULT_CHUNKS) -> int:
    """Points of mu^{-1}(0)(R_{q,m+1}) that reduce to 0 mod t.

    Writing x = t x', y = t y' with x' over R_{m+1} (top coefficient
    dropped) and y' over R_{m+1} (each y hit q^{n_y} times), the count is
    sum over x' of q^(k - n_y) where k is the kernel exponent of t L(x).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    n = m + 1
    check_ring(q, n)
    d = Q.nonzero_vec(d)
    system = MomentSystem(Q, d)
    _check_budget(q ** (m * system.n_x), budget, "fiber over origin")
    hist = kernel_histogram(system, q, n, chunks=chunks, x_shift=1, mat_shift=1)
    return hist_total(hist, q, offset=system.n_y)


def check_jet_fiber_lemma(Q: Quiver, d: DimLike, q: int, m: int, **kw) -> dict:
    d = Q.nonzero_vec(d)
    fiber = count_fiber_over_origin(Q, d, q, m, **kw)
    factor = q ** dim_R_double(Q, d)
    if m == 1:
        expected = factor
        base = None
    else:
        base = count_moment_fiber(Q, d, q, m - 1, **kw).count
        expected = factor * base
    return {"d": list(d), "q": q, "m": m, "fiber": fiber, "expected": expected,
            "count_m_minus_1": base, "ok": fiber == expected}


# -- singular jets -----------------------------------------------------------

def jacobian_rank(Q: Quiver, d: DimLike, x0: Sequence[int], y0: Sequence[int], q: int) -> int:
    """Rank over F_q of the Jacobian of mu at the F_q-point (x0, y0)."""
    check_ring(q, 1)
    system = MomentSystem(Q, d)
    x0 = np.asarray(x0, dtype=np.int64).reshape(system.n_x) % q
    y0 = np.asarray(y0, dtype=np.int64).reshape(system.n_y) % q
    J = kernels.jacobian_at(x0, y0, system.t_eq, system.t_x, system.t_y, system.t_sign,
                            system.n_eq, system.n_x, system.n_y, q)
    return int(kernels.fq_rank(J, q, inverse_table(q)))


def find_smooth_point(Q: Quiver, d: DimLike, q: int, rng: np.random.Generator, tries: int = 10**5):
    """Random search for an F_q-point of mu = 0 of maximal Jacobian rank d.d - 1."""
    d = Q.nonzero_vec(d)
    system = MomentSystem(Q, d)
    target = sum(x * x for x in d) - 1
    for _ in range(tries):
        x = rng.integers(0, q, system.n_x)
        y = rng.integers(0, q, system.n_y)
        if system.evaluate(x, y, q, 1).any():
            continue
        if jacobian_rank(Q, d, x, y, q) == target:
            return x, y
    return None


def singular_jet_count(Q: Quiver, d: DimLike, q: int, m: int, method: str = "lift",
                       budget: int = DEFAULT_BUDGET) -> dict:
    """Points of mu^{-1}(0)(R_{q,m+1}) whose reduction has Jacobian rank < d.d - 1."""
    if m < 0:
        raise ValueError("m must be >= 0")
    n = m + 1
    check_ring(q, n)
    d = Q.nonzero_vec(d)
    system = MomentSystem(Q, d)
    cut = sum(x * x for x in d) - 1
    inv = inverse_table(q)
    args = (system.t_eq, system.t_x, system.t_y, system.t_sign, system.n_x, system.n_y, system.n_eq,
            q, n, cut, inv)
    if method == "lift":
        _check_budget(q ** (2 * system.n_x) * q ** (system.n_x * m), budget, "singular lift")
        hist, n_sing = kernels.singular_lift_hist(*args)
        count = hist_total(hist, q, offset=system.n_y)
        return {"count": count, "singular_points": int(n_sing), "method": method}
    if method == "brute":
        _check_budget(q ** (2 * n * system.n_x), budget, "singular brute force")
        return {"count": int(kernels.brute_singular_count(*args)), "singular_points": None,
                "method": method}
    raise ValueError(f"unknown method {method!r}")


def mustata_diagnostic(Q: Quiver, d: DimLike, q_list: Sequence[int], m: int, **kw) -> dict:
    """Heuristic dimension of the singular jets from counts over several q.

    The estimate is the least-squares slope of log(count) against log(q).
    Point counts over a few finite fields do not certify a dimension; the
    report is labelled accordingly.
    """
    d = Q.nonzero_vec(d)
    rows = [{"q": q, **singular_jet_count(Q, d, q, m, **kw)} for q in q_list]
    bound = (m + 1) * dim_X(Q, d)
    pts = [(math.log(r["q"]), math.log(r["count"])) for r in rows if r["count"] > 0]
    estimate = None
    if len(pts) == 1:
        estimate = pts[0][1] / pts[0][0]
    elif len(pts) >= 2:
        mx = sum(p[0] for p in pts) / len(pts)
        my = sum(p[1] for p in pts) / len(pts)
        sxx = sum((p[0] - mx) ** 2 for p in pts)
        estimate = sum((p[0] - mx) * (p[1] - my) for p in pts) / sxx
    strict = None if estimate is None else estimate < bound - 1e-9
    if not pts:
        strict = True  # no singular jets over any q tried
    return {"d": list(d), "m": m, "rows": rows, "heuristic_dimension": estimate,
            "bound": bound, "strict_heuristic": strict, "certified": False}


# -- multiplicative relation ---------------------------------------------------

def _alpha_vector(Q: Quiver, alpha: Mapping[str, int] | Sequence[int] | int, q: int) -> np.ndarray:
    if isinstance(alpha, int):
        vals = [alpha] * len(Q)
    elif isinstance(alpha, Mapping):
        unknown = set(alpha) - set(Q.vertices)
        if unknown:
            raise QuiverError(f"alpha names unknown vertices {sorted(unknown)}")
        vals = [alpha.get(v, 1) for v in Q.vertices]
    else:
        vals = list(alpha)
        if len(vals) != len(Q):
            raise QuiverError(f"alpha has {len(vals)} entries for {len(Q)} vertices")
    vals = [int(v) % q for v in vals]
    if any(v == 0 for v in vals):
        raise ValueError("alpha must be nonzero mod q at every vertex")
    return np.array(vals, dtype=np.int64)


def count_multiplicative_fiber(Q: Quiver, d: DimLike, q: int, alpha, n: int,
                               order: Optional[Sequence[int]] = None,
                               budget: int = DEFAULT_BUDGET) -> int:
    """Brute-force count of the multiplicative preprojective relation over R_{q,n}.

    ``order`` is a permutation of arrow indices fixing the total order used
    in the ordered products (default: file order).
    """
    check_ring(q, n)
    d = Q.vec(d)
    al = _alpha_vector(Q, alpha, q)
    arrows = len(Q.arrows)
    order = list(range(arrows)) if order is None else [int(a) for a in order]
    if sorted(order) != list(range(arrows)):
        raise QuiverError(f"order must be a permutation of 0..{arrows - 1}")
    system = MomentSystem(Q, d)
    total = q ** (2 * n * system.n_x)
    _check_budget(total, budget, "multiplicative brute force")
    src, tgt, dims, xo, yo = system.arrow_arrays()
    return int(kernels.multiplicative_count(src, tgt, dims, xo, yo, np.array(order, dtype=np.int64),
                                            al, system.n_x, q, n, 0, total, inverse_table(q)))


def reduction_bound_holds(Q: Quiver, d: DimLike, q: int, n: int, **kw) -> dict:
    """count(n) <= q^(dim R(Q-bar, d)) * count(n-1)."""
    if n < 2:
        raise ValueError("need n >= 2")
    d = Q.nonzero_vec(d)
    hi = count_moment_fiber(Q, d, q, n, **kw).count
    lo = count_moment_fiber(Q, d, q, n - 1, **kw).count
    rhs = q ** (2 * dim_R(Q, d)) * lo
    return {"count_n": hi, "count_n_minus_1": lo, "rhs": rhs, "ok": hi <= rhs}
