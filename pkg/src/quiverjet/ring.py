"""Truncated polynomial rings R_{q,n} = F_q[t]/(t^n) for prime q."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from . import kernels

DEFAULT_RING_BUDGET = 10**6


class RingError(ValueError):
    pass


class NotAUnit(RingError):
    pass


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured budget."""


@lru_cache(maxsize=None)
def is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def check_ring(q: int, n: int) -> None:
    if not isinstance(q, (int, np.integer)) or not is_prime(int(q)):
        raise RingError(f"q must be prime, got {q!r}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise RingError(f"n must be a positive integer, got {n!r}")
    # coefficient products are accumulated in int64 before reduction
    if n * (q - 1) ** 2 >= 2**62:
        raise RingError(f"q={q}, n={n} too large for int64 accumulation")


@lru_cache(maxsize=None)
def inverse_table(q: int) -> np.ndarray:
    tab = kernels.inverse_table(q)
    tab.setflags(write=False)
    return tab


@dataclass(frozen=True)
class TruncatedPoly:
    q: int
    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        check_ring(self.q, self.n)
        c = tuple(int(x) % self.q for x in self.coeffs)
        if len(c) > self.n:
            raise RingError(f"{len(c)} coefficients for n={self.n}")
        object.__setattr__(self, "coeffs", c + (0,) * (self.n - len(c)))

    @classmethod
    def of(cls, q: int, n: int, *coeffs: int) -> "TruncatedPoly":
        return cls(q, n, coeffs[:n])

    def _same(self, other: "TruncatedPoly") -> None:
        if (self.q, self.n) != (other.q, other.n):
            raise RingError(f"ring mismatch: R_{{{self.q},{self.n}}} vs R_{{{other.q},{other.n}}}")

    @property
    def valuation(self) -> int:
        return next((i for i, c in enumerate(self.coeffs) if c), self.n)

    @property
    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def __add__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        self._same(other)
        return TruncatedPoly(self.q, self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TruncatedPoly":
        return TruncatedPoly(self.q, self.n, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        return self + (-other)

    def __mul__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        self._same(other)
        n = self.n
        a, b = self.coeffs, other.coeffs
        return TruncatedPoly(self.q, n, tuple(sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)))

    def inverse(self) -> "TruncatedPoly":
        if not self.is_unit:
            raise NotAUnit(f"{self} is not a unit (zero constant term)")
        out = np.zeros(self.n, dtype=np.int64)
        kernels.series_inverse(np.array(self.coeffs, dtype=np.int64), out, self.q, self.n,
                               inverse_table(self.q))
        return TruncatedPoly(self.q, self.n, tuple(out.tolist()))

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if i == 0:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) or "0"


def add(a: TruncatedPoly, b: TruncatedPoly) -> TruncatedPoly:
    return a + b


def mul(a: TruncatedPoly, b: TruncatedPoly) -> TruncatedPoly:
    return a * b


def neg(a: TruncatedPoly) -> TruncatedPoly:
    return -a


def inverse_of_unit(a: TruncatedPoly) -> TruncatedPoly:
    return a.inverse()


@dataclass(frozen=True)
class RingMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[TruncatedPoly, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise RingError("matrix entries do not match the declared shape")
        rings = {(e.q, e.n) for r in self.entries for e in r}
        if len(rings) > 1:
            raise RingError(f"mixed rings in one matrix: {sorted(rings)}")

    @classmethod
    def from_array(cls, arr: np.ndarray, q: int, n: int) -> "RingMatrix":
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or arr.shape[2] > n:
            raise RingError(f"expected a (rows, cols, <=n) array, got shape {arr.shape}")
        rows, cols = arr.shape[:2]
        ents = tuple(tuple(TruncatedPoly(q, n, tuple(arr[i, j].tolist())) for j in range(cols))
                     for i in range(rows))
        return cls(rows, cols, ents)

    @classmethod
    def identity(cls, size: int, q: int, n: int) -> "RingMatrix":
        return cls.from_array(np.eye(size, dtype=np.int64), q, n)

    @property
    def ring(self) -> tuple[int, int]:
        if self.rows and self.cols:
            e = self.entries[0][0]
            return e.q, e.n
        raise RingError("empty matrix has no ring")

    def to_array(self) -> np.ndarray:
        q, n = self.ring
        out = np.zeros((self.rows, self.cols, n), dtype=np.int64)
        for i, r in enumerate(self.entries):
            for j, e in enumerate(r):
                out[i, j] = e.coeffs
        return out


def kernel_exponent_array(arr: np.ndarray, q: int, n: int) -> int:
    """k with #{y in R^cols : A y = 0} = q^k for a (rows, cols, n) array."""
    check_ring(q, n)
    arr = np.ascontiguousarray(np.asarray(arr, dtype=np.int64) % q)
    rows, cols = arr.shape[:2]
    if cols == 0:
        return 0
    if rows == 0:
        return n * cols
    return int(kernels.kernel_exponent(arr, q, n, inverse_table(q)))


def kernel_size_exponent(M: RingMatrix) -> int:
    q, n = M.ring
    return kernel_exponent_array(M.to_array(), q, n)


def solution_exponent(arr: np.ndarray, rhs: np.ndarray, q: int, n: int) -> int | None:
    """k with #{y : A y = b} = q^k, or None when the system has no solution."""
    check_ring(q, n)
    A = np.ascontiguousarray(np.asarray(arr, dtype=np.int64) % q)
    b = np.ascontiguousarray(np.asarray(rhs, dtype=np.int64) % q)
    k = int(kernels.eliminate(A, b, q, n, inverse_table(q)))
    return None if k < 0 else k


def enumerate_ring(q: int, n: int, budget: int = DEFAULT_RING_BUDGET) -> Iterator[TruncatedPoly]:
    """All q^n elements, ordered by the integer sum c_i q^i (0, 1, t, 1+t, ...)."""
    check_ring(q, n)
    if q**n > budget:
        raise BudgetExceeded(f"q^n = {q**n} exceeds budget {budget}")
    for digits in product(range(q), repeat=n):
        yield TruncatedPoly(q, n, tuple(reversed(digits)))


def brute_kernel_count(arr: np.ndarray, q: int, n: int, budget: int = DEFAULT_RING_BUDGET) -> int:
    """Number of y in R^cols with A y = 0, by exhaustive search (test oracle)."""
    A = [[TruncatedPoly(q, n, tuple(c)) for c in row] for row in np.asarray(arr).tolist()]
    cols = len(A[0]) if A else 0
    if q ** (n * cols) > budget:
        raise BudgetExceeded(f"{q ** (n * cols)} candidate vectors exceed budget {budget}")
    elems = list(enumerate_ring(q, n))
    zero = TruncatedPoly(q, n, ())
    count = 0
    for y in product(elems, repeat=cols):
        if all(sum((a * b for a, b in zip(row, y)), zero) == zero for row in A):
            count += 1
    return count


def fq_rank(mat: Sequence[Sequence[int]], q: int) -> int:
    check_ring(q, 1)
    arr = np.asarray(mat, dtype=np.int64)
    if arr.size == 0:
        return 0
    return int(kernels.fq_rank(arr, q, inverse_table(q)))
