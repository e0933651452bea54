"""Named quivers and generated corpora used by the acceptance suite and tests."""

from __future__ import annotations

from itertools import product
from typing import Iterator

from .predicates import has_property_P
from .quiver import Quiver


def a2() -> Quiver:
    return Quiver.from_counts([0, 0], {(0, 1): 1})


def kronecker() -> Quiver:
    return Quiver.from_counts([0, 0], {(0, 1): 2})


def jordan() -> Quiver:
    return Quiver.loop_quiver(1)


def triangle() -> Quiver:
    return Quiver.from_counts([0, 0, 0], {(0, 1): 1, (1, 2): 1, (0, 2): 1})


def loops(g: int) -> Quiver:
    return Quiver.loop_quiver(g)


def named() -> dict[str, Quiver]:
    return {
        "A2": a2(),
        "kronecker": kronecker(),
        "jordan": jordan(),
        "triangle": triangle(),
        "S2": loops(2),
        "S3": loops(3),
        "TN2-single": Quiver.from_counts([2, 2], {(0, 1): 1}),
        "TN2-double": Quiver.from_counts([2, 3], {(0, 1): 2}),
        "TN3": Quiver.from_counts([2, 2, 2], {(0, 1): 1, (1, 2): 1, (0, 2): 1}),
        "TN3-mixed": Quiver.from_counts([3, 2, 2], {(0, 1): 2, (1, 2): 1, (0, 2): 1}),
    }


def totally_negative_catalog() -> dict[str, Quiver]:
    return {k: v for k, v in named().items() if k.startswith(("S", "TN"))}


def small_quivers(max_vertices: int = 3, max_loops: int = 3, max_between: int = 3) -> Iterator[Quiver]:
    """Every quiver up to the bounds, arrows between i < j oriented i -> j."""
    for r in range(1, max_vertices + 1):
        pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
        for lp in product(range(max_loops + 1), repeat=r):
            for bt in product(range(max_between + 1), repeat=len(pairs)):
                yield Quiver.from_counts(list(lp), dict(zip(pairs, bt)))


def dim_vectors(r: int, max_entry: int) -> Iterator[tuple[int, ...]]:
    for d in product(range(max_entry + 1), repeat=r):
        if any(d):
            yield d


def property_p_pairs(max_entry: int = 3, max_total: int | None = None,
                     exclude_ones: bool = False) -> Iterator[tuple[str, Quiver, tuple[int, ...]]]:
    """(name, Q, d) over the totally negative catalog with property (P)."""
    for name, Q in totally_negative_catalog().items():
        for d in dim_vectors(len(Q), max_entry):
            if max_total is not None and sum(d) > max_total:
                continue
            if exclude_ones and all(x in (0, 1) for x in d):
                continue
            if has_property_P(Q, d):
                yield name, Q, d
