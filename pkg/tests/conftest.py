from __future__ import annotations

import pytest

from quiverjet import catalog
from quiverjet.quiver import Quiver


@pytest.fixture
def a2() -> Quiver:
    return catalog.a2()


@pytest.fixture
def s2() -> Quiver:
    return catalog.loops(2)


@pytest.fixture
def kronecker() -> Quiver:
    return catalog.kronecker()


@pytest.fixture
def triangle() -> Quiver:
    return catalog.triangle()


@pytest.fixture
def tn2() -> Quiver:
    """Two vertices, two loops each, one arrow between them."""
    return Quiver.from_counts([2, 2], {(0, 1): 1})
