"""Desk-scale acceptance catalog: one pass/fail line per criterion."""

from __future__ import annotations

import pytest

from quiverjet.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.ok, res.to_json()["detail"]
    assert res.passed, f"over time limit: {res.seconds:.2f}s >= {res.limit}s"
