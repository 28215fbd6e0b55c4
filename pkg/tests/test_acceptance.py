"""Acceptance gate: one test per criterion, each printing a pass/fail line."""
from __future__ import annotations

import pytest

from typeq import acceptance

CRITERIA = [
    acceptance.criterion_gauss,
    acceptance.criterion_semiprimitive,
    acceptance.criterion_davenport_hasse,
    acceptance.criterion_chen,
    acceptance.criterion_chen_oracles,
    acceptance.criterion_wx,
    acceptance.criterion_wx_oracles,
    acceptance.criterion_cross_oracle,
    acceptance.criterion_presets,
    acceptance.criterion_negative_controls,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i + 1}" for i in range(len(CRITERIA))])
def test_criterion(criterion, capsys):
    res = criterion()
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.failures[:5]
