"""Acceptance gate: one test per shipped criterion, each at full scale.

Run with ``pytest tests/test_acceptance.py -v`` (or, equivalently,
``klinkage bench --suite acceptance``).  Each test prints its own pass/fail
line with the measured detail.
"""

import pytest

from klinkage.acceptance import _CRITERIA, run_criteria


@pytest.mark.parametrize(
    "number,name",
    [(num, name) for num, name, _fn in _CRITERIA],
    ids=[f"criterion-{num}" for num, _name, _fn in _CRITERIA],
)
def test_criterion(number, name):
    (result,) = run_criteria([number])
    status = "PASS" if result.passed else "FAIL"
    print(f"{status} criterion {number} ({name}): {result.detail} [{result.seconds:.2f}s]")
    assert result.passed, f"criterion {number} ({name}): {result.detail}"
