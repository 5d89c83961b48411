"""Acceptance criteria, one PASS/FAIL line per criterion.

Tolerances live in :mod:`volset.suite`.  The lines are printed as each
criterion finishes and again in the pytest terminal summary; running this
file directly (``python tests/test_acceptance.py``) prints them too.
"""
import sys

import pytest

from volset.suite import CRITERIA, run_suite

_CACHE = {}


def _result(cid):
    if cid not in _CACHE:
        _CACHE[cid] = run_suite("acceptance", only={cid})[0]
    return _CACHE[cid]


@pytest.mark.slow
@pytest.mark.parametrize("cid", [c[0] for c in CRITERIA], ids=[f"C{c[0]}" for c in CRITERIA])
def test_criterion(cid, capsys, pytestconfig):
    res = _result(cid)
    pytestconfig.__dict__.setdefault("acceptance_lines", []).append(res.line)
    with capsys.disabled():
        print(f"\n{res.line}\n    {res.details}")
    assert res.passed, res.details


@pytest.mark.slow
def test_criterion_7_delta_counts_alone():
    # the separated-volume half of criterion 7, without the energy precondition
    for row in _result(7).details["rows"]:
        assert row["delta_count"] >= row["bound"], row


if __name__ == "__main__":
    results = run_suite("acceptance", echo=print)
    sys.exit(0 if all(r.passed for r in results) else 1)
