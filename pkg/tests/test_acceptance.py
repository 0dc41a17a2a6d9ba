"""End-to-end acceptance: every desk-scale claim runs at its stated tolerance.

Each criterion prints one PASS/FAIL line; the same registry backs the
`mlcr verify-paper` command.
"""

import pytest

from mlcr.verify import _REGISTRY, run_criteria


@pytest.mark.parametrize("cid,title", [(cid, title) for cid, title, _ in _REGISTRY])
def test_criterion(cid, title, capsys):
    results = run_criteria(only=cid)
    assert len(results) == 1
    res = results[0]
    with capsys.disabled():
        status = "PASS" if res.passed else "FAIL"
        print(f"\n{status} {res.cid} ({res.elapsed:.1f}s) {res.title}")
        if not res.passed:
            for line in res.details:
                print(f"    {line}")
    assert res.passed, f"{res.cid}: " + "; ".join(res.details)
