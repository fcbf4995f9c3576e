"""One check per acceptance criterion; each prints a PASS/FAIL line at its tolerance."""

import pytest

from cohepow.suites import CRITERIA


@pytest.mark.parametrize("key", list(CRITERIA))
def test_criterion(key, capsys):
    result = CRITERIA[key]()
    with capsys.disabled():
        print(f"\n{result.line()}  [{result.runtime:.1f}s]")
    assert result.passed, result.evidence
