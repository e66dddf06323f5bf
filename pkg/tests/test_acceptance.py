"""Every acceptance criterion at its stated tolerance; one pass/fail line each."""

import pytest

from cbtkraw.acceptance import CRITERIA, run_criterion
from conftest import CRITERION_LINES


@pytest.mark.parametrize("entry", CRITERIA, ids=[f"{c[0]:02d}-{c[1]}" for c in CRITERIA])
def test_criterion(entry):
    result = run_criterion(entry)
    print(result.line())
    CRITERION_LINES.append(result.line())
    assert result.passed, result.line()
