"""The eight acceptance criteria, each at its stated tolerance and time limit."""

import pytest
from conftest import ACCEPTANCE_LINES

from fiedlerforms.suite import NAMES, run_criterion

SEED = 42
_context: dict = {}


@pytest.mark.parametrize("ident", sorted(NAMES))
def test_criterion(ident):
    result = run_criterion(ident, SEED, _context)
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.passed, result.detail
    assert result.within_time, f"took {result.elapsed:.2f}s, limit {result.limit}s"
