"""Every acceptance criterion at its stated tolerance, full grids.

Each test prints one PASS/FAIL line; the terminal summary collects them.
"""

from __future__ import annotations

import pytest

from ffdist import verify


@pytest.mark.parametrize("name", list(verify.ACCEPTANCE))
def test_criterion(name, record_property):
    result = verify.run_check(name, "all")
    record_property("criterion", name)
    record_property("detail", f"{result.detail} [{result.seconds:.1f}s]")
    print(f"{'PASS' if result.passed else 'FAIL'}  {name}: {result.detail}")
    assert result.passed, result.detail
