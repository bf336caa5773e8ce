import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rangesum.poly import interpolate  # noqa: E402
from rangesum.search import SearchSpec, search  # noqa: E402

HALF_PRIMES = (5, 7, 11, 13)

# acceptance criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE_LINES: dict = {}


@pytest.fixture(scope="session")
def half_degree_results():
    """Exhaustive canonical searches at degree (p+1)/2, keyed by p."""
    return {p: search(SearchSpec(p, (p + 1) // 2)) for p in HALF_PRIMES}


@pytest.fixture(scope="session")
def half_degree_solutions():
    """Every degree-(p+1)/2 range-sum-p polynomial (all orbit members), keyed by p."""
    out = {}
    for p in HALF_PRIMES:
        res = search(SearchSpec(p, (p + 1) // 2, canonicalize=False))
        out[p] = [interpolate(v) for v in res.tables]
    return out


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        ok, detail = ACCEPTANCE_LINES[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
