import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "40")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# shared oracle helpers live next to the tests
sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = {}


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion; asserts on failure."""

    def verdict(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {detail}"
        _ACCEPTANCE[n] = line
        assert ok, line

    return verdict


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
