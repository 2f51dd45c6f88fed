import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from directed_ramsey import kernels  # noqa: E402
from directed_ramsey.tournament import Tournament  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> (verdict, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record(num, verdict, detail):
    """Store and print one acceptance line; verdict is PASS, FAIL or SKIP."""
    ACCEPTANCE[num] = (verdict, detail)
    print(f"criterion {num}: {verdict}  {detail}")


@st.composite
def tournaments(draw, min_n=2, max_n=12):
    n = draw(st.integers(min_n, max_n))
    code = draw(st.integers(0, (1 << (n * (n - 1) // 2)) - 1))
    return Tournament.from_upper_bits(n, code)


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(list(range(n))))


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    return kernels.available_backends()[request.param]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        verdict, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {verdict}  {detail}")
