import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tmspec.cauchy import get_machinery  # noqa: E402
from tmspec.constants import critical_constants  # noqa: E402

MU_A = 1.88
MU_M005 = 2.0 / 1.05


@pytest.fixture(scope="session")
def constants():
    return critical_constants()


@pytest.fixture(scope="session")
def mach():
    """Singular-integral data at m = 0.05."""
    return get_machinery(MU_M005)


@pytest.fixture(scope="session")
def mach_a():
    return get_machinery(MU_A)


@pytest.fixture(scope="session", params=[MU_A, MU_M005], ids=["mu1.88", "m0.05"])
def mach_each(request):
    return get_machinery(request.param)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "SUMMARY_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
