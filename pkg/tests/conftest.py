import mpmath
import pytest


@pytest.fixture
def mp():
    """An mpmath context at 25 digits, isolated from the global one."""
    ctx = mpmath.mp.clone()
    ctx.dps = 25
    return ctx


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, summary_line
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(summary_line(k, RESULTS[k]))
