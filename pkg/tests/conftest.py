import pytest
from hypothesis import HealthCheck, settings

# exact arithmetic and the sympy oracle are slow; examples stay small instead
settings.register_profile("abmod", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("abmod")

ACCEPTANCE = {}


@pytest.fixture
def report(request):
    """Record the pass/fail line of an acceptance criterion."""
    def record(number, title):
        ACCEPTANCE[number] = [title, "FAIL"]
        return ACCEPTANCE[number]

    return record


def pytest_runtest_makereport(item, call):
    if call.when != "call":
        return
    number = getattr(item.function, "criterion", None)
    if number in ACCEPTANCE and call.excinfo is None:
        ACCEPTANCE[number][1] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, status = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}: {title}")
