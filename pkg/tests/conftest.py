import pytest
from hypothesis import HealthCheck, settings

from gwhyp import Engine

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")

# filled in by test_acceptance.py, reported at the end of the session
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def engine():
    return Engine()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[criterion])
