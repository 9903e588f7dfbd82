import pytest
from hypothesis import HealthCheck, settings

from iainfty.corpus import all_fixtures
from iainfty.field import QQ

settings.register_profile(
    "repro", derandomize=True, deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def fixtures():
    return all_fixtures(QQ)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
