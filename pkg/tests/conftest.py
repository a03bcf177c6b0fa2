import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def fig1():
    from fdbec import fig_params
    return fig_params(100, 0.0)


ACCEPTANCE_LEDGER: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LEDGER:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LEDGER:
            terminalreporter.write_line(line)
