import pytest

from teleclone.validation import run_validation

_LINES = {}


@pytest.fixture(scope="session")
def validation_checks():
    return {c.id: c for c in run_validation(seed=0)}


@pytest.fixture
def record_acceptance():
    def record(criterion: int, line: str):
        _LINES[criterion] = line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_LINES):
        terminalreporter.write_line(_LINES[criterion])
