from pathlib import Path

import pytest

from modpoints.checker import load_db

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def db():
    return load_db()


@pytest.fixture(scope="session")
def by_label(db):
    return {r.label: r for r in db}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
