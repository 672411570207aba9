from __future__ import annotations

import os

import pytest

from hermcodes.field import make_field
from hermcodes.varieties import hermitian_points


def pytest_addoption(parser):
    parser.addoption("--heavy", action="store_true", default=False, help="run the heavy tier")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--heavy") or os.environ.get("HERMCODES_HEAVY") == "1":
        return
    skip = pytest.mark.skip(reason="heavy tier: pass --heavy or set HERMCODES_HEAVY=1")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def F4():
    return make_field(2)


@pytest.fixture(scope="session")
def F9():
    return make_field(3)


@pytest.fixture(scope="session")
def X2(F4):
    """Hermitian surface over F_4."""
    return hermitian_points(3, F4)


@pytest.fixture(scope="session")
def X3(F9):
    return hermitian_points(3, F9)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
