from pathlib import Path

import pytest

from zlab.zeta_core import find_zeros, ingest_zeros

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def zeros_1e4():
    return find_zeros(1.0e4)


@pytest.fixture(scope="session")
def zeros_2000():
    return find_zeros(2000.0)


@pytest.fixture(scope="session")
def table_100():
    """First 100 zeros, 9 decimals, generated once with mpmath.zetazero."""
    return ingest_zeros(DATA / "zeros_100.txt")


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _criteria[report.nodeid.split("::")[-1]] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.failed:
        _criteria[report.nodeid.split("::")[-1]] = "error"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_criteria.items()):
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")
