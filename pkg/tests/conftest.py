from pathlib import Path

import pytest

from unicover import catalog
from unicover.simplicial import load

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus():
    return catalog.corpus()


@pytest.fixture(scope="session")
def s5xrp3():
    return load(FIXTURES / "s5xrp3.json")


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


# -- acceptance report: one line per criterion at the end of the run --------------------

ACCEPTANCE: list[tuple[int, str, str, float]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    ACCEPTANCE.append((number, title, "PASS" if rep.passed else "FAIL", rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, secs in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{status} [{number}] {title} ({secs:.1f}s)")
