from pathlib import Path

import pytest

from moodrec.catalog import load_catalog

DATA = Path(__file__).parent / "data"

_acceptance: dict[int, tuple[str, str]] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        outcome = "FAIL" if call.excinfo is not None else "PASS"
        if _acceptance.get(number, ("PASS",))[0] != "FAIL":
            _acceptance[number] = (outcome, title)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        outcome, title = _acceptance[number]
        terminalreporter.write_line(f"criterion {number}: {outcome}  {title}")


@pytest.fixture
def golden_catalog():
    return load_catalog(DATA / "golden_catalog.csv")
