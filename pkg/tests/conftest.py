from pathlib import Path

import pytest

from segalign.model import NL, Segment, validate_sequence

DATA = Path(__file__).parent / "data"

# ground truth (left) and prediction (right) of the worked example, labels as strings
EXAMPLE_GT = [
    ("3", 0, 45),
    (NL, 46, 50),
    ("5", 51, 101),
    ("2", 102, 152),
    ("4", 153, 203),
    ("1", 204, 254),
]
EXAMPLE_PRED = [
    (NL, 0, 30),
    (NL, 31, 50),
    (NL, 51, 88),
    ("5", 89, 90),
    (NL, 91, 95),
    ("5", 96, 106),
    ("2", 107, 152),
    (NL, 153, 174),
    ("2", 175, 195),
    (NL, 196, 203),
    ("1", 204, 254),
]


def segs(rows):
    return [Segment(label, float(b), float(e)) for label, b, e in rows]


@pytest.fixture
def example():
    return validate_sequence(segs(EXAMPLE_GT)), validate_sequence(segs(EXAMPLE_PRED))


@pytest.fixture
def data_dir():
    return DATA


_acceptance = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = report.user_properties and dict(report.user_properties).get("acceptance")
    if marker:
        number, title = marker
        ok = report.passed
        prev = _acceptance.get(number)
        _acceptance[number] = (title, ok if prev is None else prev[1] and ok)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            item.user_properties.append(("acceptance", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"AC{number} {'PASS' if ok else 'FAIL'}  {title}")
