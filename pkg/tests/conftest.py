from pathlib import Path

import pytest

from rectstruct.filter import central_groupoid_census
from rectstruct.orderly import enumerate_structures

DATA = Path(__file__).parent / "data"

# (fixture file, source structure number, lifting) for the six printed order-9 tables
PRINTED_TABLES = [
    ("cg9_natural.txt", None, None),
    ("cg9_rs010.txt", 10, "(1,9)(2,7)(4,8)"),
    ("cg9_rs036.txt", 36, "(1,9)(2,7)(4,8)"),
    ("cg9_rs105.txt", 105, "(1,9)(2,4)(7,8)"),
    ("cg9_rs118_a.txt", 118, "(1,8)(3,4)(6,9)"),
    ("cg9_rs118_b.txt", 118, "(1,9)(5,7)(6,8)"),
]


@pytest.fixture(scope="session")
def census9():
    return central_groupoid_census(3)


@pytest.fixture(scope="session")
def census4():
    return central_groupoid_census(2)


@pytest.fixture(scope="session")
def structures23():
    return enumerate_structures(2, 3).structures


# acceptance criteria outcomes, printed once at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] AC{num} {title}: {detail}")


def pytest_collection_modifyitems(items):
    for item in items:
        if "census9" in getattr(item, "fixturenames", ()):
            item.add_marker(pytest.mark.slow)
