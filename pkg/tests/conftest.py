import math

import pytest

from steering_loophole.measurements import NAMED_SETS, named_set

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def named_sets():
    return {label.value: named_set(label) for label in NAMED_SETS}


@pytest.fixture(scope="session")
def octahedron():
    return named_set("octahedron")


@pytest.fixture(scope="session")
def icosahedron():
    return named_set("icosahedron")


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion, then assert it."""

    def record(name: str, ok: bool, detail: str = ""):
        ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


HALF_PI = math.pi / 2
