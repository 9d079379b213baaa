import time
from contextlib import contextmanager

import pytest

from octodirac import clifford_rep as cr
from octodirac.octonion import default_tensor

# acceptance results, criterion number -> (passed, summary); printed at the end of the run
_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def gamma11():
    return cr.build_gamma11()


@pytest.fixture(scope="session")
def gamma4():
    return cr.build_gamma4()


@pytest.fixture(scope="session")
def units():
    return cr.build_unit_system()


@pytest.fixture(scope="session")
def tensor():
    return default_tensor()


@pytest.fixture
def criterion():
    """Context manager factory recording one acceptance criterion.

    Usage: ``with criterion(3, "alternativity") as note: ...``; ``note(text)``
    appends to the summary line.  Any exception inside the block marks the
    criterion FAIL and is re-raised.
    """

    @contextmanager
    def record(number: int, title: str):
        notes: list[str] = []
        start = time.perf_counter()
        passed = False
        try:
            yield notes.append
            passed = True
        finally:
            elapsed = time.perf_counter() - start
            summary = f"{title} ({elapsed:.2f}s)" + (": " + "; ".join(notes) if notes else "")
            _CRITERIA[number] = (passed, summary)
            print(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {summary}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, summary = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {summary}")
