import time

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SESSION = {"start": time.monotonic()}
CRITERIA: dict[int, tuple[bool, str]] = {}


def pytest_sessionstart(session):
    SESSION["start"] = time.monotonic()


@pytest.fixture
def record():
    """``record(n, ok, detail)`` stores the outcome of acceptance criterion ``n``."""

    def _record(n: int, ok: bool, detail: str) -> None:
        CRITERIA[n] = (ok, detail)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    elapsed = time.monotonic() - SESSION["start"]
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    terminalreporter.write_line(
        f"suite runtime: {elapsed:.1f} s ({'PASS' if elapsed < 300 else 'FAIL'} against the 300 s budget)"
    )
