import time
from contextlib import contextmanager

import pytest

# criterion number -> (title, passed, seconds, limit)
ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    """Time a block, enforce its runtime limit and record the verdict."""

    @contextmanager
    def run(number: int, title: str, limit: float | None = None):
        start = time.perf_counter()
        ACCEPTANCE[number] = (title, False, None, limit)
        yield
        elapsed = time.perf_counter() - start
        ok = limit is None or elapsed < limit
        ACCEPTANCE[number] = (title, ok, elapsed, limit)
        assert ok, "took %.1fs, limit %.0fs" % (elapsed, limit)

    return run


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, elapsed, limit = ACCEPTANCE[number]
        timing = "" if elapsed is None else " (%.2fs%s)" % (elapsed, "" if limit is None else ", limit %gs" % limit)
        terminalreporter.write_line("%s %2d %s%s" % ("PASS" if ok else "FAIL", number, title, timing))
