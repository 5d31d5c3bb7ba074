import time
from contextlib import contextmanager

import pytest

_RESULTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_RESULTS] = []


@pytest.fixture
def criterion(request):
    """Times a block, records a PASS/FAIL line and enforces the time limit."""
    lines = request.config.stash[_RESULTS]

    @contextmanager
    def check(label: str, limit: float):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            lines.append(f"FAIL  {label}  ({time.perf_counter() - start:.2f}s: {type(exc).__name__})")
            print(lines[-1])
            raise
        elapsed = time.perf_counter() - start
        ok = elapsed < limit
        lines.append(f"{'PASS' if ok else 'FAIL'}  {label}  ({elapsed:.2f}s, limit {limit:g}s)")
        print(lines[-1])
        assert ok, f"{label}: took {elapsed:.2f}s, limit {limit}s"

    return check


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_RESULTS]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
