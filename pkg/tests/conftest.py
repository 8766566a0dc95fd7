import time
from contextlib import contextmanager

import pytest

_LINES = []


class Criterion:
    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.ok = False
        self.detail = ""
        self.elapsed = 0.0

    @property
    def passed(self):
        return self.ok and self.elapsed < self.budget

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        timing = f"{self.elapsed:.2f}s/{self.budget:g}s"
        return f"{status}  criterion {self.number:>2} {self.title} [{timing}]: {self.detail}"


@pytest.fixture
def criterion():
    """``with criterion(n, title, budget) as c:`` times the block and logs one line."""

    @contextmanager
    def run(number, title, budget):
        c = Criterion(number, title, budget)
        start = time.perf_counter()
        try:
            yield c
        except Exception as exc:
            c.ok, c.detail = False, f"{type(exc).__name__}: {exc}"
            raise
        finally:
            c.elapsed = time.perf_counter() - start
            _LINES.append((number, c.line()))
            print(c.line())

    return run


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
