import time

import pytest
from hypothesis import settings

from edstop.datasets import data_path

# wall-clock deadlines flake on loaded machines; correctness is what matters here
settings.register_profile("edstop", deadline=None)
settings.load_profile("edstop")


@pytest.fixture
def msa_path():
    return data_path("msa")


@pytest.fixture
def english_path():
    return data_path("english")


@pytest.fixture
def lexicon_path():
    return data_path("lexicon")


_ACCEPTANCE_LINES: list[str] = []


class _Criterion:
    def __init__(self, number: int, title: str, limit: float | None = None):
        self.number, self.title, self.limit = number, title, limit
        self.detail = ""

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        too_slow = self.limit is not None and elapsed >= self.limit
        ok = exc_type is None and not too_slow
        bound = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        why = "" if ok else f" [{'too slow' if exc_type is None else exc_type.__name__}]"
        line = (f"{'PASS' if ok else 'FAIL'} criterion {self.number}: {self.title}"
                f" {elapsed:.2f}s{bound}{why} {self.detail}").rstrip()
        _ACCEPTANCE_LINES.append(line)
        print(line)
        if exc_type is None and too_slow:
            raise AssertionError(f"took {elapsed:.2f}s, limit {self.limit}s")
        return False


@pytest.fixture
def criterion():
    """Context manager that times an acceptance check and records its verdict."""
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
