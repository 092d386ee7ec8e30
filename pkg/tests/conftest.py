from __future__ import annotations

import pytest

from stopred.codes import golay24


@pytest.fixture(scope="session")
def golay():
    return golay24()


@pytest.fixture(scope="session")
def golay_search(golay):
    from stopred.search import SearchConfig, greedy_pcm_search

    return greedy_pcm_search(golay, 8, SearchConfig(seed=2))


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line for an acceptance criterion and echo it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def _report(num: int, ok: bool, detail: str) -> bool:
        line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append((num, line))
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
