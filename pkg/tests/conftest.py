import functools

import pytest

from derdisc.presentation import build_lambda

# acceptance lines collected during the run, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def lam(p, q, r):
    return build_lambda(p, q, r)


@pytest.fixture
def alg312():
    return lam(3, 1, 2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
