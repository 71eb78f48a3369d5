import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from robberloc.corpus import complete, connected_graphs, g5, path  # noqa: E402


@pytest.fixture
def G5():
    return g5()


@pytest.fixture
def K3():
    return complete(3)


@pytest.fixture
def P3():
    return path(3)


CORPUS = connected_graphs(5)

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
