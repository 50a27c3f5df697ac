import pytest

from exclusivity import fixtures

EQ3_VECTORS = [
    (0, 0, 1, 1), (1, -1, 1, -1), (1, -1, -1, 1), (1, 0, 0, -1), (1, 1, 1, 1),
    (0, 1, 0, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (1, 1, 1, -1), (1, 1, -1, 1),
]


@pytest.fixture(scope="session")
def ten_vertex():
    return fixtures.ten_vertex_graph()


@pytest.fixture(scope="session")
def realization():
    return fixtures.ten_vertex_realization()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
