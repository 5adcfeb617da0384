import contextlib

import pytest

from lerslab.ust import Multigraph, complete_graph, triangle

ACCEPTANCE_LINES: list[str] = []


@contextlib.contextmanager
def criterion(number: int, title: str):
    """Record a PASS/FAIL line for an acceptance criterion."""
    detail: list[str] = []
    try:
        yield detail
    except BaseException:
        ACCEPTANCE_LINES.append(f"FAIL  criterion {number}: {title} {' '.join(detail)}".rstrip())
        raise
    ACCEPTANCE_LINES.append(f"PASS  criterion {number}: {title} {' '.join(detail)}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session", autouse=True)
def oracle_cache(tmp_path_factory):
    mp = pytest.MonkeyPatch()
    path = tmp_path_factory.mktemp("oracle-cache")
    mp.setenv("LERSLAB_CACHE_DIR", str(path))
    yield path
    mp.undo()


@pytest.fixture
def tri() -> Multigraph:
    return triangle()


@pytest.fixture
def k4() -> Multigraph:
    return complete_graph(4)
