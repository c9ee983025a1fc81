import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from triflip.constructions import build_g2
from triflip.flipgraph import enumerate_flip_graph
from triflip.kernel import parse

K4_TEXT = """# tetrahedron
n 4
0 : 1 3 2
1 : 0 2 3
2 : 0 3 1
3 : 0 1 2
"""

OCTAHEDRON_TEXT = """n 6
0 : 1 5 3 4
1 : 0 4 2 5
2 : 1 4 3 5
3 : 0 5 2 4
4 : 0 3 2 1
5 : 0 1 2 3
"""

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def k4():
    return parse(K4_TEXT)


@pytest.fixture
def octahedron():
    return parse(OCTAHEDRON_TEXT)


@pytest.fixture
def stacked6(octahedron):
    from triflip.kernel import flip

    return flip(octahedron, 0, 1)


_catalogs = {}


@pytest.fixture(scope="session")
def catalog():
    def get(n, mirror_mode=True):
        key = (n, mirror_mode)
        if key not in _catalogs:
            _catalogs[key] = enumerate_flip_graph(n, mirror_mode)
        return _catalogs[key]

    return get


@pytest.fixture(scope="session")
def catalog_tris(catalog):
    cache = {}

    def get(n):
        if n not in cache:
            c = catalog(n)
            cache[n] = [c.triangulation(i) for i in range(c.num_nodes)]
        return cache[n]

    return get


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    if call.when == "call":
        item.rep_call = outcome.get_result()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
