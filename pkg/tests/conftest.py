import sys

import pytest

from drcec.hypergraph import parse_hypergraph
from oracles import corpus

EXAMPLE = "nodes 3\nred 0 1\nblue 1 2\n"


@pytest.fixture
def example():
    return parse_hypergraph(EXAMPLE)


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(40, seed=7)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
