"""Shared fixtures: the worked examples from the figures."""

from __future__ import annotations

import pytest

from parkgraph import Digraph, RootedTree

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def fig1() -> Digraph:
    """Five vertices; 1 fans out to 2, 3, 4; paths rejoin at 5."""
    return Digraph(5, [(3, 2), (1, 3), (1, 2), (4, 5), (1, 4), (2, 5)])


@pytest.fixture
def fig2_tree() -> RootedTree:
    """Source tree on 7 vertices rooted at 3."""
    return RootedTree(7, 3, (3, 1, 0, 1, 4, 3, 1), "source")


@pytest.fixture
def fig2_mapping() -> Digraph:
    """Inverse mapping digraph sharing the parking function of fig2_tree."""
    return Digraph(7, [(3, 6), (3, 3), (1, 4), (1, 2), (1, 7), (4, 1), (5, 5)])


@pytest.fixture
def fig2_seq() -> tuple[int, ...]:
    return (2, 3, 4, 1, 3, 5, 1)


@pytest.fixture
def fig3_sink() -> RootedTree:
    """Rooted path 4-3 splitting into leaves 1 and 2, oriented toward 4."""
    return RootedTree(4, 4, (3, 3, 4, 0), "sink")


@pytest.fixture
def fig3_source(fig3_sink: RootedTree) -> RootedTree:
    return fig3_sink.flipped()


@pytest.fixture
def fig4_tree() -> RootedTree:
    """Sink tree on 6 vertices: chain 1-2-3 and leaf 4 joining at 5, root 6."""
    return RootedTree(6, 6, (2, 3, 5, 5, 6, 0), "sink")


@pytest.fixture
def fig4_seq() -> tuple[int, ...]:
    return (1, 4, 4, 2, 1, 3)


@pytest.fixture
def fig5_mapping() -> Digraph:
    """Inverse mapping digraph with a 4-cycle and three pendant vertices."""
    return Digraph(7, [(4, 3), (4, 5), (3, 2), (3, 6), (2, 1), (2, 7), (1, 4)])


@pytest.fixture
def fig5_seq() -> tuple[int, ...]:
    return (1, 1, 2, 2, 3, 3, 3)
