"""Shared fixtures and brute-force oracles.

The oracles here evaluate formulas pair by pair in plain Python so they stay
independent of the vectorized and incremental code paths under test.
"""

import itertools

import numpy as np
import pytest

from vosunify import Network, build_network, generate_appendix_b


def brute_quality(net: Network, assignment, gamma: float, weighting: str) -> float:
    """Weighted modularity summed over unordered pairs, straight from its definition."""
    n = net.node_count
    two_m = float(sum(net.strengths))
    total = 0.0
    for i, j in itertools.combinations(range(n), 2):
        if assignment[i] != assignment[j]:
            continue
        ci, cj = net.strengths[i], net.strengths[j]
        w = two_m / (ci * cj) if weighting == "unified" else 1.0
        total += w * (net.weight(i, j) - gamma * ci * cj / two_m)
    return total / two_m


def brute_objective(net: Network, coords) -> float:
    n = net.node_count
    two_m = 2.0 * net.total
    value = 0.0
    for i, j in itertools.combinations(range(n), 2):
        d = float(np.linalg.norm(np.asarray(coords[i]) - np.asarray(coords[j])))
        s = two_m * net.weight(i, j) / (net.strengths[i] * net.strengths[j])
        value += s * d * d - d
    return value


def fd_gradient(net: Network, coords: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of the layout objective."""
    from vosunify import Layout, mapping_objective

    grad = np.zeros_like(coords)
    for idx in np.ndindex(coords.shape):
        plus, minus = coords.copy(), coords.copy()
        plus[idx] += h
        minus[idx] -= h
        grad[idx] = (
            mapping_objective(net, Layout(plus)) - mapping_objective(net, Layout(minus))
        ) / (2 * h)
    return grad


def bfs_components(net: Network) -> list[list[int]]:
    adj = {i: set() for i in range(net.node_count)}
    for i, j in net.links:
        adj[i].add(j)
        adj[j].add(i)
    seen, comps = set(), []
    for start in range(net.node_count):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v] - seen:
                seen.add(u)
                stack.append(u)
        comps.append(sorted(comp))
    return comps


def complete_graph(n: int, weight: float = 1.0) -> Network:
    return build_network([(f"n{i}", f"n{j}", weight) for i in range(n) for j in range(i + 1, n)])


def groups_of(part) -> set[frozenset[int]]:
    return {frozenset(c) for c in part.clusters()}


APPENDIX_B_UNIFIED = {frozenset(list(range(10)) + [30]), frozenset(range(10, 20)), frozenset(range(20, 30))}
APPENDIX_B_CLASSIC = {frozenset(range(10)), frozenset(list(range(10, 20)) + [30]), frozenset(range(20, 30))}


@pytest.fixture(scope="session")
def appendix_b():
    return generate_appendix_b()


@pytest.fixture
def single_link():
    return build_network([("A", "B", 1)])


@pytest.fixture
def two_edges():
    return build_network([("1", "2", 1), ("3", "4", 1)])


# acceptance reporting: one line per criterion at the end of the run

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if call.when == "setup" and call.excinfo is not None:
        _criteria[number] = (title, "FAIL")
    elif call.when == "call":
        _criteria[number] = (title, "FAIL" if call.excinfo is not None else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcome = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {outcome}  {title}")
