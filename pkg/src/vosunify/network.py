"""Weighted undirected networks, association strength and synthetic generators."""

from __future__ import annotations

import logging
import math
from functools import cached_property
from typing import Hashable, Iterable, NamedTuple, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

logger = logging.getLogger(__name__)


class NetworkError(ValueError):
    """Raised when edge data cannot form a valid network."""


class EdgeRecord(NamedTuple):
    source: Hashable
    target: Hashable
    weight: float = 1.0
    line: int | None = None


class Network:
    """Undirected weighted network with cached node strengths.

    Links are stored once per unordered pair, keyed ``(i, j)`` with ``i < j``.
    Instances are treated as immutable.

    Parameters
    ----------
    labels : sequence of str
        Display label of each node; the position is the node index.
    links : dict
        Maps ``(i, j)`` to a positive weight.
    """

    def __init__(self, labels: Sequence[str], links: dict[tuple[int, int], float]):
        self.labels = tuple(str(label) for label in labels)
        self.node_count = len(self.labels)
        if self.node_count == 0:
            raise NetworkError("network has no nodes")
        if len(set(self.labels)) != self.node_count:
            raise NetworkError("node labels must be unique")

        clean: dict[tuple[int, int], float] = {}
        for (i, j), w in links.items():
            i, j = int(i), int(j)
            if i == j:
                raise NetworkError(f"self-link on node {self.labels[i]!r}")
            if not (0 <= i < self.node_count and 0 <= j < self.node_count):
                raise NetworkError(f"link ({i}, {j}) refers to a missing node")
            w = float(w)
            if not math.isfinite(w) or w < 0:
                raise NetworkError(f"invalid weight {w!r} on link ({i}, {j})")
            if w == 0:
                continue
            key = (i, j) if i < j else (j, i)
            if key in clean:
                raise NetworkError(f"link {key} given twice")
            clean[key] = w
        self.links = clean

        per_node: list[list[float]] = [[] for _ in range(self.node_count)]
        for (i, j), w in clean.items():
            per_node[i].append(w)
            per_node[j].append(w)
        self.strengths = np.array([math.fsum(ws) for ws in per_node])
        self.strengths.setflags(write=False)
        self.total = math.fsum(self.strengths) / 2.0

        isolated = [self.labels[i] for i in range(self.node_count) if self.strengths[i] <= 0]
        if isolated:
            raise NetworkError(
                f"{len(isolated)} isolated node(s) without links: {', '.join(isolated)}"
            )

    def __repr__(self) -> str:
        return f"Network(n={self.node_count}, links={len(self.links)}, m={self.total:g})"

    @property
    def edge_count(self) -> int:
        return len(self.links)

    def index(self, label: str) -> int:
        return self._index[str(label)]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Row indices, column indices (row < col) and weights of all links."""
        keys = sorted(self.links)
        rows = np.array([k[0] for k in keys], dtype=np.intp)
        cols = np.array([k[1] for k in keys], dtype=np.intp)
        weights = np.array([self.links[k] for k in keys], dtype=float)
        return rows, cols, weights

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric sparse matrix of link weights."""
        rows, cols, weights = self.edge_arrays
        n = self.node_count
        mat = sparse.coo_matrix(
            (np.concatenate([weights, weights]), (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
            shape=(n, n),
        )
        return mat.tocsr()

    def weight(self, i: int, j: int) -> float:
        key = (i, j) if i < j else (j, i)
        return self.links.get(key, 0.0)

    def association_matrix(self) -> np.ndarray:
        """Dense symmetric matrix of association strengths, zero diagonal."""
        rows, cols, weights = self.edge_arrays
        n = self.node_count
        s = np.zeros((n, n))
        values = 2.0 * self.total * weights / (self.strengths[rows] * self.strengths[cols])
        s[rows, cols] = values
        s[cols, rows] = values
        return s

    def subnetwork(self, nodes: Iterable[int]) -> "Network":
        """Induced subnetwork on ``nodes``, keeping their relative order."""
        keep = sorted(set(int(i) for i in nodes))
        remap = {old: new for new, old in enumerate(keep)}
        links = {
            (remap[i], remap[j]): w for (i, j), w in self.links.items() if i in remap and j in remap
        }
        return Network([self.labels[i] for i in keep], links)


def build_network(edges: Iterable[EdgeRecord | tuple], drop_isolated: bool = False) -> Network:
    """Aggregate edge records into a :class:`Network`.

    Duplicate pairs are summed regardless of direction. Labels get dense
    indices in order of first appearance. Zero-weight pairs are dropped after
    aggregation; nodes left without links are an error unless
    ``drop_isolated`` is set, in which case they are removed.
    """
    index: dict[str, int] = {}
    totals: dict[tuple[int, int], float] = {}
    seen_any = False
    for record in edges:
        record = EdgeRecord(*record)
        seen_any = True
        where = f" (line {record.line})" if record.line is not None else ""
        try:
            w = float(record.weight)
        except (TypeError, ValueError):
            raise NetworkError(f"non-numeric weight {record.weight!r}{where}") from None
        if not math.isfinite(w) or w < 0:
            raise NetworkError(f"weight must be finite and >= 0, got {record.weight!r}{where}")
        src, dst = str(record.source), str(record.target)
        if src == dst:
            raise NetworkError(f"self-link on node {src!r}{where}")
        i = index.setdefault(src, len(index))
        j = index.setdefault(dst, len(index))
        key = (i, j) if i < j else (j, i)
        totals[key] = totals.get(key, 0.0) + w
    if not seen_any:
        raise NetworkError("edge list is empty")

    labels = list(index)
    links = {k: w for k, w in totals.items() if w > 0}
    if drop_isolated:
        linked = {i for pair in links for i in pair}
        if len(linked) < len(labels):
            dropped = [labels[i] for i in range(len(labels)) if i not in linked]
            logger.warning("dropping %d isolated node(s): %s", len(dropped), ", ".join(dropped))
            keep = sorted(linked)
            remap = {old: new for new, old in enumerate(keep)}
            labels = [labels[i] for i in keep]
            links = {(remap[i], remap[j]): w for (i, j), w in links.items()}
        if not labels:
            raise NetworkError("no linked nodes remain")
    return Network(labels, links)


def association_strength(net: Network, i: int, j: int) -> float:
    """Association strength ``2 m c_ij / (c_i c_j)`` of nodes ``i`` and ``j``."""
    n = net.node_count
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"node index out of range for n={n}")
    if i == j:
        raise ValueError("association strength is only defined for distinct nodes")
    c_ij = net.weight(i, j)
    if c_ij == 0:
        return 0.0
    return 2.0 * net.total * c_ij / (net.strengths[i] * net.strengths[j])


def connected_components(net: Network) -> list[list[int]]:
    """Components as sorted index lists, ordered by their smallest member."""
    _, labels = csgraph.connected_components(net.adjacency, directed=False)
    groups: dict[int, list[int]] = {}
    for node, comp in enumerate(labels):
        groups.setdefault(int(comp), []).append(node)
    return sorted(groups.values(), key=lambda members: members[0])


def largest_component(net: Network) -> Network:
    """Subnetwork on the largest component (ties go to the lowest-numbered one)."""
    comps = connected_components(net)
    if len(comps) == 1:
        return net
    best = max(comps, key=len)
    return net.subnetwork(best)


# --------------------------------------------------------------------------
# generators


def generate_appendix_b() -> Network:
    """The 31-node network used to contrast weighted and classic modularity.

    Nodes are labelled ``"1"`` to ``"31"``. Nodes 1-10 form a clique of
    weight 10, nodes 11-20 and 21-30 cliques of weight 100. Node 31 links to
    each of 1-10 with weight 20 and to each of 11-20 with weight 50.
    """
    links: dict[tuple[int, int], float] = {}
    groups = [(range(0, 10), 10.0), (range(10, 20), 100.0), (range(20, 30), 100.0)]
    for members, w in groups:
        for a in members:
            for b in members:
                if a < b:
                    links[(a, b)] = w
    for a in range(0, 10):
        links[(a, 30)] = 20.0
    for a in range(10, 20):
        links[(a, 30)] = 50.0
    return Network([str(k) for k in range(1, 32)], links)


def generate_ring_of_cliques(clique_count: int, clique_size: int) -> Network:
    """Unit-weight cliques on a ring, neighbours joined by a single bridge.

    The bridge from clique ``k`` leaves its last node and enters the first
    node of clique ``k + 1``. Labels read ``clique{k}:node{j}``.
    """
    if int(clique_count) != clique_count or clique_count < 3:
        raise ValueError(f"clique_count must be an integer >= 3, got {clique_count!r}")
    if int(clique_size) != clique_size or clique_size < 3:
        raise ValueError(f"clique_size must be an integer >= 3, got {clique_size!r}")
    q, k = int(clique_count), int(clique_size)
    labels = [f"clique{c}:node{j}" for c in range(q) for j in range(k)]
    links: dict[tuple[int, int], float] = {}
    for c in range(q):
        base = c * k
        for a in range(k):
            for b in range(a + 1, k):
                links[(base + a, base + b)] = 1.0
        tail = base + k - 1
        head = ((c + 1) % q) * k
        links[(min(tail, head), max(tail, head))] = 1.0
    return Network(labels, links)


def generate_planted_partition(
    group_count: int,
    group_size: int,
    p_in: float,
    p_out: float,
    seed: int = 0,
    max_weight: int = 1,
) -> tuple[Network, np.ndarray]:
    """Random network with planted groups, plus the planted group of each node.

    Each within-group pair is linked with probability ``p_in`` and each
    between-group pair with ``p_out``; weights are uniform integers in
    ``1..max_weight``. Nodes that end up isolated are tied to a random
    member of their own group.
    """
    if group_count < 1 or group_size < 2:
        raise ValueError("need group_count >= 1 and group_size >= 2")
    rng = np.random.default_rng(seed)
    n = group_count * group_size
    groups = np.repeat(np.arange(group_count), group_size)
    iu, ju = np.triu_indices(n, k=1)
    same = groups[iu] == groups[ju]
    prob = np.where(same, p_in, p_out)
    hit = rng.random(iu.size) < prob
    weights = rng.integers(1, max_weight + 1, size=iu.size)
    links = {(int(a), int(b)): float(w) for a, b, w in zip(iu[hit], ju[hit], weights[hit])}
    degree = np.zeros(n, dtype=int)
    for a, b in links:
        degree[a] += 1
        degree[b] += 1
    for node in np.flatnonzero(degree == 0):
        g = groups[node]
        mates = [m for m in range(g * group_size, (g + 1) * group_size) if m != node]
        other = int(rng.choice(mates))
        links[(min(node, other), max(node, other))] = 1.0
    labels = [f"g{groups[i]}n{i - groups[i] * group_size}" for i in range(n)]
    return Network(labels, links), groups


def generate_random_network(
    node_count: int, density: float, seed: int = 0, max_weight: int = 5
) -> Network:
    """Erdos-Renyi style network with integer weights in ``1..max_weight``.

    Every node without a link after sampling is joined to a random other
    node, so the result never has isolated nodes (it may be disconnected).
    """
    if node_count < 2:
        raise ValueError("node_count must be >= 2")
    rng = np.random.default_rng(seed)
    n = int(node_count)
    links: dict[tuple[int, int], float] = {}
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < density:
                links[(a, b)] = float(rng.integers(1, max_weight + 1))
    linked = {i for pair in links for i in pair}
    for node in range(n):
        if node not in linked:
            other = int(rng.choice([m for m in range(n) if m != node]))
            links[(min(node, other), max(node, other))] = float(rng.integers(1, max_weight + 1))
            linked.update((node, other))
    return Network([f"v{i}" for i in range(n)], links)
