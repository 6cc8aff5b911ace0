"""Resolution-parameterized weighted modularity clustering.

The quality of a partition is

    Q = 1/(2m) * sum_{i<j, same cluster} w_ij * (c_ij - gamma * c_i * c_j / (2m))

with ``w_ij = 2m / (c_i c_j)`` for the unified weighting and ``w_ij = 1`` for
the classic one. Both cases share the form ``(A_ij - gamma * r_i * r_j) / (2m)``
with a sparse ``A`` and a per-node size ``r``, which is what the optimizer
works with:

    unified:  A_ij = 2m c_ij / (c_i c_j),  r_i = 1
    classic:  A_ij = c_ij,                 r_i = c_i / sqrt(2m)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .network import Network

WEIGHTINGS = ("unified", "classic")

# strict-improvement threshold on quality for every accept decision
IMPROVEMENT_EPS = 1e-12

ORACLE_MAX_NODES = 12

# random kicks tried per restart after the first descent
PERTURBATIONS = 3


@dataclass(frozen=True)
class Partition:
    """Cluster label per node, canonically numbered from 0.

    Use :meth:`from_labels` to build one from arbitrary labels.
    """

    assignment: tuple[int, ...]

    def __post_init__(self):
        expected = 0
        for label in self.assignment:
            if label > expected or label < 0:
                raise ValueError("assignment is not in canonical first-appearance order")
            if label == expected:
                expected += 1

    @classmethod
    def from_labels(cls, labels: Iterable) -> "Partition":
        mapping: dict = {}
        out = []
        for label in labels:
            if isinstance(label, np.generic):
                label = label.item()
            out.append(mapping.setdefault(label, len(mapping)))
        return cls(tuple(out))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def whole(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @property
    def cluster_count(self) -> int:
        return max(self.assignment) + 1 if self.assignment else 0

    def __len__(self) -> int:
        return len(self.assignment)

    def clusters(self) -> list[list[int]]:
        """Member lists per cluster, in label order."""
        out: list[list[int]] = [[] for _ in range(self.cluster_count)]
        for node, label in enumerate(self.assignment):
            out[label].append(node)
        return out


@dataclass(frozen=True)
class ClusterParams:
    gamma: float = 1.0
    weighting: str = "unified"
    restarts: int = 10
    seed: int = 0

    def __post_init__(self):
        if not (isinstance(self.gamma, (int, float)) and math.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"resolution must satisfy gamma > 0, got {self.gamma!r}")
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}, got {self.weighting!r}")
        if int(self.restarts) != self.restarts or self.restarts < 1:
            raise ValueError(f"restarts must be a positive integer, got {self.restarts!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")


def _check_length(net: Network, part: Partition) -> None:
    if len(part) != net.node_count:
        raise ValueError(f"partition has {len(part)} entries for {net.node_count} nodes")


class _QualityModel:
    """Sparse ``A``/``r`` decomposition of the quality for one network and params."""

    def __init__(self, net: Network, gamma: float, weighting: str):
        self.n = net.node_count
        self.gamma = float(gamma)
        two_m = 2.0 * net.total
        self.inv_two_m = 1.0 / two_m
        rows, cols, c = net.edge_arrays
        strengths = net.strengths
        if weighting == "unified":
            a = two_m * c / (strengths[rows] * strengths[cols])
            r = np.ones(self.n)
        else:
            a = c.copy()
            r = strengths / math.sqrt(two_m)
        self.rows, self.cols, self.a = rows, cols, a
        self.r = r
        self.r_list = r.tolist()
        nbrs: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for i, j, w in zip(rows.tolist(), cols.tolist(), a.tolist()):
            nbrs[i].append((j, w))
            nbrs[j].append((i, w))
        self.nbrs = nbrs

    def quality(self, assignment: Sequence[int]) -> float:
        labels = np.asarray(assignment)
        same = labels[self.rows] == labels[self.cols]
        internal = math.fsum(self.a[same].tolist())
        size = np.bincount(labels, weights=self.r)
        sq = np.bincount(labels, weights=self.r * self.r)
        null = math.fsum(((size * size - sq) / 2.0).tolist())
        return (internal - self.gamma * null) * self.inv_two_m


class _State:
    """Mutable assignment with per-cluster size sums, used by the optimizer."""

    def __init__(self, model: _QualityModel, assignment: Sequence[int]):
        self.model = model
        n = model.n
        self.assign = [int(x) for x in assignment]
        self.size = [0.0] * (n + 1)
        self.count = [0] * (n + 1)
        r = model.r_list
        for i, label in enumerate(self.assign):
            self.size[label] += r[i]
            self.count[label] += 1

    def copy(self) -> "_State":
        other = object.__new__(_State)
        other.model = self.model
        other.assign = list(self.assign)
        other.size = list(self.size)
        other.count = list(self.count)
        return other

    def empty_label(self) -> int:
        return self.count.index(0)

    def move(self, node: int, label: int) -> None:
        old = self.assign[node]
        ri = self.model.r_list[node]
        self.size[old] -= ri
        self.count[old] -= 1
        if self.count[old] == 0:
            self.size[old] = 0.0
        self.size[label] += ri
        self.count[label] += 1
        self.assign[node] = label

    def labels_in_use(self) -> list[int]:
        return [label for label, c in enumerate(self.count) if c > 0]


def _local_move(state: _State, nodes: Sequence[int], allowed: tuple[int, int] | None = None) -> bool:
    """Single-node moves until a full scan of ``nodes`` makes none.

    Without ``allowed`` a node may join any neighbouring cluster or an empty
    one; with ``allowed`` it may only switch between the two given labels.
    Returns whether anything moved.
    """
    model = state.model
    gamma = model.gamma
    threshold = IMPROVEMENT_EPS / model.inv_two_m
    nbrs, r = model.nbrs, model.r_list
    assign, size, count = state.assign, state.size, state.count
    moved_any = False
    while True:
        moved = False
        for i in nodes:
            current = assign[i]
            if allowed is not None and current not in allowed:
                continue
            links: dict[int, float] = {}
            for j, w in nbrs[i]:
                label = assign[j]
                links[label] = links.get(label, 0.0) + w
            ri = r[i]
            stay = links.get(current, 0.0) - gamma * ri * (size[current] - ri)
            best_gain = threshold
            best_label = -1
            if allowed is None:
                candidates = sorted(links)
            else:
                candidates = list(allowed)
            for label in candidates:
                if label == current:
                    continue
                gain = links.get(label, 0.0) - gamma * ri * size[label] - stay
                if gain > best_gain:
                    best_gain, best_label = gain, label
            if allowed is None and count[current] > 1:
                gain = -stay
                if gain > best_gain:
                    best_gain, best_label = gain, state.empty_label()
            if best_label >= 0:
                state.move(i, best_label)
                moved = True
        if not moved:
            return moved_any
        moved_any = True


def _bisect(state: _State, label: int, members: list[int], rng: np.random.Generator) -> _State:
    """Trial split of cluster ``label`` into two, returned as a new state."""
    model = state.model
    trial = state.copy()
    new_label = trial.empty_label()
    order = [members[k] for k in rng.permutation(len(members))]
    first, second, rest = order[0], order[1], order[2:]
    # park the non-seed members in a scratch label while they are placed
    scratch = len(trial.count) - 1
    for node in rest:
        trial.move(node, scratch)
    trial.move(second, new_label)
    gamma = model.gamma
    for node in rest:
        ri = model.r_list[node]
        to_old = to_new = 0.0
        for j, w in model.nbrs[node]:
            lj = trial.assign[j]
            if lj == label:
                to_old += w
            elif lj == new_label:
                to_new += w
        gain_old = to_old - gamma * ri * trial.size[label]
        gain_new = to_new - gamma * ri * trial.size[new_label]
        trial.move(node, new_label if gain_new > gain_old else label)
    _local_move(trial, members, allowed=(label, new_label))
    return trial


def _pair_refine(state: _State, quality: float, rng: np.random.Generator) -> tuple[_State, float, bool]:
    """Merge each pair of linked clusters, optionally re-split, keep strict gains."""
    model = state.model
    changed = False
    pairs = set()
    for i, j in zip(model.rows.tolist(), model.cols.tolist()):
        a, b = state.assign[i], state.assign[j]
        if a != b:
            pairs.add((min(a, b), max(a, b)))
    for a, b in sorted(pairs):
        if state.count[a] == 0 or state.count[b] == 0:
            continue
        merged = state.copy()
        for node, label in enumerate(state.assign):
            if label == b:
                merged.move(node, a)
        best, best_quality = merged, model.quality(merged.assign)
        members = [i for i, x in enumerate(merged.assign) if x == a]
        resplit = _bisect(merged, a, members, rng)
        resplit_quality = model.quality(resplit.assign)
        if resplit_quality > best_quality:
            best, best_quality = resplit, resplit_quality
        if best_quality > quality + IMPROVEMENT_EPS:
            state, quality = best, best_quality
            changed = True
    return state, quality, changed


def _descend(state: _State, quality: float, rng: np.random.Generator) -> tuple[_State, float]:
    """Split, local-move and pair-refine until a full round changes nothing."""
    model = state.model
    all_nodes = list(range(model.n))
    while True:
        changed = False
        for label in state.labels_in_use():
            members = [i for i, x in enumerate(state.assign) if x == label]
            if len(members) < 2:
                continue
            trial = _bisect(state, label, members, rng)
            trial_quality = model.quality(trial.assign)
            if trial_quality > quality + IMPROVEMENT_EPS:
                state, quality = trial, trial_quality
                changed = True
        if _local_move(state, all_nodes):
            quality = model.quality(state.assign)
            changed = True
        if not changed:
            state, quality, changed = _pair_refine(state, quality, rng)
        if not changed:
            return state, quality


def _perturb(state: _State, rng: np.random.Generator) -> _State | None:
    """Merge a random pair of linked clusters and split the union at random."""
    model = state.model
    pairs = set()
    for i, j in zip(model.rows.tolist(), model.cols.tolist()):
        a, b = state.assign[i], state.assign[j]
        if a != b:
            pairs.add((min(a, b), max(a, b)))
    if not pairs:
        return None
    a, b = sorted(pairs)[int(rng.integers(len(pairs)))]
    out = state.copy()
    for node, label in enumerate(state.assign):
        if label in (a, b):
            out.move(node, a if rng.random() < 0.5 else b)
    return out


def _divisive_run(model: _QualityModel, rng: np.random.Generator, perturbations: int) -> list[int]:
    state = _State(model, [0] * model.n)
    state, quality = _descend(state, model.quality(state.assign), rng)
    for _ in range(perturbations):
        kicked = _perturb(state, rng)
        if kicked is None:
            break
        trial, trial_quality = _descend(kicked, model.quality(kicked.assign), rng)
        if trial_quality > quality + IMPROVEMENT_EPS:
            state, quality = trial, trial_quality
    return state.assign


def clustering_quality(net: Network, part: Partition, params: ClusterParams) -> float:
    """Weighted modularity of ``part`` under ``params`` (gamma and weighting)."""
    _check_length(net, part)
    return _QualityModel(net, params.gamma, params.weighting).quality(part.assignment)


def clustering_cost(net: Network, part: Partition, gamma: float) -> float:
    """Value of the unified objective when distances are 0 inside and 1/gamma between clusters.

    ``(1/gamma) * sum_{i<j, different clusters} (s_ij / gamma - 1)``
    """
    _check_length(net, part)
    if not gamma > 0:
        raise ValueError(f"resolution must satisfy gamma > 0, got {gamma!r}")
    labels = np.asarray(part.assignment)
    iu, ju = np.triu_indices(net.node_count, k=1)
    apart = labels[iu] != labels[ju]
    s = net.association_matrix()[iu, ju]
    terms = s[apart] / gamma - 1.0
    return math.fsum(terms.tolist()) / gamma


def quality_from_cost(net: Network, cost: float, gamma: float) -> float:
    """Map a clustering cost onto the unified-weighting quality scale.

    ``-(gamma^2 / 2m) * cost + (1/2m) * sum_{i<j} (s_ij - gamma)``; the
    multiplier is negative, so minimizing cost maximizes quality.
    """
    n = net.node_count
    two_m = 2.0 * net.total
    rows, cols, c = net.edge_arrays
    s_sum = math.fsum((two_m * c / (net.strengths[rows] * net.strengths[cols])).tolist())
    offset = (s_sum - gamma * n * (n - 1) / 2.0) / two_m
    return -(gamma * gamma / two_m) * cost + offset


def local_move_refinement(net: Network, part: Partition, params: ClusterParams) -> Partition:
    """Improve ``part`` by single-node moves; never lowers the quality."""
    _check_length(net, part)
    model = _QualityModel(net, params.gamma, params.weighting)
    state = _State(model, part.assignment)
    _local_move(state, list(range(net.node_count)))
    return Partition.from_labels(state.assign)


def optimize_clustering(net: Network, params: ClusterParams | None = None) -> tuple[Partition, float]:
    """Maximize the quality with a divisive algorithm plus local moving.

    Each restart starts from one all-encompassing cluster and alternates
    randomized bisection of every cluster (kept only when the quality
    strictly improves) with a global local-moving pass, until a full round
    changes nothing. Restart ``k`` draws from a generator seeded with
    ``params.seed + k``. The best restart wins; ties go to the earliest one.
    """
    params = params or ClusterParams()
    model = _QualityModel(net, params.gamma, params.weighting)
    best: list[int] | None = None
    best_quality = -math.inf
    for k in range(params.restarts):
        rng = np.random.default_rng(params.seed + k)
        assignment = _divisive_run(model, rng, PERTURBATIONS)
        quality = model.quality(assignment)
        if quality > best_quality + IMPROVEMENT_EPS:
            best, best_quality = assignment, quality
    return Partition.from_labels(best), best_quality


def gamma_sweep(
    net: Network, gammas: Sequence[float], params: ClusterParams | None = None
) -> list[tuple[float, Partition, float]]:
    """Run :func:`optimize_clustering` once per resolution, same seed throughout."""
    params = params or ClusterParams()
    gammas = list(gammas)
    if not gammas:
        raise ValueError("need at least one resolution value")
    for g in gammas:
        if not g > 0:
            raise ValueError(f"resolution must satisfy gamma > 0, got {g!r}")
    results = []
    for g in gammas:
        run_params = ClusterParams(float(g), params.weighting, params.restarts, params.seed)
        part, quality = optimize_clustering(net, run_params)
        results.append((float(g), part, quality))
    return results


# --------------------------------------------------------------------------
# exhaustive oracle


@lru_cache(maxsize=16)
def restricted_growth_strings(n: int) -> np.ndarray:
    """All set partitions of ``n`` items as restricted growth strings.

    Rows are in lexicographic order; the array is read-only and cached.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    strings = np.zeros((1, 1), dtype=np.int8)
    highest = np.zeros(1, dtype=np.int8)
    for _ in range(1, n):
        blocks, maxes = [], []
        # candidate next value v is valid when v <= highest + 1
        for v in range(int(highest.max()) + 2):
            ok = highest + 1 >= v
            rows = strings[ok]
            col = np.full((rows.shape[0], 1), v, dtype=np.int8)
            blocks.append(np.hstack([rows, col]))
            maxes.append(np.maximum(highest[ok], v))
        strings = np.vstack(blocks)
        highest = np.concatenate(maxes)
        order = np.lexsort(strings.T[::-1])
        strings, highest = strings[order], highest[order]
    strings.setflags(write=False)
    return strings


def _pair_values(net: Network, gamma: float, weighting: str) -> np.ndarray:
    """Dense ``w_ij (c_ij - gamma c_i c_j / 2m) / 2m`` straight from the definition."""
    n = net.node_count
    two_m = 2.0 * net.total
    c = np.zeros((n, n))
    for (i, j), w in net.links.items():
        c[i, j] = c[j, i] = w
    outer = np.outer(net.strengths, net.strengths)
    w = two_m / outer if weighting == "unified" else np.ones((n, n))
    return w * (c - gamma * outer / two_m) / two_m


def exhaustive_best_partition(
    net: Network, params: ClusterParams | None = None, chunk: int = 200_000
) -> tuple[Partition, float]:
    """Best partition by enumerating every set partition (``n <= 12``).

    Partitions whose quality is within ``IMPROVEMENT_EPS`` of the maximum
    count as tied; the lexicographically smallest of them is returned.
    """
    params = params or ClusterParams()
    n = net.node_count
    if n > ORACLE_MAX_NODES:
        raise ValueError(f"exhaustive search is limited to n <= {ORACLE_MAX_NODES} nodes, got {n}")
    if n == 1:
        return Partition((0,)), 0.0
    strings = restricted_growth_strings(n)
    iu, ju = np.triu_indices(n, k=1)
    values = _pair_values(net, params.gamma, params.weighting)[iu, ju]
    qualities = np.empty(strings.shape[0])
    for start in range(0, strings.shape[0], chunk):
        block = strings[start : start + chunk]
        qualities[start : start + chunk] = (block[:, iu] == block[:, ju]) @ values
    top = qualities.max()
    # rows are lexicographically sorted, so the first near-tie is the smallest
    winner = int(np.flatnonzero(qualities >= top - IMPROVEMENT_EPS)[0])
    return Partition(tuple(int(x) for x in strings[winner])), float(qualities[winner])
