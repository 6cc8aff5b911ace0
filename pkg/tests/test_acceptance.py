"""End-to-end acceptance checks, one test per criterion.

A summary line per criterion is printed at the end of the pytest run.
"""

import json
import time

import numpy as np
import pytest

from conftest import APPENDIX_B_CLASSIC, APPENDIX_B_UNIFIED, brute_quality, complete_graph, fd_gradient, groups_of
from vosunify import (
    ClusterParams,
    MappingConfig,
    Partition,
    build_network,
    clustering_cost,
    clustering_quality,
    combine,
    compute_layout,
    exhaustive_best_partition,
    gamma_sweep,
    generate_appendix_b,
    generate_planted_partition,
    generate_random_network,
    generate_ring_of_cliques,
    initial_layout,
    largest_component,
    optimize_clustering,
    quality_from_cost,
    read_combined_json,
    render_svg,
    restricted_growth_strings,
    run_majorization,
    write_combined_json,
)

criterion = pytest.mark.criterion
GAMMAS = (0.5, 1.0, 2.0)


def random_partition(n, rng):
    k = int(rng.integers(1, n + 1))
    return Partition.from_labels(rng.integers(0, k, size=n))


@criterion(1, "31-node example, unified weighting: node 31 joins nodes 1-10")
def test_c1_appendix_b_unified():
    net = generate_appendix_b()
    t0 = time.perf_counter()
    part, _ = optimize_clustering(net, ClusterParams(weighting="unified"))
    elapsed = time.perf_counter() - t0
    assert groups_of(part) == APPENDIX_B_UNIFIED
    assert elapsed < 1.0, f"{elapsed:.2f} s"


@criterion(2, "31-node example, classic weighting: node 31 joins nodes 11-20")
def test_c2_appendix_b_classic():
    net = generate_appendix_b()
    t0 = time.perf_counter()
    part, _ = optimize_clustering(net, ClusterParams(weighting="classic"))
    elapsed = time.perf_counter() - t0
    assert groups_of(part) == APPENDIX_B_CLASSIC
    assert elapsed < 1.0, f"{elapsed:.2f} s"


@criterion(3, "31-node example: quality ordering flips with the weighting")
def test_c3_quality_ordering():
    net = generate_appendix_b()
    first = Partition.from_labels([0] * 10 + [1] * 10 + [2] * 10 + [0])
    second = Partition.from_labels([0] * 10 + [1] * 10 + [2] * 10 + [1])
    for weighting, better, worse in (("unified", first, second), ("classic", second, first)):
        params = ClusterParams(weighting=weighting)
        hi, lo = clustering_quality(net, better, params), clustering_quality(net, worse, params)
        # the oracle sums pair by pair in plain Python
        assert hi == pytest.approx(brute_quality(net, better.assignment, 1.0, weighting), abs=1e-12)
        assert lo == pytest.approx(brute_quality(net, worse.assignment, 1.0, weighting), abs=1e-12)
        assert hi > lo


def enumerate_cost_and_quality(net, gamma):
    """Cost and unified quality of every set partition, vectorized from the definitions."""
    n = net.node_count
    strings = restricted_growth_strings(n)
    iu, ju = np.triu_indices(n, k=1)
    same = strings[:, iu] == strings[:, ju]
    c = np.asarray(net.strengths, dtype=float)
    two_m = c.sum()
    a = np.array([net.weight(i, j) for i, j in zip(iu, ju)])
    s = two_m * a / (c[iu] * c[ju])
    cost = (~same) @ (s / gamma - 1.0) / gamma
    quality = same @ (s - gamma) / two_m
    return cost, quality


@criterion(4, "cost and unified quality are affinely related; same optimum")
def test_c4_affine_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    sizes = [int(rng.integers(3, 16)) for _ in range(20)]
    worst = 0.0
    exhaustive_checked = 0
    for k, n in enumerate(sizes):
        net = generate_random_network(n, float(rng.uniform(0.2, 0.8)), seed=k)
        parts = [random_partition(n, rng) for _ in range(50)]
        for gamma in GAMMAS:
            params = ClusterParams(gamma)
            for part in parts:
                q = clustering_quality(net, part, params)
                mapped = quality_from_cost(net, clustering_cost(net, part, gamma), gamma)
                worst = max(worst, abs(mapped - q))
            if n <= 8:
                cost, quality = enumerate_cost_and_quality(net, gamma)
                arg_cost = set(np.flatnonzero(cost <= cost.min() + 1e-12))
                arg_quality = set(np.flatnonzero(quality >= quality.max() - 1e-12))
                assert arg_cost == arg_quality, (k, gamma)
                exhaustive_checked += 1
    elapsed = time.perf_counter() - t0
    assert len(sizes) * 50 == 1000
    assert exhaustive_checked > 0
    assert worst < 1e-12, worst
    assert elapsed < 30, f"{elapsed:.1f} s"


@criterion(5, "heuristic matches the exhaustive optimum")
def test_c5_oracle_equivalence():
    t0 = time.perf_counter()
    total = default_hits = full_hits = 0
    misses = []
    for k in range(100):
        rng = np.random.default_rng(1000 + k)
        n = int(rng.integers(4, 11))
        net = generate_random_network(n, float(rng.uniform(0.2, 0.7)), seed=k)
        for gamma in GAMMAS:
            for weighting in ("unified", "classic"):
                _, best = exhaustive_best_partition(net, ClusterParams(gamma, weighting))
                _, q10 = optimize_clustering(net, ClusterParams(gamma, weighting))
                _, q50 = optimize_clustering(net, ClusterParams(gamma, weighting, restarts=50))
                total += 1
                default_hits += abs(q10 - best) <= 1e-9
                full_hits += abs(q50 - best) <= 1e-9
                if abs(q50 - best) > 1e-9:
                    misses.append((k, gamma, weighting))
    elapsed = time.perf_counter() - t0
    assert default_hits >= 0.98 * total, f"{default_hits}/{total} at default restarts"
    assert full_hits == total, f"misses at restarts=50: {misses}"
    assert elapsed < 120, f"{elapsed:.1f} s"


@criterion(6, "two-node mapping reaches the closed-form optimum")
def test_c6_two_node_optimum():
    net = build_network([("A", "B", 1)])
    layout, value = compute_layout(net)
    # s = 2, so 2 d^2 - d is smallest at d = 1/4 with value -1/8
    assert np.linalg.norm(layout.coordinates[0] - layout.coordinates[1]) == pytest.approx(0.25, abs=1e-6)
    assert value == pytest.approx(-0.125, abs=1e-9)


def mapping_test_networks():
    nets = {
        "single link": build_network([("A", "B", 1)]),
        "K4": complete_graph(4),
        "K6 weighted": build_network(
            [(f"v{i}", f"v{j}", 1 + (i * j) % 4) for i in range(6) for j in range(i + 1, 6)]
        ),
        "ring 4x4": generate_ring_of_cliques(4, 4),
        "ring 10x5": generate_ring_of_cliques(10, 5),
        "appendix B main component": largest_component(generate_appendix_b()),
        "planted 4x6": largest_component(generate_planted_partition(4, 6, 0.7, 0.05, seed=2)[0]),
    }
    for seed in range(5):
        nets[f"random {seed}"] = largest_component(generate_random_network(12, 0.3, seed=seed))
    return nets


@criterion(7, "mapping descends monotonically and converges to a stationary point")
def test_c7_descent_and_stationarity():
    failures = []
    for name, net in mapping_test_networks().items():
        for dim in (1, 2, 3):
            _, trace = run_majorization(net, initial_layout(net.node_count, dim, seed=dim))
            rises = np.diff(trace)
            if rises.max(initial=-np.inf) > 1e-12:
                failures.append(f"{name} p={dim}: objective rose by {rises.max():.3g}")
        layout, _ = compute_layout(net, MappingConfig(restarts=3))
        grad = np.abs(fd_gradient(net, layout.coordinates.copy())).max()
        if grad >= 1e-3:
            failures.append(f"{name}: gradient {grad:.3g}")
    assert not failures, failures


@criterion(8, "ring of cliques: gamma=1 merges cliques, a larger gamma separates all ten")
def test_c8_resolution_limit_escape():
    net = generate_ring_of_cliques(10, 5)
    cliques = {frozenset(range(5 * c, 5 * c + 5)) for c in range(10)}
    t0 = time.perf_counter()
    results = gamma_sweep(net, [1.0, 2.0, 4.0, 8.0, 16.0], ClusterParams(weighting="classic"))
    elapsed = time.perf_counter() - t0
    at_one = results[0][1].cluster_count
    separated = [g for g, part, _ in results if groups_of(part) == cliques]
    assert separated, "no resolution up to 16 recovers the ten cliques"
    assert elapsed < 10, f"{elapsed:.1f} s"
    assert at_one < 10, f"gamma=1 gives {at_one} clusters; cliques separate at gamma in {separated}"


@criterion(9, "1000-node planted partition, map + cluster + export at gamma=2")
def test_c9_planted_smoke():
    net, groups = generate_planted_partition(25, 40, 0.3, 0.005, seed=1, max_weight=3)
    assert net.node_count == 1000
    t0 = time.perf_counter()
    config = MappingConfig(restarts=1, max_iterations=500)
    layout, objective = compute_layout(net, config)
    params = ClusterParams(gamma=2.0, restarts=3)
    part, quality = optimize_clustering(net, params)
    records = combine(net.labels, layout, part)
    text = write_combined_json(records, {"gamma": 2.0, "quality": quality, "objective": objective})
    svg = render_svg(records)
    elapsed = time.perf_counter() - t0

    assert elapsed < 60, f"{elapsed:.1f} s"
    # mapping: finite, descending from its start
    _, trace = run_majorization(net, initial_layout(1000, 2, config.seed), max_iterations=20)
    assert np.all(np.diff(trace) <= 1e-12)
    assert objective <= trace[-1] + 1e-9
    # clustering: planted groups recovered and quality recomputes
    assert groups_of(part) == groups_of(Partition.from_labels(groups))
    assert clustering_quality(net, part, params) == pytest.approx(quality, abs=1e-12)
    # exports agree with the in-memory results
    back, meta = read_combined_json(text)
    assert len(back) == 1000 and meta["quality"] == quality
    assert Partition.from_labels(r.cluster for r in back) == part
    np.testing.assert_allclose(np.array([r.coordinates for r in back]), layout.coordinates, atol=1e-12)
    assert svg.count("<circle") == 1000
    assert json.loads(text)["meta"]["gamma"] == 2
