"""Where does node 31 go?

Node 31 links to both of the first two groups in the 31-node example
network. Weighted modularity and classic modularity disagree about it.
Run with ``python demos/weighting_contrast.py``.
"""

from vosunify import ClusterParams, Partition, clustering_quality, generate_appendix_b, optimize_clustering

net = generate_appendix_b()
print(f"{net.node_count} nodes, total link weight {net.total:g}")
print("strengths of nodes 1, 11, 21, 31:", [float(net.strengths[i]) for i in (0, 10, 20, 30)])

# %% the two candidate partitions differ only in node 31
with_first = Partition.from_labels([0] * 10 + [1] * 10 + [2] * 10 + [0])
with_second = Partition.from_labels([0] * 10 + [1] * 10 + [2] * 10 + [1])

for weighting in ("unified", "classic"):
    params = ClusterParams(weighting=weighting)
    q1 = clustering_quality(net, with_first, params)
    q2 = clustering_quality(net, with_second, params)
    print(f"{weighting:>8}: 31 with 1-10 -> {q1:.6f}   31 with 11-20 -> {q2:.6f}")

# %% the optimizer agrees with the comparison above
for weighting in ("unified", "classic"):
    part, quality = optimize_clustering(net, ClusterParams(weighting=weighting))
    home = part.assignment[30]
    partners = [net.labels[i] for i in range(30) if part.assignment[i] == home]
    print(f"{weighting:>8}: node 31 clustered with nodes {partners[0]}..{partners[-1]} (Q = {quality:.6f})")
