"""Map and cluster a planted-partition network, then draw it.

Writes ``planted.svg`` and ``planted.json`` to the current directory.
"""

import time

import numpy as np

from vosunify import (
    ClusterParams,
    MappingConfig,
    combine,
    compute_layout,
    generate_planted_partition,
    optimize_clustering,
    render_svg,
    write_combined_json,
    SvgOptions,
)

net, planted = generate_planted_partition(8, 25, p_in=0.3, p_out=0.01, seed=4)
print(f"{net.node_count} nodes, {net.edge_count} links")

t0 = time.perf_counter()
layout, objective = compute_layout(net, MappingConfig(restarts=2))
print(f"layout objective {objective:.4f} ({time.perf_counter() - t0:.1f} s)")

t0 = time.perf_counter()
part, quality = optimize_clustering(net, ClusterParams(gamma=1.0, restarts=3))
print(f"{part.cluster_count} clusters, quality {quality:.4f} ({time.perf_counter() - t0:.1f} s)")

# how well do clusters line up with the planted groups?
table = np.zeros((planted.max() + 1, part.cluster_count), dtype=int)
np.add.at(table, (planted, np.asarray(part.assignment)), 1)
print("planted group x found cluster counts:\n", table)

# distances on the map should be shorter inside clusters
d = layout.distances()
same = np.equal.outer(part.assignment, part.assignment)
np.fill_diagonal(same, False)
print(f"mean distance within clusters {d[same].mean():.3f}, between {d[~same & (d > 0)].mean():.3f}")

records = combine(net.labels, layout, part)
with open("planted.json", "w") as fh:
    fh.write(write_combined_json(records, {"gamma": 1.0, "quality": quality, "objective": objective}))
with open("planted.svg", "w") as fh:
    fh.write(render_svg(records, SvgOptions(radius=4)))
print("wrote planted.json and planted.svg")
