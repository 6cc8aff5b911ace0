"""Small cliques on a ring, seen at several resolutions.

Cliques joined in a ring by single bridges are the textbook case for the
resolution limit: with enough cliques, classic modularity at gamma = 1
prefers to merge neighbours. Raising gamma splits them again.
"""

import numpy as np

from vosunify import ClusterParams, gamma_sweep, generate_ring_of_cliques

gammas = [0.25, 0.5, 1.0, 2.0, 4.0]

for cliques in (10, 30):
    net = generate_ring_of_cliques(cliques, 5)
    # each clique has strength 22 and one bridge to each neighbour, so merging
    # two neighbours raises the quality only while gamma < 2m / 22**2
    print(f"\nring of {cliques} cliques of 5 nodes (2m = {2 * net.total:g})")
    print(f"merge threshold gamma = {2 * net.total / 22**2:.4f}")
    print("gamma  clusters  sizes")
    for gamma, part, quality in gamma_sweep(net, gammas, ClusterParams(weighting="classic")):
        sizes = np.bincount(part.assignment)
        print(f"{gamma:5g}  {part.cluster_count:8d}  {sorted(set(sizes.tolist()))}")
