"""Unified mapping and clustering of bibliometric networks.

One objective, ``sum s_ij d_ij^2 - sum d_ij`` over node pairs, yields a map
layout with Euclidean distances and a resolution-parameterized weighted
modularity clustering with 0 / (1/gamma) distances.
"""

from .clustering import (
    ClusterParams,
    Partition,
    clustering_cost,
    clustering_quality,
    exhaustive_best_partition,
    gamma_sweep,
    local_move_refinement,
    optimize_clustering,
    quality_from_cost,
    restricted_growth_strings,
)
from .io import (
    CombinedRecord,
    SvgOptions,
    combine,
    parse_edge_list,
    read_combined_json,
    read_layout,
    read_partition,
    render_svg,
    write_combined_json,
    write_edge_list,
    write_layout,
    write_partition,
)
from .mapping import (
    DisconnectedNetworkError,
    Layout,
    MappingConfig,
    canonicalize_layout,
    compute_layout,
    initial_layout,
    majorization_step,
    mapping_objective,
    run_majorization,
)
from .network import (
    EdgeRecord,
    Network,
    NetworkError,
    association_strength,
    build_network,
    connected_components,
    generate_appendix_b,
    generate_planted_partition,
    generate_random_network,
    generate_ring_of_cliques,
    largest_component,
)

__version__ = "0.1.0"
