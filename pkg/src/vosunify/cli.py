"""Command-line interface.

Exit status is 0 on success, 1 on bad input or usage, 2 when the request
cannot be satisfied (oracle beyond its size limit, mapping a disconnected
network without ``--largest-component``).
"""

from __future__ import annotations

import argparse
import logging
import secrets
import sys
from typing import Sequence

from . import __version__
from .clustering import (
    ORACLE_MAX_NODES,
    ClusterParams,
    clustering_quality,
    exhaustive_best_partition,
    gamma_sweep,
    optimize_clustering,
)
from .io import (
    FormatError,
    SvgOptions,
    combine,
    parse_edge_list,
    read_partition,
    render_svg,
    write_combined_json,
    write_edge_list,
    write_layout,
    write_partition,
)
from .mapping import MappingConfig, compute_layout
from .network import (
    NetworkError,
    build_network,
    connected_components,
    generate_appendix_b,
    generate_planted_partition,
    generate_ring_of_cliques,
    largest_component,
)

logger = logging.getLogger("vosunify")

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class Infeasible(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"gamma > 0 required, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _gamma_list(text: str) -> list[float]:
    return [_positive_float(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vosunify", description="Unified mapping and clustering of weighted networks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    source = _Parser(add_help=False)
    source.add_argument("input", nargs="?", default="-", help="edge-list TSV (default: standard input)")
    source.add_argument("--drop-isolated", action="store_true", help="drop nodes without links instead of failing")
    source.add_argument("--largest-component", action="store_true", help="keep only the largest connected component")
    source.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed (default: %(default)s)")
    source.add_argument("--random-seed", action="store_true", help="draw a fresh seed and report it")
    source.add_argument("--restarts", type=_positive_int, default=10)

    clus = _Parser(add_help=False)
    clus.add_argument("--gamma", type=_positive_float, default=1.0, help="resolution, gamma > 0 (default: 1)")
    clus.add_argument("--weights", choices=("unified", "classic"), default="unified")

    mapp = _Parser(add_help=False)
    mapp.add_argument("--dim", type=_positive_int, default=2)
    mapp.add_argument("--max-iter", type=_positive_int, default=1000)
    mapp.add_argument("--tol", type=float, default=MappingConfig.relative_tolerance)

    outs = _Parser(add_help=False)
    outs.add_argument("--out-layout")
    outs.add_argument("--out-clusters")
    outs.add_argument("--out-json")
    outs.add_argument("--out-svg")
    outs.add_argument("--svg-labels", action="store_true", help="draw node labels in the SVG")

    sub.add_parser("map", parents=[source, mapp, outs], help="layout only")
    sub.add_parser("cluster", parents=[source, clus, outs], help="partition only")
    sub.add_parser("run", parents=[source, clus, mapp, outs], help="layout and partition")
    q = sub.add_parser("quality", parents=[source, clus], help="quality of a given partition")
    q.add_argument("--partition", required=True, help="partition TSV (node, cluster)")
    sub.add_parser("oracle", parents=[source, clus, outs], help=f"exhaustive optimum, n <= {ORACLE_MAX_NODES}")
    sw = sub.add_parser("sweep", parents=[source, clus], help="cluster for several resolutions")
    sw.add_argument("--gammas", type=_gamma_list, required=True, help="comma-separated list, e.g. 0.5,1,2")
    sw.add_argument("--out-dir", help="also write one partition TSV per resolution here")

    gen = sub.add_parser("gen", help="write a synthetic edge list to standard output")
    gen.add_argument("which", choices=("appendix-b", "ring-of-cliques", "planted"))
    gen.add_argument("--cliques", type=int, default=10)
    gen.add_argument("--size", type=int, default=5)
    gen.add_argument("--groups", type=int, default=25)
    gen.add_argument("--p-in", type=float, default=0.3)
    gen.add_argument("--p-out", type=float, default=0.005)
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def _read_input(path: str, stdin) -> str:
    if path == "-":
        return stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load(args, stdin):
    net = build_network(parse_edge_list(_read_input(args.input, stdin)), drop_isolated=args.drop_isolated)
    if args.largest_component:
        comps = connected_components(net)
        if len(comps) > 1:
            logger.warning("keeping the largest of %d components", len(comps))
            net = largest_component(net)
    return net


def _seed(args) -> int:
    if args.random_seed:
        seed = secrets.randbelow(2**31)
        sys.stderr.write(f"seed\t{seed}\n")
        return seed
    return args.seed


def _cluster_params(args, seed: int) -> ClusterParams:
    return ClusterParams(gamma=args.gamma, weighting=args.weights, restarts=args.restarts, seed=seed)


def _map_config(args, seed: int) -> MappingConfig:
    return MappingConfig(
        dimension=args.dim,
        restarts=args.restarts,
        seed=seed,
        max_iterations=args.max_iter,
        relative_tolerance=args.tol,
    )


def _finish(args, net, layout, objective, part, quality, seed, stdout, primary: str) -> None:
    """Write every requested output; the ``primary`` format goes to stdout if not redirected."""
    labels = net.labels
    meta: dict = {"nodes": net.node_count, "seed": seed}
    if part is not None:
        meta.update(gamma=args.gamma, weighting=args.weights, quality=quality, clusters=part.cluster_count)
    if layout is not None:
        meta.update(dimension=layout.dimension, objective=objective)
    records = combine(labels, layout, part)
    texts = {}
    if layout is not None:
        texts["layout"] = write_layout(layout, labels)
    if part is not None:
        texts["clusters"] = write_partition(part, labels)
    texts["json"] = write_combined_json(records, meta)
    targets = {"layout": args.out_layout, "clusters": args.out_clusters, "json": args.out_json}
    for kind, text in texts.items():
        if targets[kind]:
            _write(targets[kind], text)
        elif kind == primary:
            stdout.write(text)
    if args.out_svg:
        if layout is None:
            raise UsageError("--out-svg needs coordinates; use 'map' or 'run'")
        _write(args.out_svg, render_svg(records, SvgOptions(labels=args.svg_labels)))


def _run(args, stdin, stdout) -> None:
    if args.command == "gen":
        if args.which == "appendix-b":
            net = generate_appendix_b()
        elif args.which == "ring-of-cliques":
            net = generate_ring_of_cliques(args.cliques, args.size)
        else:
            net, _ = generate_planted_partition(args.groups, args.size, args.p_in, args.p_out, seed=args.seed)
        stdout.write(write_edge_list(net.labels, net.links))
        return

    net = _load(args, stdin)
    seed = _seed(args)

    if args.command == "quality":
        with open(args.partition, encoding="utf-8") as fh:
            _, part = read_partition(fh.read(), net.labels)
        stdout.write(f"{clustering_quality(net, part, _cluster_params(args, seed)):.17g}\n")
        return

    if args.command == "sweep":
        params = ClusterParams(weighting=args.weights, restarts=args.restarts, seed=seed)
        stdout.write("gamma\tclusters\tquality\n")
        for gamma, part, quality in gamma_sweep(net, args.gammas, params):
            stdout.write(f"{gamma:g}\t{part.cluster_count}\t{quality:.17g}\n")
            if args.out_dir:
                _write(f"{args.out_dir}/partition_gamma_{gamma:g}.tsv", write_partition(part, net.labels))
        return

    layout = objective = part = quality = None
    if args.command in ("map", "run"):
        if len(connected_components(net)) > 1:
            raise Infeasible(
                f"network has {len(connected_components(net))} connected components; "
                "rerun with --largest-component to map the largest one"
            )
        layout, objective = compute_layout(net, _map_config(args, seed))
    if args.command in ("cluster", "run"):
        part, quality = optimize_clustering(net, _cluster_params(args, seed))
    if args.command == "oracle":
        if net.node_count > ORACLE_MAX_NODES:
            raise Infeasible(f"oracle is limited to n <= {ORACLE_MAX_NODES} nodes; network has {net.node_count}")
        part, quality = exhaustive_best_partition(net, _cluster_params(args, seed))
    if part is not None:
        sys.stderr.write(f"quality\t{quality:.17g}\n")
        sys.stderr.write(f"clusters\t{part.cluster_count}\n")
    if layout is not None:
        sys.stderr.write(f"objective\t{objective:.17g}\n")

    primary = {"map": "layout", "cluster": "clusters", "oracle": "clusters", "run": "json"}[args.command]
    _finish(args, net, layout, objective, part, quality, seed, stdout, primary)


def main(argv: Sequence[str] | None = None, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _run(args, stdin, stdout)
    except UsageError as exc:
        sys.stderr.write(f"vosunify: error: {exc}\n")
        return 1
    except (FormatError, NetworkError, ValueError, OSError) as exc:
        sys.stderr.write(f"vosunify: error: {exc}\n")
        return 1
    except Infeasible as exc:
        sys.stderr.write(f"vosunify: cannot do that: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
