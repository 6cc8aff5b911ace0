"""Edge-list parsing and writers for layouts, partitions, JSON and SVG."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .clustering import Partition
from .mapping import Layout
from .network import EdgeRecord


class FormatError(ValueError):
    """Malformed input text."""


def _text(source: str | IO[str]) -> str:
    return source if isinstance(source, str) else source.read()


def parse_edge_list(source: str | IO[str]) -> list[EdgeRecord]:
    """Parse ``source<TAB>target[<TAB>weight]`` lines.

    Blank lines and lines starting with ``#`` are skipped. A missing weight
    means 1.0. Records carry their 1-based line number.
    """
    edges = []
    for number, raw in enumerate(_text(source).splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3) or not fields[0] or not fields[1]:
            raise FormatError(f"line {number}: expected source<TAB>target[<TAB>weight], got {line!r}")
        weight = 1.0
        if len(fields) == 3:
            try:
                weight = float(fields[2])
            except ValueError:
                raise FormatError(f"line {number}: weight {fields[2]!r} is not a number") from None
            if not math.isfinite(weight) or weight < 0:
                raise FormatError(f"line {number}: weight must be finite and >= 0, got {fields[2]!r}")
        edges.append(EdgeRecord(fields[0], fields[1], weight, number))
    return edges


def write_edge_list(labels: Sequence[str], links: dict[tuple[int, int], float]) -> str:
    """Inverse of :func:`parse_edge_list` for a network's links, sorted by pair."""
    out = []
    for (i, j) in sorted(links):
        out.append(f"{labels[i]}\t{labels[j]}\t{_number(links[(i, j)])}\n")
    return "".join(out)


def _number(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def _axis_names(p: int) -> list[str]:
    names = ["x", "y", "z"]
    return names[:p] if p <= 3 else names + [f"x{k}" for k in range(4, p + 1)]


def _coord(value: float) -> str:
    text = f"{value:.6f}"
    return "0.000000" if text == "-0.000000" else text


def write_layout(layout: Layout, labels: Sequence[str]) -> str:
    if len(layout) != len(labels):
        raise ValueError("layout and labels differ in length")
    lines = ["\t".join(["node"] + _axis_names(layout.dimension))]
    for label, row in zip(labels, layout.coordinates):
        lines.append("\t".join([label] + [_coord(v) for v in row]))
    return "\n".join(lines) + "\n"


def read_layout(source: str | IO[str]) -> tuple[list[str], Layout]:
    rows = [line.split("\t") for line in _text(source).splitlines() if line.strip()]
    if not rows or rows[0][0] != "node":
        raise FormatError("layout file must start with a 'node' header")
    labels = [r[0] for r in rows[1:]]
    try:
        coords = [[float(v) for v in r[1:]] for r in rows[1:]]
    except ValueError as exc:
        raise FormatError(f"bad coordinate: {exc}") from None
    return labels, Layout(np.array(coords).reshape(len(labels), len(rows[0]) - 1))


def write_partition(part: Partition, labels: Sequence[str]) -> str:
    """TSV with one ``node<TAB>cluster`` row per node; cluster ids start at 1."""
    if len(part) != len(labels):
        raise ValueError("partition and labels differ in length")
    lines = ["node\tcluster"]
    lines += [f"{label}\t{cluster + 1}" for label, cluster in zip(labels, part.assignment)]
    return "\n".join(lines) + "\n"


def read_partition(source: str | IO[str], labels: Sequence[str] | None = None) -> tuple[list[str], Partition]:
    """Parse a partition TSV.

    With ``labels`` the rows are matched by label and returned in that order;
    every label must be present exactly once.
    """
    found: dict[str, int] = {}
    order: list[str] = []
    for number, line in enumerate(_text(source).splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if number == 1 and fields[0] == "node":
            continue
        if len(fields) != 2:
            raise FormatError(f"line {number}: expected node<TAB>cluster, got {line!r}")
        try:
            cluster = int(fields[1])
        except ValueError:
            raise FormatError(f"line {number}: cluster {fields[1]!r} is not an integer") from None
        if cluster < 1:
            raise FormatError(f"line {number}: cluster ids start at 1")
        if fields[0] in found:
            raise FormatError(f"line {number}: node {fields[0]!r} listed twice")
        found[fields[0]] = cluster
        order.append(fields[0])
    if labels is None:
        labels = order
    missing = [label for label in labels if label not in found]
    if missing:
        raise FormatError(f"partition lacks {len(missing)} node(s): {', '.join(missing[:5])}")
    extra = set(found) - set(labels)
    if extra:
        raise FormatError(f"partition names unknown node(s): {', '.join(sorted(extra)[:5])}")
    return list(labels), Partition.from_labels(found[label] for label in labels)


@dataclass(frozen=True)
class CombinedRecord:
    label: str
    coordinates: tuple[float, ...] | None = None
    cluster: int | None = None


def combine(
    labels: Sequence[str], layout: Layout | None = None, part: Partition | None = None
) -> list[CombinedRecord]:
    """Join a layout and/or a partition into per-node records."""
    records = []
    for i, label in enumerate(labels):
        coords = tuple(float(v) for v in layout.coordinates[i]) if layout is not None else None
        cluster = part.assignment[i] if part is not None else None
        records.append(CombinedRecord(label, coords, cluster))
    return records


def write_combined_json(records: Sequence[CombinedRecord], meta: dict | None = None) -> str:
    """JSON document with a ``nodes`` array and a ``meta`` object.

    Node objects hold ``label``, then coordinates (``x``, ``y``, ...) and a
    1-based ``cluster`` when present. Field presence must be uniform.
    """
    if len({r.label for r in records}) != len(records):
        raise ValueError("labels must be unique")
    has_coords = {r.coordinates is not None for r in records}
    has_cluster = {r.cluster is not None for r in records}
    if len(has_coords) > 1 or len(has_cluster) > 1:
        raise ValueError("every record must carry the same fields")
    nodes = []
    for r in records:
        obj: dict = {"label": r.label}
        if r.coordinates is not None:
            for name, value in zip(_axis_names(len(r.coordinates)), r.coordinates):
                obj[name] = float(value)
        if r.cluster is not None:
            obj["cluster"] = int(r.cluster) + 1
        nodes.append(obj)
    return json.dumps({"nodes": nodes, "meta": dict(meta or {})}, indent=2) + "\n"


def read_combined_json(source: str | IO[str]) -> tuple[list[CombinedRecord], dict]:
    doc = json.loads(_text(source))
    records = []
    for obj in doc["nodes"]:
        axes = [k for k in obj if k not in ("label", "cluster")]
        coords = tuple(float(obj[k]) for k in axes) if axes else None
        cluster = obj["cluster"] - 1 if "cluster" in obj else None
        records.append(CombinedRecord(obj["label"], coords, cluster))
    return records, doc.get("meta", {})


# 25 qualitative colours, cycled by cluster id
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5",
    "#c49c94", "#f7b6d2", "#dbdb8d", "#9edae5", "#393b79",
    "#637939", "#8c6d31", "#843c39", "#7b4173", "#3182bd",
)
UNCLUSTERED = "#b0b0b0"


@dataclass(frozen=True)
class SvgOptions:
    width: int = 800
    height: int = 800
    radius: float = 5.0
    labels: bool = False
    font_size: float = 10.0
    margin: float = 0.05


def render_svg(records: Sequence[CombinedRecord], options: SvgOptions | None = None) -> str:
    """Static SVG map: one circle per node, coloured by cluster."""
    options = options or SvgOptions()
    if not records:
        raise ValueError("nothing to draw")
    if any(r.coordinates is None for r in records):
        raise ValueError("records have no coordinates; run the mapping first")
    xy = np.array([(r.coordinates + (0.0,))[:2] for r in records], dtype=float)
    # y grows downwards in SVG
    xy[:, 1] = -xy[:, 1]
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    inner_w = options.width * (1 - 2 * options.margin)
    inner_h = options.height * (1 - 2 * options.margin)
    scale = min(inner_w / span[0], inner_h / span[1])
    offset = np.array([options.width, options.height]) / 2.0 - scale * (lo + hi) / 2.0
    points = xy * scale + offset

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{options.width}" '
        f'height="{options.height}" viewBox="0 0 {options.width} {options.height}">',
        f'<rect width="{options.width}" height="{options.height}" fill="white"/>',
        '<g stroke="#333333" stroke-width="0.5">',
    ]
    for r, (px, py) in zip(records, points):
        fill = UNCLUSTERED if r.cluster is None else PALETTE[r.cluster % len(PALETTE)]
        out.append(
            f'<circle cx="{px:.3f}" cy="{py:.3f}" r="{options.radius:g}" fill="{fill}">'
            f"<title>{escape(r.label)}</title></circle>"
        )
    out.append("</g>")
    if options.labels:
        out.append(f'<g font-family="sans-serif" font-size="{options.font_size:g}" fill="#222222">')
        for r, (px, py) in zip(records, points):
            out.append(
                f'<text x="{px + options.radius + 1:.3f}" y="{py + options.font_size / 3:.3f}">'
                f"{escape(r.label)}</text>"
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

