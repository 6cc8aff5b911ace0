"""Map layout by iterative majorization of the unified objective.

The objective is ``V(X) = sum_{i<j} s_ij d_ij^2 - sum_{i<j} d_ij`` with
Euclidean distances ``d_ij`` and association strengths ``s_ij``.

Each step keeps the attractive term exactly and bounds ``-d_ij`` from above
by ``-(x_i - x_j).(z_i - z_j) / d_ij(z)`` at the current layout ``Z``. The
surrogate is a convex quadratic whose minimizer solves

    2 L_s X = L_b(Z) Z

with ``L_s`` the Laplacian of ``s`` and ``L_b`` the Laplacian of ``1 / d_ij(Z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.spatial.distance import pdist, squareform

from .network import Network, connected_components

TIE_EPS = 1e-12


class DisconnectedNetworkError(ValueError):
    """The objective has no minimum on a disconnected network."""


@dataclass(frozen=True)
class MappingConfig:
    dimension: int = 2
    restarts: int = 10
    seed: int = 0
    max_iterations: int = 1000
    relative_tolerance: float = 1e-12

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dimension!r}")
        if int(self.restarts) != self.restarts or self.restarts < 1:
            raise ValueError(f"restarts must be a positive integer, got {self.restarts!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")
        if not self.relative_tolerance > 0:
            raise ValueError(f"relative_tolerance must be > 0, got {self.relative_tolerance!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")


class Layout:
    """Node coordinates, one row per node.

    Parameters
    ----------
    coordinates : array_like, shape (n, p)
    """

    def __init__(self, coordinates):
        coords = np.array(coordinates, dtype=float)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2 or coords.shape[1] < 1:
            raise ValueError("coordinates must be an (n, p) array with p >= 1")
        if not np.all(np.isfinite(coords)):
            raise ValueError("coordinates must be finite")
        coords.setflags(write=False)
        self.coordinates = coords

    @property
    def dimension(self) -> int:
        return self.coordinates.shape[1]

    def __len__(self) -> int:
        return self.coordinates.shape[0]

    def __repr__(self) -> str:
        return f"Layout(n={len(self)}, p={self.dimension})"

    def distances(self) -> np.ndarray:
        """Square matrix of pairwise Euclidean distances."""
        return squareform(pdist(self.coordinates))


def _check_layout(net: Network, layout: Layout) -> None:
    if len(layout) != net.node_count:
        raise ValueError(f"layout has {len(layout)} points for {net.node_count} nodes")


def _condensed_strengths(net: Network) -> np.ndarray:
    return squareform(net.association_matrix(), checks=False)


def mapping_objective(net: Network, layout: Layout) -> float:
    """``sum_{i<j} s_ij d_ij^2 - sum_{i<j} d_ij`` for ``layout``."""
    _check_layout(net, layout)
    return _objective(_condensed_strengths(net), layout.coordinates)


def _objective(s_condensed: np.ndarray, coords: np.ndarray) -> float:
    d = pdist(coords)
    return float(np.dot(s_condensed, d * d) - d.sum())


class _Majorizer:
    """Factorized attractive Laplacian shared by every step on one network."""

    def __init__(self, net: Network):
        s = net.association_matrix()
        n = net.node_count
        self.s_condensed = squareform(s, checks=False)
        laplacian = np.diag(s.sum(axis=1)) - s
        # adding 11^T/n pins the translation; the result is centred
        self.factor = cho_factor(2.0 * laplacian + np.ones((n, n)) / n)

    def step(self, coords: np.ndarray) -> np.ndarray:
        d = squareform(pdist(coords))
        with np.errstate(divide="ignore"):
            b = np.where(d > 0, 1.0 / d, 0.0)
        rhs = b.sum(axis=1)[:, None] * coords - b @ coords
        new = cho_solve(self.factor, rhs)
        return new + coords.mean(axis=0)

    def objective(self, coords: np.ndarray) -> float:
        return _objective(self.s_condensed, coords)


def _require_connected(net: Network) -> None:
    comps = connected_components(net)
    if len(comps) > 1:
        raise DisconnectedNetworkError(
            f"network has {len(comps)} connected components; the layout objective is "
            "unbounded below unless the network is connected (map the largest component instead)"
        )


def majorization_step(net: Network, current: Layout) -> Layout:
    """Exact minimizer of the majorizing surrogate built at ``current``.

    The objective never increases. The result keeps the centroid of
    ``current``. Coincident point pairs contribute no repulsive direction.
    """
    _check_layout(net, current)
    _require_connected(net)
    return Layout(_Majorizer(net).step(current.coordinates))


def run_majorization(
    net: Network, initial: Layout, max_iterations: int = 1000, relative_tolerance: float = 1e-12
) -> tuple[Layout, list[float]]:
    """Iterate :func:`majorization_step` from ``initial``.

    Stops when the relative objective change drops below
    ``relative_tolerance`` or after ``max_iterations`` steps. Returns the
    final layout and the objective trace, starting with the initial value.
    """
    _check_layout(net, initial)
    _require_connected(net)
    return _iterate(_Majorizer(net), initial.coordinates, max_iterations, relative_tolerance)


def _iterate(maj: _Majorizer, coords: np.ndarray, max_iterations: int, tol: float):
    trace = [maj.objective(coords)]
    for _ in range(max_iterations):
        coords = maj.step(coords)
        trace.append(maj.objective(coords))
        prev, cur = trace[-2], trace[-1]
        if abs(prev - cur) <= tol * max(abs(prev), abs(cur), 1e-300):
            break
    return Layout(coords), trace


def initial_layout(n: int, dimension: int, seed: int) -> Layout:
    """Uniform random coordinates in ``[-0.5, 0.5]^p``."""
    rng = np.random.default_rng(seed)
    return Layout(rng.uniform(-0.5, 0.5, size=(n, dimension)))


def compute_layout(net: Network, config: MappingConfig | None = None) -> tuple[Layout, float]:
    """Best canonical layout over ``config.restarts`` majorization runs.

    Restart ``k`` starts from :func:`initial_layout` with seed
    ``config.seed + k``. The lowest objective wins, earliest restart on ties.

    Raises
    ------
    DisconnectedNetworkError
        If the network has more than one connected component.
    """
    config = config or MappingConfig()
    _require_connected(net)
    maj = _Majorizer(net)
    best, best_value = None, math.inf
    for k in range(config.restarts):
        start = initial_layout(net.node_count, config.dimension, config.seed + k)
        layout, trace = _iterate(maj, start.coordinates, config.max_iterations, config.relative_tolerance)
        if trace[-1] < best_value - TIE_EPS:
            best, best_value = layout, trace[-1]
    canonical = canonicalize_layout(best)
    return canonical, maj.objective(canonical.coordinates)


def canonicalize_layout(layout: Layout) -> Layout:
    """Centre, rotate onto principal axes, and fix axis signs.

    Axes come out in order of decreasing variance. Each axis is flipped so
    the first node with a coordinate of magnitude above 1e-9 on it is
    positive.
    """
    coords = layout.coordinates - layout.coordinates.mean(axis=0)
    p = coords.shape[1]
    _, _, vt = np.linalg.svd(coords, full_matrices=True)
    rotated = coords @ vt.T[:, :p]
    for axis in range(p):
        column = rotated[:, axis]
        nonzero = np.flatnonzero(np.abs(column) > 1e-9)
        if nonzero.size and column[nonzero[0]] < 0:
            rotated[:, axis] = -column
    return Layout(rotated)
