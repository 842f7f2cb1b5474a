"""Sensor-network graph and fixed (baseline) combination matrices.

Neighborhoods are self-inclusive: every node always belongs to its own
neighborhood, so combination sums over a neighborhood are well defined
even for isolated update steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NetworkTopology:
    """Undirected, connected graph over ``num_nodes`` sensors.

    ``adjacency`` is a symmetric boolean matrix with a True diagonal.
    Instances are immutable and safe to share across trial workers.
    """

    num_nodes: int
    adjacency: np.ndarray


@dataclass(frozen=True)
class CombinationMatrix:
    """Row-stochastic nonnegative weights supported on the graph edges."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("combination matrix must be square")
        if (w < 0).any():
            raise ValueError("combination weights must be nonnegative")
        row_sums = w.sum(axis=1)
        if not np.allclose(row_sums, 1.0, rtol=0.0, atol=1e-12):
            raise ValueError("combination matrix rows must sum to 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def build_topology(num_nodes: int, edges) -> NetworkTopology:
    """Validate an edge list into a :class:`NetworkTopology`.

    The diagonal (self membership) is added automatically; listing a
    self-loop is harmless.  Raises ``ValueError`` for out-of-range node
    indices or a disconnected graph.
    """
    if num_nodes < 1:
        raise ValueError(f"num_nodes must be positive, got {num_nodes}")
    adjacency = np.eye(num_nodes, dtype=bool)
    for edge in edges:
        a, b = edge
        for node in (a, b):
            if not 0 <= node < num_nodes:
                raise ValueError(f"edge {tuple(edge)}: node {node} out of range [0, {num_nodes})")
        adjacency[a, b] = True
        adjacency[b, a] = True
    if not _is_connected(adjacency):
        raise ValueError("disconnected topology")
    adjacency.setflags(write=False)
    return NetworkTopology(num_nodes=num_nodes, adjacency=adjacency)


def _is_connected(adjacency: np.ndarray) -> bool:
    n = adjacency.shape[0]
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        k = stack.pop()
        for l in np.flatnonzero(adjacency[k]):
            if not seen[l]:
                seen[l] = True
                stack.append(int(l))
    return bool(seen.all())


def neighbors(topology: NetworkTopology, k: int) -> list[int]:
    """Sorted neighborhood of node ``k``, always including ``k`` itself."""
    if not 0 <= k < topology.num_nodes:
        raise ValueError(f"node {k} out of range [0, {topology.num_nodes})")
    return np.flatnonzero(topology.adjacency[k]).tolist()


def uniform_combination(topology: NetworkTopology) -> CombinationMatrix:
    """Uniform neighborhood averaging: 1/|neighborhood| on the support."""
    adjacency = topology.adjacency
    degrees = adjacency.sum(axis=1)
    return CombinationMatrix(adjacency / degrees[:, None])


def flatten_neighborhoods(topology: NetworkTopology) -> tuple[np.ndarray, np.ndarray]:
    """CSR-style neighbor layout used by the trial kernels.

    Returns ``(offsets, flat)`` where node k's neighbors (sorted, including
    k) occupy ``flat[offsets[k]:offsets[k + 1]]``.
    """
    lists = [np.flatnonzero(topology.adjacency[k]) for k in range(topology.num_nodes)]
    offsets = np.zeros(topology.num_nodes + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(l) for l in lists])
    flat = np.concatenate(lists).astype(np.int64)
    return offsets, flat
