"""Numpy trial kernels: the fallback backend.

Each function runs one full Monte-Carlo trial over pregenerated data and
mirrors the compiled kernels in difflmp._kernels.  The per-iteration tail
order is fixed in both backends: update state, record trajectory, record
squared deviations, check divergence (break), snapshot weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algorithms import (
    DivergenceError,
    LmpParams,
    centralized_step,
    init_central_state,
    init_diffusion_state,
    plain_diffusion_iteration,
    weighted_diffusion_iteration,
)
from .topology import NetworkTopology, uniform_combination
from .weighting import masked_row_softmax, softmax

BACKEND_NAME = "python"


@dataclass
class TrialResult:
    """Everything one trial hands back to the Monte-Carlo reducer.

    ``sq_dev`` is the per-iteration node-mean squared deviation (linear
    domain).  ``snapshots`` holds the adaptive weights at strided
    iterations: the alpha vector (centralized) or the concatenated
    combination rows in CSR neighbor order (diffusion).  ``diverged_at``
    is -1 for a completed trial.
    """

    sq_dev: np.ndarray
    node_sq_dev: np.ndarray | None
    snap_iterations: np.ndarray
    snapshots: np.ndarray | None
    final_weights: np.ndarray | None
    diverged_at: int
    trajectory: np.ndarray | None


def _snapshot_grid(iterations: int, stride: int) -> np.ndarray:
    return np.arange(0, iterations, stride, dtype=np.int64)


def _topology_from_flat(offsets: np.ndarray, flat: np.ndarray) -> NetworkTopology:
    n = offsets.shape[0] - 1
    adjacency = np.zeros((n, n), dtype=bool)
    for k in range(n):
        adjacency[k, flat[offsets[k] : offsets[k + 1]]] = True
    adjacency.setflags(write=False)
    return NetworkTopology(num_nodes=n, adjacency=adjacency)


def run_centralized_trial(
    U: np.ndarray,
    d: np.ndarray,
    w_o: np.ndarray,
    p: float,
    mu: float,
    epsilon: float,
    weighted: bool,
    mu_a: float,
    stride: int,
    div_limit: float,
    record_trajectory: bool = False,
) -> TrialResult:
    iterations, n_nodes, m = U.shape
    params = LmpParams(p=p, mu=mu, epsilon=epsilon)
    state = init_central_state(m, n_nodes, weighted)
    sq_dev = np.zeros(iterations)
    snap_iters = _snapshot_grid(iterations, stride)
    snaps = np.zeros((snap_iters.size, n_nodes)) if weighted else None
    trajectory = np.zeros((iterations, m)) if record_trajectory else None
    lim_sq = div_limit * div_limit
    diverged_at = -1

    for n in range(iterations):
        try:
            centralized_step(state, d[n], U[n], params, mu_a=mu_a, weighted=weighted)
        except DivergenceError:
            diverged_at = n
            break
        if record_trajectory:
            trajectory[n] = state.w
        dev = state.w - w_o
        sq = float(dev @ dev)
        sq_dev[n] = sq
        state_sq = float(state.w @ state.w)
        if not np.isfinite(state_sq) or state_sq > lim_sq:
            diverged_at = n
            break
        if weighted and n % stride == 0:
            snaps[n // stride] = softmax(state.node_logits)

    final = softmax(state.node_logits) if weighted else None
    return TrialResult(
        sq_dev=sq_dev,
        node_sq_dev=None,
        snap_iterations=snap_iters,
        snapshots=snaps,
        final_weights=final,
        diverged_at=diverged_at,
        trajectory=trajectory,
    )


def run_diffusion_trial(
    U: np.ndarray,
    d: np.ndarray,
    w_o: np.ndarray,
    offsets: np.ndarray,
    flat: np.ndarray,
    p: float,
    mu: float,
    epsilon: float,
    weighted: bool,
    mu_a: float,
    stride: int,
    div_limit: float,
    record_trajectory: bool = False,
) -> TrialResult:
    iterations, n_nodes, m = U.shape
    params = LmpParams(p=p, mu=mu, epsilon=epsilon)
    topology = _topology_from_flat(offsets, flat)
    state = init_diffusion_state(n_nodes, m, weighted)
    A = uniform_combination(topology).weights

    total_row_len = int(offsets[-1])
    sq_dev = np.zeros(iterations)
    node_sq_dev = np.zeros((n_nodes, iterations))
    snap_iters = _snapshot_grid(iterations, stride)
    snaps = np.zeros((snap_iters.size, total_row_len)) if weighted else None
    trajectory = np.zeros((iterations, n_nodes, m)) if record_trajectory else None
    lim_sq = div_limit * div_limit
    diverged_at = -1

    def flat_rows() -> np.ndarray:
        C = masked_row_softmax(state.combo_logits, topology.adjacency)
        return np.concatenate(
            [C[k, flat[offsets[k] : offsets[k + 1]]] for k in range(n_nodes)]
        )

    for n in range(iterations):
        try:
            if weighted:
                weighted_diffusion_iteration(state, topology, d[n], U[n], params, mu_a)
            else:
                plain_diffusion_iteration(state, d[n], U[n], params, A)
        except DivergenceError:
            diverged_at = n
            break
        if record_trajectory:
            trajectory[n] = state.w
        dev = state.w - w_o
        node_sq = np.einsum("km,km->k", dev, dev)
        node_sq_dev[:, n] = node_sq
        sq_dev[n] = node_sq.mean()
        state_sq = np.einsum("km,km->k", state.w, state.w)
        if not np.all(np.isfinite(state_sq)) or (state_sq > lim_sq).any():
            diverged_at = n
            break
        if weighted and n % stride == 0:
            snaps[n // stride] = flat_rows()

    final = flat_rows() if weighted else None
    return TrialResult(
        sq_dev=sq_dev,
        node_sq_dev=node_sq_dev,
        snap_iterations=snap_iters,
        snapshots=snaps,
        final_weights=final,
        diverged_at=diverged_at,
        trajectory=trajectory,
    )
