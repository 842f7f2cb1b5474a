"""Recording of learned weights and their relation to per-node noise levels."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class WeightTrace:
    """Strided snapshots of a weight vector (or flattened weight rows)."""

    stride: int
    iterations: list[int] = field(default_factory=list)
    snapshots: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if self.stride < 1:
            raise ValueError(f"snapshot stride must be positive, got {self.stride}")


def record(trace: WeightTrace, iteration: int, weights: np.ndarray) -> WeightTrace:
    """Append a copy of ``weights`` if ``iteration`` falls on the stride grid."""
    if iteration % trace.stride == 0:
        trace.iterations.append(iteration)
        trace.snapshots.append(np.array(weights, dtype=np.float64, copy=True))
    return trace


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks; tied values share the mean of their positions."""
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def final_weight_noise_rank_correlation(final_weights, noise_scale) -> float:
    """Spearman rank correlation between learned weights and noise spread.

    Ties get average ranks.  Raises ``ValueError`` if either vector is
    constant (the correlation is undefined).
    """
    w = np.asarray(final_weights, dtype=np.float64)
    s = np.asarray(noise_scale, dtype=np.float64)
    if w.shape != s.shape or w.ndim != 1:
        raise ValueError(f"shape mismatch: weights {w.shape} vs noise scales {s.shape}")
    if w.size < 3:
        raise ValueError("need at least 3 nodes for a rank correlation")
    if np.isnan(w).any() or np.isnan(s).any():
        raise ValueError("NaN in rank correlation input")
    rw = _average_ranks(w)
    rs = _average_ranks(s)
    if np.all(rw == rw[0]) or np.all(rs == rs[0]):
        raise ValueError("undefined correlation: constant vector")
    rw = rw - rw.mean()
    rs = rs - rs.mean()
    return float((rw @ rs) / np.sqrt((rw @ rw) * (rs @ rs)))
