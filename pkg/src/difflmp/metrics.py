"""Mean-square-deviation metrics and Monte-Carlo curve aggregation.

Trial averaging happens in the linear squared-deviation domain (MSD is an
expected error power); only the aggregate is converted to dB.  Curves are
floored at -300 dB so a numerically exact estimate stays finite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DB_FLOOR = -300.0
_NORM_FLOOR = 1e-15
_SQ_FLOOR = 1e-30


@dataclass(frozen=True)
class LearningCurve:
    """Trial-averaged MSD trajectory for one algorithm."""

    msd_db: np.ndarray
    algorithm: str
    trials_used: int
    diverged_trials: int


def msd_db(w: np.ndarray, w_o: np.ndarray) -> float:
    """Deviation of one estimate in dB: ``20 * log10(||w - w_o||)``."""
    w = np.asarray(w, dtype=np.float64)
    w_o = np.asarray(w_o, dtype=np.float64)
    if w.shape != w_o.shape:
        raise ValueError(f"dimension mismatch: {w.shape} vs {w_o.shape}")
    norm = np.linalg.norm(w - w_o)
    return float(20.0 * np.log10(max(norm, _NORM_FLOOR)))


def network_msd_db(w_all: np.ndarray, w_o: np.ndarray) -> float:
    """Node-averaged squared deviation in dB; equals :func:`msd_db` for N=1."""
    w_all = np.atleast_2d(np.asarray(w_all, dtype=np.float64))
    w_o = np.asarray(w_o, dtype=np.float64)
    if w_all.shape[1] != w_o.shape[0]:
        raise ValueError(f"dimension mismatch: {w_all.shape} vs {w_o.shape}")
    mean_sq = np.mean(np.sum((w_all - w_o[None, :]) ** 2, axis=1))
    return float(10.0 * np.log10(max(mean_sq, _SQ_FLOOR)))


def linear_to_db(mean_sq_dev: np.ndarray) -> np.ndarray:
    """Convert linear squared deviations to floored dB values."""
    return 10.0 * np.log10(np.maximum(np.asarray(mean_sq_dev, dtype=np.float64), _SQ_FLOOR))


def average_curves(
    per_trial_sq_dev,
    algorithm: str = "",
    diverged_trials: int = 0,
) -> LearningCurve:
    """Average per-trial linear squared-deviation curves into one dB curve.

    ``per_trial_sq_dev`` holds only the usable (non-diverged) trials, in
    trial-index order; the accumulation order is fixed so reruns are
    deterministic.
    """
    curves = [np.asarray(c, dtype=np.float64) for c in per_trial_sq_dev]
    if not curves:
        raise ValueError("no usable trials to average")
    lengths = {c.shape for c in curves}
    if len(lengths) != 1:
        raise ValueError(f"trial curves disagree in length: {sorted(lengths)}")
    total = np.zeros_like(curves[0])
    for c in curves:
        total += c
    mean = total / len(curves)
    return LearningCurve(
        msd_db=linear_to_db(mean),
        algorithm=algorithm,
        trials_used=len(curves),
        diverged_trials=diverged_trials,
    )
