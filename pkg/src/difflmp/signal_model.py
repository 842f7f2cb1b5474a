"""Linear measurement model: unknown vector, regressors, scalar readings."""

from __future__ import annotations

import numpy as np


def generate_ground_truth(m: int, rng: np.random.Generator) -> np.ndarray:
    """Unknown parameter vector: ``m`` independent standard normal entries."""
    if m < 1:
        raise ValueError(f"parameter dimension must be positive, got {m}")
    return rng.standard_normal(m)


def generate_regressor(m: int, sigma_u: float, rng: np.random.Generator) -> np.ndarray:
    """One regression vector with i.i.d. zero-mean entries of std ``sigma_u``."""
    if m < 1:
        raise ValueError(f"parameter dimension must be positive, got {m}")
    if sigma_u <= 0:
        raise ValueError(f"sigma_u must be positive, got {sigma_u}")
    return sigma_u * rng.standard_normal(m)


def measure(w_o: np.ndarray, u: np.ndarray, v: float) -> float:
    """Scalar sensor reading ``w_o . u + v``."""
    w_o = np.asarray(w_o, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if w_o.shape != u.shape:
        raise ValueError(f"dimension mismatch: w_o {w_o.shape} vs u {u.shape}")
    return float(w_o @ u + v)
