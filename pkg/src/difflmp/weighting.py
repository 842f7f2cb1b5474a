"""Softmax weight parameterization and the steepest-descent logit recursions.

Two recursions live here: the global per-node weight update driven by
``|e|^p * (u.u)`` penalties (all raw increments are non-positive, so heavily
penalized nodes fall behind the rest), and the per-neighborhood combination
weight update driven by the signed product ``e * (psi . u)``.
"""

from __future__ import annotations

import numpy as np

LOGIT_MIN = -30.0
LOGIT_MAX = 30.0


def clamp_logits(logits: np.ndarray) -> np.ndarray:
    """Keep logits inside [LOGIT_MIN, LOGIT_MAX] without distorting weights.

    Softmax is invariant under adding a constant, so when the vector leaves
    the box it is first translated to anchor its maximum at LOGIT_MAX; only
    entries still below LOGIT_MIN (a spread beyond the box width, i.e. a
    weight ratio under exp(-60)) are truncated.  A plain elementwise clamp
    would pin jointly drifting logits to one bound and erase their
    differences, collapsing the derived weights to uniform.
    """
    z = np.asarray(logits, dtype=np.float64)
    if z.min() >= LOGIT_MIN and z.max() <= LOGIT_MAX:
        return z
    z = z + (LOGIT_MAX - z.max())
    return np.maximum(z, LOGIT_MIN)


def softmax(logits) -> np.ndarray:
    """Normalized exponential weights, computed with max-subtraction."""
    z = np.asarray(logits, dtype=np.float64)
    ex = np.exp(z - z.max())
    return ex / ex.sum()


def masked_row_softmax(logits: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Row-wise softmax restricted to ``mask``; zero outside the support."""
    z = np.where(mask, logits, -np.inf)
    ex = np.exp(z - z.max(axis=1, keepdims=True))
    return ex / ex.sum(axis=1, keepdims=True)


def softmax_self_derivative(weights: np.ndarray, i: int) -> float:
    """Derivative of the i-th softmax weight w.r.t. its own logit: w(1 - w)."""
    w = weights[i]
    return float(w * (1.0 - w))


def _require_finite(name: str, *arrays) -> None:
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"non-finite input to {name}")


def update_global_logits(
    logits: np.ndarray,
    errors_abs_p: np.ndarray,
    regressor_sq_norms: np.ndarray,
    mu: float,
    mu_a: float,
) -> np.ndarray:
    """One steepest-descent step on the per-node weight logits.

    Node k moves by ``-mu_a * mu * |e_k|^p * (u_k . u_k) * w_k * (1 - w_k)``,
    then the vector is clamped.
    """
    logits = np.asarray(logits, dtype=np.float64)
    errors_abs_p = np.asarray(errors_abs_p, dtype=np.float64)
    regressor_sq_norms = np.asarray(regressor_sq_norms, dtype=np.float64)
    _require_finite("update_global_logits", logits, errors_abs_p, regressor_sq_norms)
    w = softmax(logits)
    b = w * (1.0 - w)
    return clamp_logits(logits - mu_a * mu * errors_abs_p * regressor_sq_norms * b)


def update_local_logits(
    logits_row: np.ndarray,
    e_k: float,
    psi_inner: np.ndarray,
    mu_a: float,
) -> np.ndarray:
    """One steepest-descent step on a node's combination logit row.

    Neighbor l moves by ``+mu_a * e_k * (psi_l . u_k) * c_l * (1 - c_l)``,
    then the row is clamped.
    """
    logits_row = np.asarray(logits_row, dtype=np.float64)
    psi_inner = np.asarray(psi_inner, dtype=np.float64)
    if logits_row.shape != psi_inner.shape:
        raise ValueError(
            f"row length mismatch: logits {logits_row.shape} vs inner products {psi_inner.shape}"
        )
    _require_finite("update_local_logits", logits_row, [e_k], psi_inner)
    c = softmax(logits_row)
    d = c * (1.0 - c)
    return clamp_logits(logits_row + mu_a * e_k * psi_inner * d)
