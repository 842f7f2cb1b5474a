"""The four estimators: centralized / diffusion LMP, plain and weighted.

All iteration functions use synchronous semantics: combination phases read
every node's pre-phase value, so the result is independent of node
processing order.  Diffusion follows the three-step protocol
(combine, adapt on shared neighborhood data, combine) with the adapt-phase
neighbor errors evaluated against the aggregating node's own intermediate
estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .topology import NetworkTopology
from .weighting import masked_row_softmax, softmax, update_global_logits

ALGORITHM_IDS = {
    "centralized-lmp": 0,
    "centralized-wlmp": 1,
    "diffusion-lmp": 2,
    "weighted-diffusion-lmp": 3,
}
CENTRALIZED_ALGORITHMS = frozenset({"centralized-lmp", "centralized-wlmp"})
WEIGHTED_ALGORITHMS = frozenset({"centralized-wlmp", "weighted-diffusion-lmp"})


class DivergenceError(RuntimeError):
    """A run produced a non-finite or runaway estimate."""


@dataclass(frozen=True)
class LmpParams:
    """Power, step size, and the small regularizer guarding |e|^(p-2) at 0."""

    p: float
    mu: float
    epsilon: float = 1e-8

    def __post_init__(self):
        if not 1.0 < self.p <= 2.0:
            raise ValueError(f"p out of range (1, 2], got {self.p}")
        if self.mu <= 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")


@dataclass
class CentralState:
    """Single fusion-center estimate plus (for the weighted variant) node logits."""

    w: np.ndarray
    node_logits: np.ndarray | None = None


@dataclass
class DiffusionState:
    """Stacked per-node estimates and intermediates; row k belongs to node k."""

    w: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    combo_logits: np.ndarray | None = None


def init_central_state(m: int, num_nodes: int, weighted: bool) -> CentralState:
    logits = np.zeros(num_nodes) if weighted else None
    return CentralState(w=np.zeros(m), node_logits=logits)


def init_diffusion_state(num_nodes: int, m: int, weighted: bool) -> DiffusionState:
    logits = np.zeros((num_nodes, num_nodes)) if weighted else None
    return DiffusionState(
        w=np.zeros((num_nodes, m)),
        phi=np.zeros((num_nodes, m)),
        psi=np.zeros((num_nodes, m)),
        combo_logits=logits,
    )


def lmp_influence(e, p: float, epsilon: float):
    """Error-to-update factor ``(|e| + epsilon)^(p-2) * e``; identity at p=2."""
    if p == 2.0:
        return e
    return (np.abs(e) + epsilon) ** (p - 2.0) * e


def centralized_step(
    state: CentralState,
    d_n: np.ndarray,
    U_n: np.ndarray,
    params: LmpParams,
    mu_a: float = 0.0,
    weighted: bool = False,
) -> np.ndarray:
    """One fusion-center iteration over the full batch of node measurements.

    Updates ``state.w`` in place using the current node weights (softmax of
    the logits when weighted, uniform 1/N otherwise); the weighted variant
    then updates the logits from this iteration's errors and regressors.
    Returns the per-node errors.
    """
    n_nodes = d_n.shape[0]
    e = d_n - U_n @ state.w
    if weighted:
        alpha = softmax(state.node_logits)
    else:
        alpha = np.full(n_nodes, 1.0 / n_nodes)
    g = lmp_influence(e, params.p, params.epsilon)
    state.w = state.w + params.mu * ((alpha * g) @ U_n)
    if weighted:
        rsq = np.einsum("km,km->k", U_n, U_n)
        state.node_logits = update_global_logits(
            state.node_logits, np.abs(e) ** params.p, rsq, params.mu, mu_a
        )
    if not np.all(np.isfinite(state.w)):
        raise DivergenceError("centralized estimate became non-finite")
    return e


def diffusion_combine1(w_all: np.ndarray, A1: np.ndarray) -> np.ndarray:
    """First combination: phi_k = sum_l A1[k, l] * w_l (synchronous)."""
    return A1 @ w_all


def diffusion_adapt(
    phi: np.ndarray,
    d_n: np.ndarray,
    U_n: np.ndarray,
    C: np.ndarray,
    params: LmpParams,
) -> tuple[np.ndarray, np.ndarray]:
    """Adaptation on shared neighborhood data.

    Each node k evaluates every neighbor's error against its own phi_k and
    takes a C-weighted LMP step over the neighborhood's data.  Returns
    ``(psi, errors)`` where ``errors[k, l] = d_l - phi_k . u_l``; node k's
    own adapt-phase error is the diagonal ``errors[k, k]``.
    """
    proj = phi @ U_n.T
    errors = d_n[None, :] - proj
    g = lmp_influence(errors, params.p, params.epsilon)
    psi = phi + params.mu * ((C * g) @ U_n)
    if not np.all(np.isfinite(psi)):
        raise DivergenceError("adapt phase produced a non-finite intermediate estimate")
    return psi, errors


def diffusion_combine2(psi: np.ndarray, A2: np.ndarray) -> np.ndarray:
    """Second combination: w_k = sum_l A2[k, l] * psi_l (synchronous)."""
    return A2 @ psi


def plain_diffusion_iteration(
    state: DiffusionState,
    d_n: np.ndarray,
    U_n: np.ndarray,
    params: LmpParams,
    A: np.ndarray,
) -> DiffusionState:
    """One combine/adapt/combine sweep with fixed combination weights."""
    state.phi = diffusion_combine1(state.w, A)
    state.psi, _ = diffusion_adapt(state.phi, d_n, U_n, A, params)
    state.w = diffusion_combine2(state.psi, A)
    return state


def weighted_diffusion_iteration(
    state: DiffusionState,
    topology: NetworkTopology,
    d_n: np.ndarray,
    U_n: np.ndarray,
    params: LmpParams,
    mu_a: float,
) -> DiffusionState:
    """One sweep with softmax combination weights shared by all three phases.

    After the second combination each node refreshes its logit row with the
    same penalty-driven rule the centralized weighted variant uses globally,
    fed by this iteration's adapt-phase neighbor errors: neighbors whose
    data carries a larger ``|e|^p * (u.u)`` penalty lose combination weight.
    (Driving the row logits by the error/psi correlation instead makes
    ``c(1-c)`` a rich-get-richer factor: the rows collapse onto a single
    neighbor, which forfeits the averaging gain of diffusion.)
    """
    mask = topology.adjacency
    C = masked_row_softmax(state.combo_logits, mask)
    state.phi = diffusion_combine1(state.w, C)
    state.psi, errors = diffusion_adapt(state.phi, d_n, U_n, C, params)
    state.w = diffusion_combine2(state.psi, C)

    penalties = np.abs(errors) ** params.p
    rsq = np.einsum("km,km->k", U_n, U_n)
    for k in range(topology.num_nodes):
        nb = np.flatnonzero(mask[k])
        state.combo_logits[k, nb] = update_global_logits(
            state.combo_logits[k, nb], penalties[k, nb], rsq[nb], params.mu, mu_a
        )
    return state
