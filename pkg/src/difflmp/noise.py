"""Per-node measurement noise: non-uniform Gaussian and symmetric alpha-stable.

The alpha-stable sampler is the Chambers-Mallows-Stuck transform in its
symmetric, zero-location form.  A model with characteristic exponent
``alpha`` and dispersion ``gamma`` (characteristic function
``exp(-gamma * |t| ** alpha)``) is sampled by scaling a unit draw with
``gamma ** (1 / alpha)``.  Special cases get their own branch: ``alpha == 2``
is Gaussian with variance ``2 * gamma`` and ``alpha == 1`` is Cauchy with
scale ``gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _positive_vector(values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{what} must be a nonempty 1-D sequence")
    if not np.isfinite(arr).all() or (arr <= 0).any():
        raise ValueError(f"{what} must be strictly positive")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GaussianNoise:
    """Zero-mean Gaussian noise with one standard deviation per node."""

    stds: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "stds", _positive_vector(self.stds, "stds"))

    @property
    def num_nodes(self) -> int:
        return self.stds.size


@dataclass(frozen=True)
class AlphaStableNoise:
    """Symmetric alpha-stable noise with one dispersion per node."""

    alpha: float
    dispersions: np.ndarray

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must be in (0, 2], got {self.alpha}")
        object.__setattr__(
            self, "dispersions", _positive_vector(self.dispersions, "dispersions")
        )

    @property
    def num_nodes(self) -> int:
        return self.dispersions.size


NoiseModel = GaussianNoise | AlphaStableNoise


def _standard_sas(alpha: float, rng: np.random.Generator, n: int) -> np.ndarray:
    """Unit-scale symmetric alpha-stable draws (CMS transform).

    Consumes exactly two uniforms per draw in a fixed interleaved order so
    that scalar and block sampling walk the stream identically.
    """
    uu = rng.random((n, 2))
    phi = np.pi * (uu[:, 0] - 0.5)
    if alpha == 1.0:
        return np.tan(phi)
    w = -np.log1p(-uu[:, 1])
    if alpha == 2.0:
        return 2.0 * np.sqrt(w) * np.sin(phi)
    return (
        (np.cos((1.0 - alpha) * phi) / w) ** (1.0 / alpha - 1.0)
        * np.sin(alpha * phi)
        / np.cos(phi) ** (1.0 / alpha)
    )


def sample_noise_block(model: NoiseModel, node: int, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw ``n`` consecutive noise samples for one node."""
    if not 0 <= node < model.num_nodes:
        raise ValueError(f"node {node} out of range [0, {model.num_nodes})")
    if isinstance(model, GaussianNoise):
        return model.stds[node] * rng.standard_normal(n)
    scale = model.dispersions[node] ** (1.0 / model.alpha)
    return scale * _standard_sas(model.alpha, rng, n)


def sample_noise(model: NoiseModel, node: int, rng: np.random.Generator) -> float:
    """Draw a single noise sample for one node."""
    return float(sample_noise_block(model, node, rng, 1)[0])


def noise_scales(model: NoiseModel) -> np.ndarray:
    """Per-node spread parameter: stds (Gaussian) or dispersions (stable)."""
    if isinstance(model, GaussianNoise):
        return model.stds.copy()
    return model.dispersions.copy()


def empirical_char_function(samples, t: float) -> float:
    """Real part of the empirical characteristic function at frequency ``t``.

    For symmetric samples the imaginary part vanishes, so the mean of
    ``cos(t * v)`` estimates the full characteristic function.
    """
    arr = np.asarray(samples, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empirical_char_function needs at least one sample")
    return float(np.mean(np.cos(t * arr)))
