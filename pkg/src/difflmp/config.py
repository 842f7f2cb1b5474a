"""Experiment configuration: JSON schema, validation, bundled defaults."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .algorithms import ALGORITHM_IDS
from .noise import AlphaStableNoise, GaussianNoise, NoiseModel
from .topology import NetworkTopology, build_topology

BUNDLED_CONFIGS = {"gaussian": "gaussian.json", "alpha-stable": "alpha_stable.json"}


class ConfigError(ValueError):
    """A config document violates the schema; the message names the field."""


@dataclass(frozen=True)
class ExperimentConfig:
    topology: NetworkTopology
    M: int
    sigma_u: float
    noise: NoiseModel
    algorithms: tuple[str, ...]
    p: float
    mu: float
    mu_a_global: float
    mu_a_local: float
    epsilon: float
    iterations: int
    trials: int
    master_seed: int
    snapshot_stride: int


def _require_keys(mapping: dict, allowed: set[str], required: set[str], where: str = "") -> None:
    prefix = f"{where}." if where else ""
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"unknown config field: {prefix}{key}")
    for key in required:
        if key not in mapping:
            raise ConfigError(f"missing config field: {prefix}{key}")


def _as_int(value, field: str, minimum: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{field} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{field} must be >= {minimum}, got {value}")
    return value


def _as_number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{field} must be a number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ConfigError(f"{field} must be finite, got {value}")
    return value


def _as_positive(value, field: str) -> float:
    number = _as_number(value, field)
    if number <= 0:
        raise ConfigError(f"{field} must be positive, got {number}")
    return number


def _parse_topology(raw) -> NetworkTopology:
    if not isinstance(raw, dict):
        raise ConfigError("topology must be an object")
    _require_keys(raw, {"num_nodes", "edges"}, {"num_nodes", "edges"}, "topology")
    num_nodes = _as_int(raw["num_nodes"], "topology.num_nodes", minimum=1)
    edges = raw["edges"]
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e) for e in edges
    ):
        raise ConfigError("topology.edges must be a list of [a, b] node pairs")
    try:
        return build_topology(num_nodes, [tuple(e) for e in edges])
    except ValueError as exc:
        raise ConfigError(f"topology.edges: {exc}") from exc


def _parse_noise(raw, num_nodes: int) -> NoiseModel:
    if not isinstance(raw, dict):
        raise ConfigError("noise must be an object")
    kind = raw.get("kind")
    if kind == "gaussian":
        _require_keys(raw, {"kind", "stds"}, {"stds"}, "noise")
        stds = raw["stds"]
        if not isinstance(stds, list) or len(stds) != num_nodes:
            raise ConfigError(f"noise.stds must list {num_nodes} values")
        try:
            return GaussianNoise(stds=np.asarray(stds, dtype=np.float64))
        except ValueError as exc:
            raise ConfigError(f"noise.stds: {exc}") from exc
    if kind == "alpha-stable":
        _require_keys(raw, {"kind", "alpha", "dispersions"}, {"alpha", "dispersions"}, "noise")
        dispersions = raw["dispersions"]
        if not isinstance(dispersions, list) or len(dispersions) != num_nodes:
            raise ConfigError(f"noise.dispersions must list {num_nodes} values")
        try:
            return AlphaStableNoise(
                alpha=_as_number(raw["alpha"], "noise.alpha"),
                dispersions=np.asarray(dispersions, dtype=np.float64),
            )
        except ValueError as exc:
            raise ConfigError(f"noise: {exc}") from exc
    raise ConfigError(f"noise.kind must be 'gaussian' or 'alpha-stable', got {kind!r}")


_TOP_LEVEL_FIELDS = {
    "topology",
    "M",
    "sigma_u",
    "noise",
    "algorithms",
    "p",
    "mu",
    "mu_a_global",
    "mu_a_local",
    "epsilon",
    "iterations",
    "trials",
    "master_seed",
    "snapshot_stride",
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON config document; reject unknown keys."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a JSON object")
    _require_keys(raw, _TOP_LEVEL_FIELDS, _TOP_LEVEL_FIELDS)

    topology = _parse_topology(raw["topology"])
    noise = _parse_noise(raw["noise"], topology.num_nodes)

    algorithms = raw["algorithms"]
    if not isinstance(algorithms, list) or not algorithms:
        raise ConfigError("algorithms must be a nonempty list")
    for name in algorithms:
        if name not in ALGORITHM_IDS:
            raise ConfigError(f"algorithms: unknown algorithm {name!r}; choices: {sorted(ALGORITHM_IDS)}")
    if len(set(algorithms)) != len(algorithms):
        raise ConfigError("algorithms: duplicate entries")

    p = _as_number(raw["p"], "p")
    if not 1.0 < p <= 2.0:
        raise ConfigError(f"p out of range (1, 2], got {p}")
    epsilon = _as_number(raw["epsilon"], "epsilon")
    if epsilon < 0:
        raise ConfigError(f"epsilon must be nonnegative, got {epsilon}")
    master_seed = _as_int(raw["master_seed"], "master_seed", minimum=0)
    if master_seed >= 2**64:
        raise ConfigError(f"master_seed must fit in 64 bits, got {master_seed}")

    return ExperimentConfig(
        topology=topology,
        M=_as_int(raw["M"], "M", minimum=1),
        sigma_u=_as_positive(raw["sigma_u"], "sigma_u"),
        noise=noise,
        algorithms=tuple(algorithms),
        p=p,
        mu=_as_positive(raw["mu"], "mu"),
        mu_a_global=_as_positive(raw["mu_a_global"], "mu_a_global"),
        mu_a_local=_as_positive(raw["mu_a_local"], "mu_a_local"),
        epsilon=epsilon,
        iterations=_as_int(raw["iterations"], "iterations", minimum=1),
        trials=_as_int(raw["trials"], "trials", minimum=1),
        master_seed=master_seed,
        snapshot_stride=_as_int(raw["snapshot_stride"], "snapshot_stride", minimum=1),
    )


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def bundled_config_text(name: str) -> str:
    """Raw JSON of a config shipped with the package ('gaussian', 'alpha-stable')."""
    try:
        filename = BUNDLED_CONFIGS[name]
    except KeyError:
        raise ConfigError(f"no bundled config named {name!r}; choices: {sorted(BUNDLED_CONFIGS)}") from None
    return resources.files("difflmp").joinpath("configs", filename).read_text(encoding="utf-8")


def bundled_config(name: str) -> ExperimentConfig:
    return parse_config(bundled_config_text(name))


def _edges_from_topology(topology: NetworkTopology) -> list[list[int]]:
    n = topology.num_nodes
    return [[k, l] for k in range(n) for l in range(k + 1, n) if topology.adjacency[k, l]]


def config_to_dict(config: ExperimentConfig) -> dict:
    """Plain-JSON form of a config; inverse of :func:`parse_config`."""
    if isinstance(config.noise, GaussianNoise):
        noise = {"kind": "gaussian", "stds": [float(s) for s in config.noise.stds]}
    else:
        noise = {
            "kind": "alpha-stable",
            "alpha": float(config.noise.alpha),
            "dispersions": [float(g) for g in config.noise.dispersions],
        }
    return {
        "topology": {
            "num_nodes": config.topology.num_nodes,
            "edges": _edges_from_topology(config.topology),
        },
        "M": config.M,
        "sigma_u": config.sigma_u,
        "noise": noise,
        "algorithms": list(config.algorithms),
        "p": config.p,
        "mu": config.mu,
        "mu_a_global": config.mu_a_global,
        "mu_a_local": config.mu_a_local,
        "epsilon": config.epsilon,
        "iterations": config.iterations,
        "trials": config.trials,
        "master_seed": config.master_seed,
        "snapshot_stride": config.snapshot_stride,
    }


def config_to_json(config: ExperimentConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2, sort_keys=True) + "\n"
