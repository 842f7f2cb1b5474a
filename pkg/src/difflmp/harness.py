"""Monte-Carlo orchestration: seeding, trial execution, reduction, export.

Every random stream is derived from
``SeedSequence([master_seed, algorithm_id, trial, node, role])`` so results
are independent of worker scheduling and of which other algorithms run in
the same experiment.  Reduction accumulates per-trial curves in trial-index
order, which makes the outputs byte-identical across reruns and worker
counts (for a fixed backend).
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algorithms import ALGORITHM_IDS, CENTRALIZED_ALGORITHMS, DivergenceError, WEIGHTED_ALGORITHMS
from .backend import default_backend, get_kernels
from .config import ExperimentConfig, config_to_json
from .inspector import WeightTrace
from .metrics import LearningCurve, average_curves, linear_to_db
from .noise import sample_noise_block
from .topology import flatten_neighborhoods

ROLE_GROUND_TRUTH = 0
ROLE_REGRESSOR = 1
ROLE_NOISE = 2

DIVERGENCE_NORM_FACTOR = 1e6


@dataclass
class AlgorithmResult:
    """Aggregated output of all trials of one algorithm."""

    curve: LearningCurve
    per_node_msd_db: np.ndarray | None
    weight_trace: WeightTrace | None
    final_weights: np.ndarray | None
    diverged_trials: int


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    algorithms: dict[str, AlgorithmResult]
    wall_time_s: float
    backend: str


def substream(master_seed: int, algorithm_id: int, trial: int, node: int, role: int) -> np.random.Generator:
    """Independent generator for one (algorithm, trial, node, role) slot."""
    seq = np.random.SeedSequence([master_seed, algorithm_id, trial, node, role])
    return np.random.default_rng(seq)


def generate_trial_data(config: ExperimentConfig, algorithm: str, trial: int):
    """Ground truth, regressors, and measurements for one trial.

    Returns ``(w_o, U, d)`` with ``U`` of shape (iterations, N, M) and
    ``d`` of shape (iterations, N).
    """
    alg_id = ALGORITHM_IDS[algorithm]
    n = config.topology.num_nodes
    t = config.iterations

    gt_rng = substream(config.master_seed, alg_id, trial, 0, ROLE_GROUND_TRUTH)
    w_o = gt_rng.standard_normal(config.M)

    U = np.empty((t, n, config.M))
    v = np.empty((t, n))
    for k in range(n):
        reg_rng = substream(config.master_seed, alg_id, trial, k, ROLE_REGRESSOR)
        U[:, k, :] = config.sigma_u * reg_rng.standard_normal((t, config.M))
        noise_rng = substream(config.master_seed, alg_id, trial, k, ROLE_NOISE)
        v[:, k] = sample_noise_block(config.noise, k, noise_rng, t)
    d = np.einsum("tnm,m->tn", U, w_o) + v
    return w_o, U, d


def _run_trial(config: ExperimentConfig, algorithm: str, trial: int, kernels):
    w_o, U, d = generate_trial_data(config, algorithm, trial)
    div_limit = DIVERGENCE_NORM_FACTOR * (1.0 + float(np.linalg.norm(w_o)))
    weighted = algorithm in WEIGHTED_ALGORITHMS
    if algorithm in CENTRALIZED_ALGORITHMS:
        return kernels.run_centralized_trial(
            U, d, w_o,
            config.p, config.mu, config.epsilon,
            weighted, config.mu_a_global,
            config.snapshot_stride, div_limit,
        )
    offsets, flat = flatten_neighborhoods(config.topology)
    return kernels.run_diffusion_trial(
        U, d, w_o, offsets, flat,
        config.p, config.mu, config.epsilon,
        weighted, config.mu_a_local,
        config.snapshot_stride, div_limit,
    )


def _reduce_algorithm(config: ExperimentConfig, algorithm: str, trial_results) -> AlgorithmResult:
    usable = [r for r in trial_results if r.diverged_at < 0]
    diverged = len(trial_results) - len(usable)
    if not usable:
        raise DivergenceError(
            f"all {len(trial_results)} trials diverged for algorithm {algorithm!r}"
        )
    curve = average_curves(
        [r.sq_dev for r in usable], algorithm=algorithm, diverged_trials=diverged
    )

    per_node = None
    if usable[0].node_sq_dev is not None:
        total = np.zeros_like(usable[0].node_sq_dev)
        for r in usable:
            total += r.node_sq_dev
        per_node = linear_to_db(total / len(usable))

    trace = None
    final_weights = None
    if usable[0].snapshots is not None:
        snap_total = np.zeros_like(usable[0].snapshots)
        final_total = np.zeros_like(usable[0].final_weights)
        for r in usable:
            snap_total += r.snapshots
            final_total += r.final_weights
        snap_mean = snap_total / len(usable)
        final_weights = final_total / len(usable)
        trace = WeightTrace(stride=config.snapshot_stride)
        for idx, iteration in enumerate(usable[0].snap_iterations):
            trace.iterations.append(int(iteration))
            trace.snapshots.append(snap_mean[idx])

    return AlgorithmResult(
        curve=curve,
        per_node_msd_db=per_node,
        weight_trace=trace,
        final_weights=final_weights,
        diverged_trials=diverged,
    )


def run_experiment(
    config: ExperimentConfig,
    backend: str | None = None,
    workers: int = 1,
) -> ExperimentResult:
    """Run every configured algorithm over all trials.

    Trials may execute on ``workers`` threads; outputs do not depend on
    the worker count or completion order.
    """
    backend_name = backend if backend is not None else default_backend()
    kernels = get_kernels(backend_name)
    start = time.perf_counter()

    results: dict[str, AlgorithmResult] = {}
    for algorithm in config.algorithms:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                trial_results = list(
                    pool.map(
                        lambda t: _run_trial(config, algorithm, t, kernels),
                        range(config.trials),
                    )
                )
        else:
            trial_results = [
                _run_trial(config, algorithm, t, kernels) for t in range(config.trials)
            ]
        results[algorithm] = _reduce_algorithm(config, algorithm, trial_results)

    return ExperimentResult(
        config=config,
        algorithms=results,
        wall_time_s=time.perf_counter() - start,
        backend=backend_name,
    )


def _fmt(x) -> str:
    # repr of a Python float is the shortest round-trip form: stable across
    # runs, parseable, '.' decimal.
    return repr(float(x))


def _write_csv(path, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def export_results(result: ExperimentResult, out_dir, plot: bool = False) -> list[str]:
    """Write CSV curves, weight tables, config echo, and summary to ``out_dir``.

    Returns the list of file names written.  Identical results export
    byte-identically.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    config = result.config

    rows = []
    for algorithm in config.algorithms:
        curve = result.algorithms[algorithm].curve
        for n, value in enumerate(curve.msd_db):
            rows.append((algorithm, str(n), _fmt(value)))
    _write_csv(os.path.join(out_dir, "msd_curves.csv"), "algorithm,iteration,msd_db", rows)
    written.append("msd_curves.csv")

    rows = []
    for algorithm in config.algorithms:
        per_node = result.algorithms[algorithm].per_node_msd_db
        if per_node is None:
            continue
        for k in range(per_node.shape[0]):
            for n in range(per_node.shape[1]):
                rows.append((algorithm, str(k), str(n), _fmt(per_node[k, n])))
    _write_csv(os.path.join(out_dir, "per_node_msd.csv"), "algorithm,node,iteration,msd_db", rows)
    written.append("per_node_msd.csv")

    offsets, flat = flatten_neighborhoods(config.topology)

    def weight_rows(algorithm: str, values: np.ndarray, prefix: tuple[str, ...]):
        if algorithm in CENTRALIZED_ALGORITHMS:
            for k in range(values.shape[0]):
                yield prefix + (str(k), "", _fmt(values[k]))
        else:
            for k in range(config.topology.num_nodes):
                for j in range(int(offsets[k]), int(offsets[k + 1])):
                    yield prefix + (str(k), str(int(flat[j])), _fmt(values[j]))

    rows = []
    for algorithm in config.algorithms:
        final = result.algorithms[algorithm].final_weights
        if final is None:
            continue
        rows.extend(weight_rows(algorithm, final, (algorithm,)))
    _write_csv(os.path.join(out_dir, "weights_final.csv"), "algorithm,node,neighbor,weight", rows)
    written.append("weights_final.csv")

    rows = []
    for algorithm in config.algorithms:
        trace = result.algorithms[algorithm].weight_trace
        if trace is None:
            continue
        for iteration, snapshot in zip(trace.iterations, trace.snapshots):
            rows.extend(weight_rows(algorithm, snapshot, (algorithm, str(iteration))))
    _write_csv(
        os.path.join(out_dir, "weights_trace.csv"),
        "algorithm,iteration,node,neighbor,weight",
        rows,
    )
    written.append("weights_trace.csv")

    with open(os.path.join(out_dir, "config_echo.json"), "w", encoding="utf-8", newline="") as fh:
        fh.write(config_to_json(config))
    written.append("config_echo.json")

    summary = {
        "backend": result.backend,
        "wall_time_s": result.wall_time_s,
        "algorithms": {
            name: {
                "trials_used": res.curve.trials_used,
                "diverged_trials": res.diverged_trials,
                "final_msd_db": float(res.curve.msd_db[-1]),
            }
            for name, res in result.algorithms.items()
        },
    }
    with open(os.path.join(out_dir, "run_summary.json"), "w", encoding="utf-8", newline="") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append("run_summary.json")

    if plot:
        from .svgplot import learning_curve_svg

        for algorithm in config.algorithms:
            curve = result.algorithms[algorithm].curve
            name = f"learning_curve_{algorithm}.svg"
            with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="") as fh:
                fh.write(learning_curve_svg(curve.msd_db, algorithm))
            written.append(name)

    return written
