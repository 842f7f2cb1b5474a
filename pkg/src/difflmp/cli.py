"""Command-line entry point.

    difflmp run --config configs/gaussian.json --out results/

``--config`` accepts a file path or the name of a bundled config
('gaussian' or 'alpha-stable').
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .algorithms import ALGORITHM_IDS, DivergenceError
from .backend import available_backends
from .config import BUNDLED_CONFIGS, ConfigError, bundled_config_text, parse_config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="difflmp",
        description="Diffusion LMP sensor-network estimation experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a configured experiment and export results")
    run.add_argument("--config", required=True, help="config file path or bundled name")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--seed", type=int, default=None, help="override master_seed")
    run.add_argument("--trials", type=int, default=None, help="override trial count")
    run.add_argument("--plot", action="store_true", help="emit SVG learning curves")
    run.add_argument(
        "--algorithms", default=None, help="comma-separated algorithm subset override"
    )
    run.add_argument(
        "--workers", type=int, default=1, help="trial worker threads (default 1)"
    )
    run.add_argument(
        "--backend",
        default=None,
        choices=available_backends(),
        help="kernel backend (default: compiled when available)",
    )
    return parser


def _load_config_text(spec: str) -> str:
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            return fh.read()
    if spec in BUNDLED_CONFIGS:
        return bundled_config_text(spec)
    raise ConfigError(f"config {spec!r} is neither a file nor a bundled name")


def _apply_overrides(config, args):
    overrides = {}
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError(f"master_seed must fit in 64 bits, got {args.seed}")
        overrides["master_seed"] = args.seed
    if args.trials is not None:
        if args.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {args.trials}")
        overrides["trials"] = args.trials
    if args.algorithms is not None:
        names = tuple(name.strip() for name in args.algorithms.split(",") if name.strip())
        if not names:
            raise ConfigError("--algorithms override is empty")
        for name in names:
            if name not in ALGORITHM_IDS:
                raise ConfigError(
                    f"algorithms: unknown algorithm {name!r}; choices: {sorted(ALGORITHM_IDS)}"
                )
        overrides["algorithms"] = names
    return dataclasses.replace(config, **overrides) if overrides else config


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    try:
        config = _apply_overrides(parse_config(_load_config_text(args.config)), args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    from .harness import export_results, run_experiment

    try:
        result = run_experiment(config, backend=args.backend, workers=args.workers)
        written = export_results(result, args.out, plot=args.plot)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for name, res in result.algorithms.items():
        tail = res.curve.msd_db[-max(1, len(res.curve.msd_db) // 10):]
        print(
            f"{name}: steady-state MSD {float(tail.mean()):.2f} dB, "
            f"{res.curve.trials_used} trials used, {res.diverged_trials} diverged"
        )
    print(f"wrote {len(written)} files to {args.out} (backend: {result.backend})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
