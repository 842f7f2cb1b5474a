import dataclasses
import json

import numpy as np
import pytest

from difflmp.algorithms import lmp_influence
from difflmp.config import bundled_config, parse_config
from difflmp.harness import (
    ROLE_GROUND_TRUTH,
    ROLE_NOISE,
    ROLE_REGRESSOR,
    export_results,
    generate_trial_data,
    run_experiment,
    substream,
)
from test_config import minimal_config


def tiny_config(**overrides):
    doc = minimal_config(
        algorithms=[
            "centralized-lmp",
            "centralized-wlmp",
            "diffusion-lmp",
            "weighted-diffusion-lmp",
        ],
        iterations=40,
        trials=3,
        master_seed=77,
    )
    doc.update(overrides)
    return parse_config(json.dumps(doc))


def read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestSeeding:
    def test_substreams_are_independent_slots(self):
        a = substream(1, 0, 0, 0, ROLE_REGRESSOR).standard_normal(4)
        b = substream(1, 0, 0, 0, ROLE_NOISE).standard_normal(4)
        c = substream(1, 0, 0, 1, ROLE_REGRESSOR).standard_normal(4)
        assert not np.allclose(a, b)
        assert not np.allclose(a, c)

    def test_substream_determinism(self):
        a = substream(9, 2, 5, 3, ROLE_GROUND_TRUTH).standard_normal(8)
        b = substream(9, 2, 5, 3, ROLE_GROUND_TRUTH).standard_normal(8)
        np.testing.assert_array_equal(a, b)

    def test_trial_data_shapes_and_model(self):
        cfg = tiny_config()
        w_o, U, d = generate_trial_data(cfg, "diffusion-lmp", 0)
        assert w_o.shape == (cfg.M,)
        assert U.shape == (cfg.iterations, 3, cfg.M)
        assert d.shape == (cfg.iterations, 3)
        # measurements minus the regression part leave exactly the noise
        noise = d - np.einsum("tnm,m->tn", U, w_o)
        assert np.isfinite(noise).all()

    def test_different_algorithms_get_different_data(self):
        cfg = tiny_config()
        _, U1, _ = generate_trial_data(cfg, "centralized-lmp", 0)
        _, U2, _ = generate_trial_data(cfg, "diffusion-lmp", 0)
        assert not np.allclose(U1, U2)


class TestRunExperiment:
    def test_degenerate_single_lms_step(self):
        # N=1, p=2, one iteration: the MSD is computable from the raw draw
        doc = minimal_config(
            topology={"num_nodes": 1, "edges": []},
            noise={"kind": "gaussian", "stds": [0.4]},
            algorithms=["centralized-lmp"],
            p=2.0,
            epsilon=0.0,
            M=3,
            mu=0.1,
            iterations=1,
            trials=1,
            snapshot_stride=1,
        )
        cfg = parse_config(json.dumps(doc))
        result = run_experiment(cfg)
        w_o, U, d = generate_trial_data(cfg, "centralized-lmp", 0)
        e = d[0, 0]
        w = cfg.mu * e * U[0, 0]
        expected = 10 * np.log10(np.sum((w - w_o) ** 2))
        assert result.algorithms["centralized-lmp"].curve.msd_db[0] == pytest.approx(
            expected, abs=1e-9
        )

    def test_lmp_influence_feeds_the_curve(self):
        # same degenerate run with p=1.2 changes the step by the influence factor
        doc = minimal_config(
            topology={"num_nodes": 1, "edges": []},
            noise={"kind": "gaussian", "stds": [0.4]},
            algorithms=["centralized-lmp"],
            p=1.2,
            M=3,
            mu=0.1,
            iterations=1,
            trials=1,
            snapshot_stride=1,
        )
        cfg = parse_config(json.dumps(doc))
        result = run_experiment(cfg)
        w_o, U, d = generate_trial_data(cfg, "centralized-lmp", 0)
        w = cfg.mu * lmp_influence(d[0, 0], 1.2, cfg.epsilon) * U[0, 0]
        expected = 10 * np.log10(np.sum((w - w_o) ** 2))
        assert result.algorithms["centralized-lmp"].curve.msd_db[0] == pytest.approx(
            expected, abs=1e-9
        )

    def test_algorithm_isolation(self):
        full = run_experiment(tiny_config())
        solo = run_experiment(tiny_config(algorithms=["diffusion-lmp"]))
        np.testing.assert_array_equal(
            full.algorithms["diffusion-lmp"].curve.msd_db,
            solo.algorithms["diffusion-lmp"].curve.msd_db,
        )

    def test_curve_lengths(self):
        cfg = tiny_config()
        result = run_experiment(cfg)
        for res in result.algorithms.values():
            assert res.curve.msd_db.shape == (cfg.iterations,)

    def test_weighted_results_carry_traces(self):
        result = run_experiment(tiny_config())
        wd = result.algorithms["weighted-diffusion-lmp"]
        assert wd.weight_trace is not None
        assert wd.final_weights is not None
        for snap in wd.weight_trace.snapshots:
            assert np.isfinite(snap).all()
        plain = result.algorithms["diffusion-lmp"]
        assert plain.weight_trace is None

    def test_trace_rows_are_stochastic(self):
        result = run_experiment(tiny_config())
        cw = result.algorithms["centralized-wlmp"]
        for snap in cw.weight_trace.snapshots:
            assert snap.sum() == pytest.approx(1.0, abs=1e-12)


class TestDeterminismAndExport:
    def test_two_runs_export_identical_bytes(self, tmp_path):
        cfg = tiny_config()
        out1, out2 = tmp_path / "a", tmp_path / "b"
        export_results(run_experiment(cfg), out1, plot=True)
        export_results(run_experiment(cfg), out2, plot=True)
        for name in [
            "msd_curves.csv",
            "per_node_msd.csv",
            "weights_final.csv",
            "weights_trace.csv",
            "config_echo.json",
            "learning_curve_diffusion-lmp.svg",
        ]:
            assert read_bytes(out1 / name) == read_bytes(out2 / name), name

    def test_worker_count_does_not_change_bytes(self, tmp_path):
        cfg = tiny_config(trials=5)
        out1, out2 = tmp_path / "w1", tmp_path / "w4"
        export_results(run_experiment(cfg, workers=1), out1)
        export_results(run_experiment(cfg, workers=4), out2)
        for name in ["msd_curves.csv", "per_node_msd.csv", "weights_final.csv", "weights_trace.csv"]:
            assert read_bytes(out1 / name) == read_bytes(out2 / name), name

    def test_seed_changes_output(self):
        a = run_experiment(tiny_config(master_seed=1))
        b = run_experiment(tiny_config(master_seed=2))
        assert not np.allclose(
            a.algorithms["diffusion-lmp"].curve.msd_db,
            b.algorithms["diffusion-lmp"].curve.msd_db,
        )

    def test_csv_shapes_and_headers(self, tmp_path):
        cfg = tiny_config()
        written = export_results(run_experiment(cfg), tmp_path / "out")
        assert "msd_curves.csv" in written
        lines = (tmp_path / "out" / "msd_curves.csv").read_text().splitlines()
        assert lines[0] == "algorithm,iteration,msd_db"
        assert len(lines) == 1 + len(cfg.algorithms) * cfg.iterations
        for line in lines[1:]:
            algorithm, iteration, value = line.split(",")
            float(value)
            int(iteration)

    def test_per_node_rows_only_for_diffusion(self, tmp_path):
        cfg = tiny_config()
        export_results(run_experiment(cfg), tmp_path / "out")
        lines = (tmp_path / "out" / "per_node_msd.csv").read_text().splitlines()
        algorithms = {line.split(",")[0] for line in lines[1:]}
        assert algorithms == {"diffusion-lmp", "weighted-diffusion-lmp"}
        n, t = cfg.topology.num_nodes, cfg.iterations
        assert len(lines) == 1 + 2 * n * t

    def test_config_echo_round_trips(self, tmp_path):
        cfg = tiny_config()
        export_results(run_experiment(cfg), tmp_path / "out")
        echoed = parse_config((tmp_path / "out" / "config_echo.json").read_text())
        assert echoed.master_seed == cfg.master_seed
        assert echoed.algorithms == cfg.algorithms

    def test_run_summary_reports_divergence_counts(self, tmp_path):
        cfg = tiny_config()
        export_results(run_experiment(cfg), tmp_path / "out")
        summary = json.loads((tmp_path / "out" / "run_summary.json").read_text())
        for name in cfg.algorithms:
            assert summary["algorithms"][name]["diverged_trials"] == 0

    def test_svg_only_when_requested(self, tmp_path):
        cfg = tiny_config(algorithms=["diffusion-lmp"])
        written = export_results(run_experiment(cfg), tmp_path / "out")
        assert not any(name.endswith(".svg") for name in written)
        written = export_results(run_experiment(cfg), tmp_path / "out2", plot=True)
        svg = (tmp_path / "out2" / "learning_curve_diffusion-lmp.svg").read_text()
        assert svg.startswith("<svg") and "polyline" in svg


class TestBundledExperimentSmoke:
    def test_reduced_gaussian_run(self):
        cfg = dataclasses.replace(bundled_config("gaussian"), trials=2, iterations=60)
        result = run_experiment(cfg)
        assert set(result.algorithms) == set(cfg.algorithms)
        for res in result.algorithms.values():
            assert np.isfinite(res.curve.msd_db).all()
