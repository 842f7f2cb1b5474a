import dataclasses

import numpy as np
import pytest

from difflmp.backend import available_backends, default_backend, get_kernels
from difflmp.config import bundled_config
from difflmp.harness import DIVERGENCE_NORM_FACTOR, generate_trial_data, run_experiment
from difflmp.topology import flatten_neighborhoods


def test_python_backend_always_available():
    assert "python" in available_backends()


def test_default_prefers_compiled_when_present():
    names = available_backends()
    if "compiled" in names:
        assert names[0] == "compiled"
    assert default_backend() in names


def test_unknown_backend_rejected():
    with pytest.raises(ValueError, match="unknown backend"):
        get_kernels("fortran")


def test_backend_env_override(monkeypatch):
    monkeypatch.setenv("DIFFLMP_BACKEND", "python")
    assert default_backend() == "python"
    monkeypatch.setenv("DIFFLMP_BACKEND", "basic")
    with pytest.raises(ValueError, match="DIFFLMP_BACKEND"):
        default_backend()


@pytest.mark.skipif(len(available_backends()) < 2, reason="compiled backend not built")
class TestCrossBackendAgreement:
    def small_config(self, noise="gaussian"):
        cfg = bundled_config(noise)
        return dataclasses.replace(cfg, iterations=300, trials=3)

    @pytest.mark.parametrize("algorithm", [
        "centralized-lmp",
        "centralized-wlmp",
        "diffusion-lmp",
        "weighted-diffusion-lmp",
    ])
    def test_trial_kernels_agree(self, algorithm):
        cfg = dataclasses.replace(self.small_config(), algorithms=(algorithm,))
        w_o, U, d = generate_trial_data(cfg, algorithm, 0)
        lim = DIVERGENCE_NORM_FACTOR * (1 + float(np.linalg.norm(w_o)))
        results = {}
        for name in ("python", "compiled"):
            k = get_kernels(name)
            weighted = algorithm in ("centralized-wlmp", "weighted-diffusion-lmp")
            if algorithm.startswith("centralized"):
                r = k.run_centralized_trial(
                    U, d, w_o, cfg.p, cfg.mu, cfg.epsilon, weighted,
                    cfg.mu_a_global, cfg.snapshot_stride, lim, True,
                )
            else:
                offsets, flat = flatten_neighborhoods(cfg.topology)
                r = k.run_diffusion_trial(
                    U, d, w_o, offsets, flat, cfg.p, cfg.mu, cfg.epsilon, weighted,
                    cfg.mu_a_local, cfg.snapshot_stride, lim, True,
                )
            results[name] = r
        a, b = results["python"], results["compiled"]
        assert a.diverged_at == b.diverged_at == -1
        np.testing.assert_allclose(a.trajectory, b.trajectory, rtol=1e-9, atol=1e-11)
        np.testing.assert_allclose(a.sq_dev, b.sq_dev, rtol=1e-8, atol=1e-12)
        if a.snapshots is not None:
            np.testing.assert_allclose(a.snapshots, b.snapshots, rtol=1e-8, atol=1e-12)
            np.testing.assert_allclose(a.final_weights, b.final_weights, rtol=1e-8, atol=1e-12)

    def test_full_experiment_curves_agree(self):
        cfg = self.small_config("alpha-stable")
        res_p = run_experiment(cfg, backend="python")
        res_c = run_experiment(cfg, backend="compiled")
        for name in cfg.algorithms:
            np.testing.assert_allclose(
                res_p.algorithms[name].curve.msd_db,
                res_c.algorithms[name].curve.msd_db,
                rtol=0,
                atol=1e-6,
            )

    def test_each_backend_is_self_deterministic(self):
        cfg = self.small_config()
        for name in available_backends():
            a = run_experiment(cfg, backend=name)
            b = run_experiment(cfg, backend=name)
            for alg in cfg.algorithms:
                np.testing.assert_array_equal(
                    a.algorithms[alg].curve.msd_db, b.algorithms[alg].curve.msd_db
                )
