import numpy as np
import pytest

from densekatz import ParameterError
from densekatz.experiments import (
    ExperimentConfig,
    bench,
    dense_instance,
    experiment_random,
    experiment_sufficiency,
    random_power_matrix,
    synthetic_graph,
    trial_rng,
)


def test_config_validation():
    assert ExperimentConfig(n=10).size == 30
    assert ExperimentConfig(n=10, epsilon_power=2).threshold == pytest.approx(30.0**-2)
    with pytest.raises(ParameterError):
        ExperimentConfig(n=0)
    with pytest.raises(ParameterError):
        ExperimentConfig(n=5, t_frac=1.0)


def test_trial_streams_are_independent_of_order():
    a = random_power_matrix(4, trial_rng(7, 3))
    random_power_matrix(4, trial_rng(7, 2))
    b = random_power_matrix(4, trial_rng(7, 3))
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, random_power_matrix(4, trial_rng(8, 3)))


def test_dense_instance_complement_is_exact():
    inst = dense_instance(random_power_matrix(5, trial_rng(0, 0)), 0.5)
    np.testing.assert_allclose(inst.u[None, :] - inst.B, inst.A, atol=1e-15)
    assert (inst.B >= 0).all()
    assert inst.rho == pytest.approx(np.max(np.abs(np.linalg.eigvals(inst.A))), rel=1e-10)


def test_experiment_random_is_reproducible():
    cfg = ExperimentConfig(n=10, trials=3, seed=4)
    r1, r2 = experiment_random(cfg), experiment_random(cfg)
    assert r1["tau"] == r2["tau"]
    assert r1["config"]["seed"] == 4 and "version" in r1


def test_experiment_random_zero_threshold():
    r = experiment_random(ExperimentConfig(n=5, trials=2, epsilon=0.0))
    assert r["tau"] == [1.0, 1.0]


def test_experiment_sufficiency_rows():
    r = experiment_sufficiency(ExperimentConfig(n=10, trials=1), powers=(1, 4), extra_epsilons=(0.0,))
    assert [row["power"] for row in r["rows"]] == [1, 4, None]
    assert r["rows"][-1]["verdict"] == "certified"
    assert r["rows"][0]["sparsity"] > r["rows"][1]["sparsity"]


def test_synthetic_graph_shapes():
    G = synthetic_graph(50, 4, dense=False)
    assert G.num_edges == 2 * 2 * 50 and not G.directed
    H = synthetic_graph(50, 4, dense=True)
    assert H.num_edges == G.max_edges - 200


def test_bench_reports_consistent_rankings():
    r = bench(synthetic_graph(80, 4, dense=True), repeats=2)
    assert r["same_ranking"]
    assert set(r["direct"]) >= {"dense", "sparse", "krylov", "best"}
    with pytest.raises(ParameterError):
        from densekatz.graph import build_graph

        bench(build_graph(2, [(0, 1, 0.5)], "loopless"))
