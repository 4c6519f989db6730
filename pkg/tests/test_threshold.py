import numpy as np
import pytest

from conftest import dense_katz, planted_threshold_instance
from densekatz import (
    ParameterError,
    SparseMatrix,
    WeightScale,
    check_sufficient,
    defect_vector,
    gap_ratio,
    graph_from_matrix,
    katz_thresholded,
    rank,
    sparsify,
)
from densekatz.threshold import epsilon_grid, threshold_sweep


def test_sparsify_drops_entries_at_or_below_epsilon():
    B = SparseMatrix.from_dense([[0.0, 0.05, 0.3], [0.1, 0.0, 0.2], [0.0, 0.4, 0.0]])
    thr = sparsify(B, 0.1)
    np.testing.assert_array_equal(thr.B0.to_dense(), [[0, 0, 0.3], [0, 0, 0.2], [0, 0.4, 0]])
    assert thr.dropped_count == 2
    assert thr.density_before == pytest.approx(5 / 9)
    assert thr.sparsity == pytest.approx(6 / 9)
    assert sparsify(B, 0.0).B0.nnz == B.nnz
    with pytest.raises(ParameterError):
        sparsify(B, -1.0)


def test_defect_vector():
    B = SparseMatrix.from_dense([[0.0, 0.05, 0.3], [0.1, 0.0, 0.2], [0.08, 0.4, 0.0]])
    thr = sparsify(B, 0.1)
    np.testing.assert_allclose(defect_vector(B, thr.B0, 0.1), [1.0, 0.5, 0.0])
    np.testing.assert_array_equal(defect_vector(B, B, 0.0), [0, 0, 0])
    with pytest.raises(ParameterError):
        defect_vector(B, thr.B0, 0.0)


def test_gap_ratio():
    assert gap_ratio([3.0, 4.0, 3.5]) == pytest.approx(0.125)
    assert gap_ratio([1.0, 1.0, 2.0]) == 0.0
    assert gap_ratio([2.0]) == 1.0


def test_epsilon_grid():
    assert epsilon_grid(10, (1, 2)) == [0.1, 0.01]


def test_nothing_dropped_is_trivially_certified():
    A = np.array([[1.0, 0.5], [0.2, 1.0]])
    G = graph_from_matrix(A, "with_loops")
    B = SparseMatrix.from_dense(A.max(axis=0)[None, :] - A)
    rep = check_sufficient(G, B, B, 1e-9, 0.3)
    assert rep.cTw == 0 and rep.cond_c_ok and rep.certified
    assert rep.as_dict()["verdict"] == "certified"


def test_large_epsilon_is_not_certified():
    A = np.array([[1.0, 0.5, 0.9], [0.2, 1.0, 0.1], [0.6, 0.7, 1.0]])
    G = graph_from_matrix(A, "with_loops")
    B = SparseMatrix.from_dense(A.max(axis=0)[None, :] - A)
    thr = sparsify(B, 0.5)
    rep = check_sufficient(G, B, thr.B0, 0.5, 0.2)
    assert not rep.certified


def test_dense_budget_guard():
    A = np.array([[1.0, 0.5], [0.2, 1.0]])
    G = graph_from_matrix(A, "with_loops")
    B = SparseMatrix.from_dense(A.max(axis=0)[None, :] - A)
    with pytest.raises(ParameterError, match="budget"):
        check_sufficient(G, B, B, 0.0, 0.3, dense_budget=1)


@pytest.mark.parametrize("variant", ["with_loops", "loopless"])
def test_certified_instances_keep_the_ranking(variant):
    rng = np.random.default_rng(5)
    certified = dropped = 0
    for _ in range(60):
        G, B, eps, t, w = planted_threshold_instance(rng, variant, (5, 40))
        thr = sparsify(B, eps)
        rep = check_sufficient(G, B, thr.B0, eps, t, w=w)
        assert rep.cond_e_ok <= rep.cond_c_ok  # the e-variant is the stronger test
        if not rep.certified:
            continue
        certified += 1
        dropped += thr.dropped_count > 0
        scale = WeightScale(float(G.adj.values.max()), rep_u(G, variant))
        v0 = katz_thresholded(thr.B0, t, variant, scale).v
        assert rank(v0) == rank(w)
    assert certified >= 40 and dropped >= 20


def rep_u(G, variant):
    A = G.to_dense()
    return A.max(axis=0) if variant == "with_loops" else np.full(G.n, A.max())


def test_threshold_sweep_rows():
    rng = np.random.default_rng(9)
    G, B, eps, t, w = planted_threshold_instance(rng, "with_loops", (20, 30))
    scale = WeightScale(1.0, rep_u(G, "with_loops"))
    rows = threshold_sweep(B, t, "with_loops", scale, [0.0, eps, 0.5])
    assert rows[0]["tau"] == pytest.approx(1.0) and rows[0]["dropped"] == 0
    assert rows[1]["same_ranking"]
    assert rows[2]["density"] <= rows[1]["density"]
    ref = dense_katz(G.to_dense(), t)
    rows2 = threshold_sweep(B, t, "with_loops", scale, [eps], reference=ref)
    assert rows2[0]["tau"] == pytest.approx(1.0)
