import numpy as np
import pytest

from conftest import (
    MODES,
    as_graph,
    complement_dense,
    dense_katz,
    dense_perron,
    dense_rho,
    random_instance,
)
from densekatz import (
    CertificateError,
    ParameterError,
    SparseMatrix,
    WeightScale,
    build_graph,
    complement_unweighted,
    eigenvector_centrality_complement,
    eigenvector_centrality_resolvent,
    gamma_scalar,
    katz,
    katz_complement,
    katz_direct,
    katz_negative_series_check,
)
from densekatz.exceptions import ConvergenceError, GraphError
from densekatz.threshold import gap_ratio


def test_p3_direct_and_complement(p3, p3_complement):
    direct = katz_direct(p3, 0.5)
    np.testing.assert_allclose(direct.v, [3, 4, 3], rtol=1e-12)
    res = katz_complement(p3_complement, 0.5, "unweighted_loopless")
    np.testing.assert_allclose(res.v, [0.75, 1.0, 0.75], rtol=1e-12)
    assert res.scalar_certificates["chi"] == pytest.approx(2.5, rel=1e-12)
    assert res.scalar_certificates["denominator"] == pytest.approx(0.25, rel=1e-12)
    np.testing.assert_allclose(res.katz_vector, [3, 4, 3], rtol=1e-12)
    assert list(res.ranking) == [1, 0, 2]


def test_two_by_two_with_loops(two_by_two, diag01):
    res = katz_complement(diag01, 0.25, "unweighted_loops")
    assert res.scalar_certificates["gamma"] == pytest.approx(1.8, rel=1e-12)
    assert res.scalar_certificates["denominator"] == pytest.approx(0.55, rel=1e-12)
    np.testing.assert_allclose(res.katz_vector, [20 / 11, 16 / 11], rtol=1e-12)
    np.testing.assert_allclose(katz_direct(two_by_two, 0.25).v, [20 / 11, 16 / 11], rtol=1e-12)


def test_gamma_at_inverse_rho_is_rho(diag01):
    golden = (1 + np.sqrt(5)) / 2
    assert abs(gamma_scalar(diag01, 1 / golden) - golden) < 1e-10


@pytest.mark.parametrize("mode", MODES)
def test_complement_matches_dense_katz(mode):
    rng = np.random.default_rng(hash(mode) % 2**32)
    for _ in range(25):
        A, directed, rho = random_instance(rng, mode, (3, 60))
        t = rng.uniform(0.05, 0.95) / rho
        B = SparseMatrix.from_dense(complement_dense(A, mode))
        scale = None
        if mode.startswith("weighted"):
            u = A.max(axis=0) if mode == "weighted_loops" else np.full(len(A), A.max())
            scale = WeightScale(float(A.max()), u)
        res = katz_complement(B, t, mode, scale)
        w = dense_katz(A, t)
        np.testing.assert_allclose(res.katz_vector, w, rtol=1e-8)
        assert res.rank() == katz_direct(as_graph(A, mode, directed), t).rank()


@pytest.mark.parametrize("mode", MODES)
def test_katz_auto_routes_agree(mode):
    rng = np.random.default_rng(7)
    A, directed, rho = random_instance(rng, mode, (10, 40))
    G = as_graph(A, mode, directed)
    a = katz(G, t_frac=0.6, route="direct")
    b = katz(G, t_frac=0.6, route="complement")
    np.testing.assert_allclose(b.katz_vector, a.v, rtol=1e-8)


def test_weighted_with_loops_is_rescaled():
    A = np.array([[2.0, 4.0, 1.0], [4.0, 2.0, 4.0], [1.0, 4.0, 2.0]])
    G = as_graph(A, "weighted_loops", directed=False)
    t = 0.5 / dense_rho(A)
    res = katz(G, t, route="complement")
    assert res.scalar_certificates["weight_divisor"] == 4.0
    np.testing.assert_allclose(res.katz_vector, dense_katz(A, t), rtol=1e-10)


def test_parameter_errors(p3, p3_complement):
    with pytest.raises(ParameterError, match="exceeds 1/rho"):
        katz_direct(p3, 0.8)
    with pytest.raises(ParameterError, match="exceeds 1/rho"):
        katz_complement(p3_complement, 0.8, "unweighted_loopless")
    with pytest.raises(ParameterError):
        katz(p3)
    with pytest.raises(ParameterError):
        katz_complement(p3_complement, 0.5, "weighted_loops")


def test_complement_validation(p3_complement):
    with pytest.raises(GraphError):
        katz_complement(SparseMatrix.from_dense([[0.0, 2.0], [0.0, 0.0]]), 0.1, "unweighted_loops")
    with pytest.raises(GraphError, match="diagonal"):
        katz_complement(SparseMatrix.identity(3), 0.1, "unweighted_loopless")
    with pytest.raises(GraphError, match="rank-one"):
        katz_complement(
            SparseMatrix.from_dense([[0.0, 0.9], [0.0, 0.0]]),
            0.1,
            "weighted_loops",
            WeightScale(0.5, np.array([0.5, 0.5])),
        )


def test_negative_series_converges_to_complement_solve(diag01):
    even, odd = katz_negative_series_check(diag01, 0.25, 60)
    np.testing.assert_allclose(even - odd, [1.0, 0.8], rtol=1e-14)
    with pytest.raises(ParameterError):
        katz_negative_series_check(diag01, 0.25, -1)


def test_eigen_power_p3(p3_complement):
    res = eigenvector_centrality_complement(p3_complement, "loopless", tol=1e-12)
    expected = np.array([1, np.sqrt(2), 1]) / (2 + np.sqrt(2))
    np.testing.assert_allclose(res.v, expected, atol=1e-10)
    assert res.scalar_certificates["normalization_drift"] <= 1e-12
    assert res.scalar_certificates["rho"] == pytest.approx(np.sqrt(2), rel=1e-9)


def test_eigen_unshifted_oscillates_on_path(p3_complement):
    with pytest.raises(ConvergenceError):
        eigenvector_centrality_complement(p3_complement, "loopless", shift=0.0, max_iter=500)


def test_eigen_resolvent_p3(p3_complement):
    res = eigenvector_centrality_resolvent(p3_complement, loop_policy="loopless")
    np.testing.assert_allclose(res.v / res.v.max(), [1 / np.sqrt(2), 1, 1 / np.sqrt(2)], rtol=1e-9)


@pytest.mark.parametrize("mode", MODES)
def test_eigen_matches_perron(mode):
    rng = np.random.default_rng(11)
    done = 0
    while done < 8:
        A, directed, _ = random_instance(rng, mode, (5, 50))
        policy = "with_loops" if mode.endswith("_loops") else "loopless"
        B = SparseMatrix.from_dense(complement_dense(A, mode))
        scale = None
        if mode.startswith("weighted"):
            u = A.max(axis=0) if policy == "with_loops" else np.full(len(A), A.max())
            scale = WeightScale(float(A.max()), u)
        try:
            res = eigenvector_centrality_complement(B, policy, tol=1e-12, max_iter=100_000, scale=scale)
        except ConvergenceError:
            continue
        np.testing.assert_allclose(res.v, dense_perron(A), atol=1e-8)
        rv = eigenvector_centrality_resolvent(B, loop_policy=policy, scale=scale).v
        np.testing.assert_allclose(rv / rv.sum(), dense_perron(A), atol=1e-8)
        done += 1


def test_eigen_reducible_graph_is_rejected():
    # two disjoint triangles
    edges = [(i, j) for blk in (0, 3) for i in range(blk, blk + 3) for j in range(blk, blk + 3) if i != j]
    G = build_graph(6, edges, "loopless", directed=False)
    B = complement_unweighted(G)
    with pytest.raises(ConvergenceError, match="not strongly connected"):
        eigenvector_centrality_complement(B, "loopless")


def test_eigen_bad_start_vector(p3_complement):
    with pytest.raises(ParameterError):
        eigenvector_centrality_complement(p3_complement, "loopless", v0=[1.0, 1.0, 1.0])


def test_denominator_certificate_guards_bad_rho(p3_complement):
    # a caller-supplied rho that is too small lets t through; the certificate catches it
    with pytest.raises(CertificateError, match="denominator"):
        katz_complement(p3_complement, 0.9, "unweighted_loopless", rho=1.0)


def test_katz_near_inverse_rho_matches_eigenvector_ranking():
    rng = np.random.default_rng(21)
    checked = 0
    for _ in range(20):
        A, _, rho = random_instance(rng, "unweighted_loops", (5, 40))
        B = SparseMatrix.from_dense(complement_dense(A, "unweighted_loops"))
        try:
            eig = eigenvector_centrality_complement(B, "with_loops", tol=1e-13, max_iter=100_000)
        except ConvergenceError:
            continue
        res = katz_complement(B, (1 - 1e-6) / rho, "unweighted_loops", rho=rho)
        # scores closer than the Katz-vs-Perron discrepancy cannot be ordered reliably
        if gap_ratio(dense_perron(A)) < 1e-4:
            continue
        assert res.rank() == eig.rank()
        checked += 1
    assert checked >= 5


def test_slow_power_iteration_falls_back_to_upper_bound():
    # reducible: a 2-cycle feeding a sink with the same spectral radius
    A = SparseMatrix.from_dense([[0, 1, 1], [1, 0, 0], [0, 0, 1.0]])
    from densekatz.linalg import rho_for_parameter, spectral_radius_sparse

    est = spectral_radius_sparse(A, max_iter=50)
    assert est.lower <= 1.0 <= est.upper
    assert rho_for_parameter(est, 0.5) >= 1.0
    with pytest.raises(ConvergenceError):
        rho_for_parameter(est, 1.0 / est.rho)
