import numpy as np
import pytest

from conftest import dense_rho
from densekatz import (
    ParameterError,
    SingularSystemError,
    SolveOptions,
    SparseMatrix,
    solve_shifted,
    spectral_radius,
    spmv,
)
from densekatz.exceptions import ConvergenceError
from densekatz.linalg import check_katz_parameter, require_converged, spectral_radius_sparse


def test_spmv_matches_dense():
    rng = np.random.default_rng(0)
    D = np.where(rng.random((7, 5)) < 0.4, rng.random((7, 5)), 0.0)
    M = SparseMatrix.from_dense(D)
    v = rng.random(5)
    np.testing.assert_allclose(spmv(M, v), D @ v, rtol=1e-15)
    with pytest.raises(Exception):
        spmv(M, np.ones(7))


@pytest.mark.parametrize("method", ["auto", "direct_factorization", "iterative"])
def test_solve_shifted_residual(method):
    rng = np.random.default_rng(1)
    n = 60
    D = np.where(rng.random((n, n)) < 0.1, rng.random((n, n)), 0.0)
    s = 0.5 / dense_rho(D)
    x = solve_shifted(SparseMatrix.from_dense(D), s, np.ones(n), SolveOptions(method))
    np.testing.assert_allclose((np.eye(n) + s * D) @ x, np.ones(n), atol=1e-11)
    # dense input goes to LAPACK and must agree
    np.testing.assert_allclose(solve_shifted(D, s, np.ones(n)), x, rtol=1e-10)


def test_solve_shifted_detects_singularity():
    # I - B with B = [[0, 1], [1, 0]] is singular
    B = SparseMatrix.from_dense([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(SingularSystemError):
        solve_shifted(B, -1.0, np.ones(2))
    with pytest.raises(SingularSystemError):
        solve_shifted(B.to_dense(), -1.0, np.ones(2))


def test_solve_shifted_trivial_cases():
    B = SparseMatrix.zeros(3, 3)
    np.testing.assert_array_equal(solve_shifted(B, 0.7, np.arange(3.0)), [0, 1, 2])


def test_solve_options_validation():
    with pytest.raises(ParameterError):
        SolveOptions("cholesky")
    with pytest.raises(ParameterError):
        SolveOptions(tol=0)
    assert SolveOptions().iteration_cap(7) == 70


def test_spectral_radius_examples():
    P3 = SparseMatrix.from_dense([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    est = spectral_radius_sparse(P3)
    assert est.converged
    assert abs(est.rho - np.sqrt(2)) < 1e-10
    golden = (1 + np.sqrt(5)) / 2
    est = spectral_radius_sparse(SparseMatrix.from_dense([[1, 1], [1, 0]]))
    assert abs(est.rho - golden) < 1e-10
    assert spectral_radius(lambda v: np.zeros_like(v), 4).rho == 0.0


def test_spectral_radius_random_against_eigvals():
    rng = np.random.default_rng(2)
    for _ in range(20):
        n = int(rng.integers(2, 60))
        D = np.where(rng.random((n, n)) < rng.uniform(0.2, 0.9), rng.random((n, n)), 0.0)
        est = spectral_radius(D.__matmul__, n)
        assert est.converged
        assert abs(est.rho - dense_rho(D)) <= 1e-8 * max(1.0, dense_rho(D))


def test_check_katz_parameter():
    check_katz_parameter(0.7, 1.0)
    with pytest.raises(ParameterError, match="exceeds 1/rho"):
        check_katz_parameter(1.0, 1.0)
    with pytest.raises(ParameterError):
        check_katz_parameter(-0.1, 1.0)


def test_require_converged():
    est = spectral_radius(np.array([[1.0, 1.0], [1.0, 0.0]]).__matmul__, 2, max_iter=1)
    with pytest.raises(ConvergenceError, match="no convergence"):
        require_converged(est)
