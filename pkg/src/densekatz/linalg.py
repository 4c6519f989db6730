"""Sparse kernels: products, shifted solves and spectral-radius estimation."""

from __future__ import annotations

import warnings
from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import ConvergenceError, GraphError, ParameterError, SingularSystemError, SolverError
from .graph import ComplementView, SparseMatrix

#: factor applied to a spectral-radius estimate before checking t < 1/rho
RHO_SAFETY = 1.0 + 1e-8
#: nnz(I + sB) above which the "auto" solver switches to a Krylov method
DIRECT_NNZ_BUDGET = 100_000

SolveMethod = Literal["auto", "direct_factorization", "iterative"]


@dataclass(frozen=True)
class SolveOptions:
    """How a shifted system is solved. Only the residual bound is a contract."""

    method: SolveMethod = "auto"
    tol: float = 1e-12
    max_iter: int | None = None

    def __post_init__(self):
        if self.method not in ("auto", "direct_factorization", "iterative"):
            raise ParameterError(f"unknown solve method {self.method!r}")
        if not self.tol > 0:
            raise ParameterError("tol must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ParameterError("max_iter must be at least 1")

    def iteration_cap(self, n: int) -> int:
        return self.max_iter if self.max_iter is not None else 10 * n


DEFAULT_SOLVE = SolveOptions()


@dataclass(frozen=True)
class SpectralEstimate:
    """``lower``/``upper`` are Collatz-Wielandt bounds ``min/max (Ax)_i / x_i``
    from the final iterate; they bracket rho for any positive ``x``, converged
    or not (``upper`` is ``inf`` when ``x`` has a zero entry)."""

    rho: float
    iterations: int
    converged: bool
    residual: float
    lower: float = 0.0
    upper: float = float("inf")


def spmv(M: SparseMatrix, v) -> np.ndarray:
    """Exact CSR product ``M @ v``."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != M.n_cols:
        raise GraphError(f"cannot multiply {M.shape} matrix by vector of shape {v.shape}")
    return M.csr @ v


def implicit_matvec(view: ComplementView, v) -> np.ndarray:
    """``A @ v`` for ``A = e u^T + shift I - B`` without forming ``A``."""
    return view.matvec(v)


def _residual(apply, x, rhs) -> float:
    r = apply(x) - rhs
    return float(np.linalg.norm(r) / max(np.linalg.norm(rhs), np.finfo(float).tiny))


def solve_shifted(B, s: float, rhs, opts: SolveOptions = DEFAULT_SOLVE) -> np.ndarray:
    """Solve ``(I + s B) x = rhs`` to relative residual ``opts.tol``.

    ``B`` may be a :class:`SparseMatrix` or a dense ``ndarray``; dense input
    goes to LAPACK. Singularity is detected, not assumed.
    """
    rhs = np.asarray(rhs, dtype=np.float64)
    if isinstance(B, np.ndarray):
        return _solve_dense(B, s, rhs, opts)
    n = B.n_rows
    if B.shape != (n, n) or rhs.shape != (n,):
        raise GraphError("solve_shifted needs a square matrix and a matching right-hand side")
    if s == 0.0 or B.nnz == 0:
        return rhs.copy()
    M = (sp.eye_array(n, format="csc") + s * B.csr.tocsc()).tocsc()
    apply = M.__matmul__
    method = opts.method
    if method == "auto":
        method = "direct_factorization" if M.nnz <= DIRECT_NNZ_BUDGET else "iterative"
    if method == "direct_factorization":
        x = _solve_lu(M, rhs, opts.tol)
    else:
        x = _solve_krylov(M, rhs, opts, n)
    res = _residual(apply, x, rhs)
    if not np.all(np.isfinite(x)) or res > opts.tol:
        raise SingularSystemError(
            f"shifted system is numerically singular: relative residual {res:.3e} > {opts.tol:.1e}"
        )
    return x


def _solve_lu(M, rhs, tol):
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", sp.SparseEfficiencyWarning)
            lu = spla.splu(M)
    except RuntimeError as exc:
        raise SingularSystemError(f"sparse factorization failed: {exc}") from exc
    x = lu.solve(rhs)
    # two steps of iterative refinement recover digits lost to pivot growth
    for _ in range(2):
        r = rhs - M @ x
        if np.linalg.norm(r) <= tol * np.linalg.norm(rhs):
            break
        x = x + lu.solve(r)
    return x


def _solve_krylov(M, rhs, opts, n):
    x, info = spla.gmres(
        M, rhs, rtol=opts.tol, atol=0.0, restart=min(n, 50), maxiter=opts.iteration_cap(n)
    )
    if info > 0:
        raise SolverError(f"GMRES did not converge within {opts.iteration_cap(n)} restarts")
    if info < 0:
        raise SolverError("GMRES breakdown")
    return x


def _solve_dense(B, s, rhs, opts):
    n = B.shape[0]
    if B.shape != (n, n) or rhs.shape != (n,):
        raise GraphError("solve_shifted needs a square matrix and a matching right-hand side")
    M = s * B
    M[np.diag_indices(n)] += 1.0
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", sla.LinAlgWarning)
            x = sla.solve(M, rhs, check_finite=False)
    except (sla.LinAlgError, sla.LinAlgWarning) as exc:
        raise SingularSystemError(f"dense factorization failed: {exc}") from exc
    res = _residual(M.__matmul__, x, rhs)
    if not np.all(np.isfinite(x)) or res > opts.tol:
        raise SingularSystemError(f"relative residual {res:.3e} exceeds {opts.tol:.1e}")
    return x


def spectral_radius(
    apply: Callable[[np.ndarray], np.ndarray],
    n: int,
    tol: float = 1e-12,
    max_iter: int = 20_000,
    seed: int = 0,
) -> SpectralEstimate:
    """Power iteration for the spectral radius of a nonnegative matrix.

    ``apply`` computes the matrix action. The iteration runs on ``A + sigma I``
    with ``sigma`` the mean row sum, which keeps periodic (e.g. bipartite)
    matrices from oscillating while leaving the Perron vector unchanged.
    The estimate is ``e^T A x`` for the 1-normalized nonnegative iterate.
    Returns ``converged=False`` with the best estimate when ``max_iter``
    is exhausted.
    """
    rng = np.random.default_rng(seed)
    x = np.full(n, 1.0 / n) + 1e-3 * rng.random(n)
    x /= x.sum()
    ax = apply(x)
    sigma = float(apply(np.full(n, 1.0 / n)).sum())
    if not sigma > 0:
        sigma = 1.0
    est = float(ax.sum())
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        y = ax + sigma * x
        total = y.sum()
        if not total > 0:
            # the matrix annihilates a positive vector: rho = 0
            return SpectralEstimate(0.0, it, True, 0.0, 0.0, 0.0)
        x = y / total
        ax = apply(x)
        new = float(ax.sum())
        if abs(new - est) <= tol * max(1.0, abs(new)):
            est = new
            converged = True
            break
        est = new
    residual = float(np.abs(ax - est * x).sum())
    if np.all(x > 0):
        ratios = ax / x
        lower, upper = float(max(ratios.min(), 0.0)), float(ratios.max())
    else:
        lower, upper = 0.0, float("inf")
    return SpectralEstimate(max(est, 0.0), it, converged, residual, lower, upper)


def spectral_radius_sparse(M: SparseMatrix, **kwargs) -> SpectralEstimate:
    return spectral_radius(M.csr.__matmul__, M.n_rows, **kwargs)


def spectral_radius_view(view: ComplementView, **kwargs) -> SpectralEstimate:
    return spectral_radius(view.matvec, view.n, **kwargs)


def check_katz_parameter(t: float, rho: float) -> None:
    """Reject ``t`` outside ``(0, 1/rho)``, with ``rho`` inflated by :data:`RHO_SAFETY`."""
    if not np.isfinite(t) or t <= 0:
        raise ParameterError(f"Katz parameter t={t} must be positive and finite")
    if t * rho * RHO_SAFETY >= 1.0:
        raise ParameterError(f"t exceeds 1/rho(A): t={t:.6g}, 1/rho(A)={1.0 / rho:.6g}")


def rho_for_parameter(est: SpectralEstimate, t: float | None) -> float:
    """rho to validate ``t`` against: the estimate when it converged, else the
    Collatz-Wielandt upper bound if that already admits ``t``."""
    if est.converged:
        return est.rho
    if t is not None and np.isfinite(est.upper) and t * est.upper < 1.0:
        return est.upper
    return require_converged(est)


def require_converged(est: SpectralEstimate, what: str = "spectral radius") -> float:
    if not est.converged:
        raise ConvergenceError(
            f"no convergence: {what} estimate did not settle in {est.iterations} iterations"
        )
    return est.rho
