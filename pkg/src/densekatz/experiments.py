"""Seeded experiment harness: random dense matrices, sufficiency sweeps, timings.

Random matrices follow the recipe ``D = U ** n`` with ``U`` uniform on
[0, 1) and size ``3n x 3n``, so that the entries have cdf ``x ** (1/n)``.
The dense weighted graph is ``A = e e^T - D`` (with loops) and its exact
complement is ``B = e u^T - A`` with ``u`` the column maxima of ``A``.

Each trial draws from its own Philox stream keyed by ``(seed, trial)``,
so a report does not depend on the order in which trials are run.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from importlib.metadata import PackageNotFoundError, version

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import ParameterError
from .graph import (
    ComplementView,
    Graph,
    SparseMatrix,
    WeightScale,
    build_graph,
    complement_unweighted,
    graph_from_matrix,
)
from .katz import katz_complement, katz_direct
from .linalg import SolveOptions, require_converged, solve_shifted, spectral_radius
from .ranking import kendall_tau, same_ranking
from .threshold import check_sufficient, sparsify


def library_version() -> str:
    try:
        return version("densekatz")
    except PackageNotFoundError:
        return "0+unknown"


@dataclass(frozen=True)
class ExperimentConfig:
    """``n`` is the base size; matrices are ``3n x 3n``.

    ``epsilon`` is either a fixed threshold or, when ``epsilon_power`` is
    set, ``(3n) ** -epsilon_power``. ``t_frac`` is the Katz parameter as a
    fraction of ``1/rho(A)``.
    """

    n: int
    trials: int = 100
    seed: int = 0
    epsilon: float = 0.1
    epsilon_power: int | None = None
    t_frac: float = 0.5

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("n must be positive")
        if self.trials < 1:
            raise ParameterError("trials must be at least 1")
        if not 0 < self.t_frac < 1:
            raise ParameterError("t_frac must lie in (0, 1)")
        if self.epsilon < 0:
            raise ParameterError("epsilon must be nonnegative")

    @property
    def size(self) -> int:
        return 3 * self.n

    @property
    def threshold(self) -> float:
        if self.epsilon_power is not None:
            return float(self.size) ** -self.epsilon_power
        return self.epsilon


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trial])))


def random_power_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """``3n x 3n`` matrix with iid entries ``U ** n``."""
    return rng.random((3 * n, 3 * n)) ** n


@dataclass
class DenseInstance:
    A: np.ndarray
    B: np.ndarray
    u: np.ndarray
    rho: float
    t: float

    @property
    def scale(self) -> WeightScale:
        return WeightScale(float(self.u.max()), self.u)

    @property
    def graph(self) -> Graph:
        return graph_from_matrix(self.A, "with_loops", weighted=True, directed=True)


def dense_instance(D: np.ndarray, t_frac: float) -> DenseInstance:
    A = 1.0 - D
    u = A.max(axis=0)
    B = u[None, :] - A
    B[B < 0] = 0.0
    est = spectral_radius(A.__matmul__, A.shape[0])
    rho = require_converged(est)
    return DenseInstance(A, B, u, rho, t_frac / rho)


def experiment_random(config: ExperimentConfig) -> dict:
    """Kendall tau between exact and thresholded complement rankings.

    Per trial: exact ``v = (I + tB)^{-1} e`` by a dense solve and
    approximate ``v0 = (I + tB0)^{-1} e`` by a sparse solve, ``B0`` being
    ``B`` with entries ``<= epsilon`` zeroed.
    """
    eps = config.threshold
    taus, times, densities = [], [], []
    for trial in range(config.trials):
        inst = dense_instance(random_power_matrix(config.n, trial_rng(config.seed, trial)), config.t_frac)
        e = np.ones(inst.A.shape[0])
        v = solve_shifted(inst.B, inst.t, e)
        B0 = sparsify(SparseMatrix.from_dense(inst.B), eps)
        start = time.perf_counter()
        v0 = solve_shifted(B0.B0, inst.t, e)
        times.append(time.perf_counter() - start)
        densities.append(B0.density_after)
        taus.append(kendall_tau(v, v0))
    taus = np.asarray(taus)
    return {
        "experiment": "random",
        "config": asdict(config),
        "version": library_version(),
        "size": config.size,
        "epsilon": eps,
        "tau": taus.tolist(),
        "tau_mean": float(taus.mean()),
        "tau_min": float(taus.min()),
        "density_mean": float(np.mean(densities)),
        "time_v0_mean": float(np.mean(times)),
    }


def experiment_sufficiency(config: ExperimentConfig, powers=(1, 2, 3, 4), extra_epsilons=()) -> dict:
    """Sparsity and recovery certificates of one realization for several epsilons."""
    inst = dense_instance(random_power_matrix(config.n, trial_rng(config.seed, 0)), config.t_frac)
    G = inst.graph
    B = SparseMatrix.from_dense(inst.B)
    w = solve_shifted(inst.A, -inst.t, np.ones(G.n))
    rows = []
    epsilons = [(k, float(config.size) ** -k) for k in powers]
    epsilons += [(None, float(eps)) for eps in extra_epsilons]
    for k, eps in epsilons:
        thr = sparsify(B, eps)
        rep = check_sufficient(G, B, thr.B0, eps, inst.t, "with_loops", w=w)
        row = rep.as_dict()
        row["power"] = k
        rows.append(row)
    return {
        "experiment": "sufficiency",
        "config": asdict(config),
        "version": library_version(),
        "size": config.size,
        "t": inst.t,
        "rho": inst.rho,
        "rows": rows,
    }


# -- timing -----------------------------------------------------------------


def synthetic_graph(n: int, nnz_per_row: int, dense: bool, seed: int = 0) -> Graph:
    """Unweighted undirected loopless graph with about ``nnz_per_row`` stored
    entries per row in ``A`` (``dense=False``) or in its complement
    (``dense=True``). A Hamiltonian cycle in the sparse side keeps it connected.
    """
    rng = trial_rng(seed, 0)
    k = max(1, nnz_per_row // 2)
    pairs = set()
    perm = rng.permutation(n)
    for a, b in zip(perm, np.roll(perm, 1)):
        pairs.add((min(a, b), max(a, b)))
    while len(pairs) < k * n:
        a, b = rng.integers(0, n, size=2)
        if a != b:
            pairs.add((int(min(a, b)), int(max(a, b))))
    edges = [(i, j) for i, j in pairs] + [(j, i) for i, j in pairs]
    sparse_side = build_graph(n, edges, "loopless", directed=False)
    return complement_unweighted(sparse_side) if dense else sparse_side


def _mean_time(fn, repeats: int) -> float:
    total = 0.0
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        total += time.perf_counter() - start
    return total / repeats


def _warm(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def _route_times(M: SparseMatrix, s: float, repeats: int) -> dict:
    n = M.n_rows
    e = np.ones(n)
    dense = M.to_dense()
    csc = M.csr.tocsc()
    eye = sp.eye_array(n, format="csc")
    eye_d = np.eye(n)

    def run_dense():
        return sla.solve(eye_d + s * dense, e, check_finite=False)

    def run_sparse():
        return spla.spsolve((eye + s * csc).tocsc(), e)

    csr = M.csr

    def run_krylov():
        # I + sM is a small perturbation of I when |s| rho(M) < 1
        op = spla.LinearOperator((n, n), matvec=lambda x: x + s * (csr @ x), dtype=np.float64)
        x, info = spla.gmres(op, e, rtol=1e-12, atol=0.0, restart=50, maxiter=10 * n)
        if info != 0:
            raise RuntimeError("GMRES did not converge in the timing run")
        return x

    runs = {"dense": run_dense, "sparse": run_sparse, "krylov": run_krylov}
    # warm-up runs are excluded from the means; a storage whose warm-up is
    # 10x slower than the other's cannot win and is not repeated
    warm = {k: _warm(fn) for k, fn in runs.items()}
    cutoff = 10 * min(warm.values())
    out = {}
    for k, fn in runs.items():
        out[k] = _mean_time(fn, repeats) if warm[k] <= cutoff else warm[k]
    out["best"] = min(out[k] for k in runs)
    out["nnz"] = M.nnz
    return out


def bench(G: Graph, t_frac: float = 0.9, repeats: int = 100) -> dict:
    """Mean solve time of ``(I - aA)^{-1} e`` against ``(I + aB)^{-1} e``.

    Each route takes the fastest of a dense LU, a sparse LU and an
    unpreconditioned GMRES solve. Only
    unweighted graphs are supported; ``B`` is the complement in the sense
    of the graph's loop policy, and ``a = t_frac / rho(A)``.
    """
    if G.weighted:
        raise ParameterError("bench supports unweighted graphs")
    Bg = complement_unweighted(G)
    view = ComplementView.unweighted(Bg.adj, G.loop_policy)
    rho = require_converged(spectral_radius(view.matvec, G.n))
    alpha = t_frac / rho
    mode = "unweighted_loops" if G.loop_policy == "with_loops" else "unweighted_loopless"
    s = alpha if mode == "unweighted_loops" else alpha / (1 + alpha)
    direct = _route_times(G.adj, -alpha, repeats)
    comp = _route_times(Bg.adj, s, repeats)
    opts = SolveOptions()
    v_direct = katz_direct(G, alpha, opts, rho).v
    v_comp = katz_complement(Bg.adj, alpha, mode, None, opts, rho).v
    return {
        "experiment": "bench",
        "version": library_version(),
        "n": G.n,
        "alpha": alpha,
        "rho": rho,
        "repeats": repeats,
        "nnz_A": G.num_edges,
        "nnz_B": Bg.num_edges,
        "direct": direct,
        "complement": comp,
        "faster": "complement" if comp["best"] < direct["best"] else "direct",
        "same_ranking": same_ranking(v_direct, v_comp),
    }
