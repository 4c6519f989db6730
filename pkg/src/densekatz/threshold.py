"""Thresholded weighted complements and exact-recovery certificates.

A weighted complement ``B`` is usually dense. Zeroing every entry
``<= epsilon`` gives a sparse ``B0`` whose Katz ranking is only approximate;
:func:`check_sufficient` tests a posteriori whether the ranking is in fact
exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.sparse as sp

from .exceptions import ParameterError
from .graph import ComplementView, Graph, SparseMatrix, WeightScale, weight_scale
from .katz import CentralityResult, katz_complement, mode_for
from .linalg import (
    DEFAULT_SOLVE,
    RHO_SAFETY,
    SolveOptions,
    solve_shifted,
    spectral_radius,
    spectral_radius_view,
)
from .ranking import TIE_RTOL, kendall_tau, rank

Variant = Literal["with_loops", "loopless"]

#: largest n for which check_sufficient will fall back to a dense solve
DENSE_BUDGET = 5000


@dataclass(frozen=True, eq=False)
class ThresholdedComplement:
    B0: SparseMatrix
    epsilon: float
    dropped_count: int
    density_before: float
    density_after: float

    @property
    def sparsity(self) -> float:
        """Fraction of zero entries in ``B0``."""
        return 1.0 - self.density_after


@dataclass(frozen=True, eq=False)
class SufficiencyReport:
    """Outcome of the exact-recovery test for one ``epsilon``.

    ``cond_c_ok`` is the inequality with the defect vector ``c``,
    ``cond_e_ok`` the ε-independent variant with ``c`` replaced by ``e``.
    """

    epsilon: float
    x: float
    c: np.ndarray = field(repr=False)
    cTw: float
    eTw: float
    t: float
    rho_perturbed: float
    rhs_c: float
    rhs_e: float
    rho_bound_ok: bool
    cond_c_ok: bool
    cond_e_ok: bool
    sparsity: float

    @property
    def verdict(self) -> str:
        return "certified" if (self.rho_bound_ok and self.cond_c_ok) else "uncertified"

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def as_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "t": self.t,
            "x": self.x,
            "cTw": self.cTw,
            "eTw": self.eTw,
            "c_max": float(self.c.max(initial=0.0)),
            "c_nonzero": int(np.count_nonzero(self.c)),
            "rho_perturbed": self.rho_perturbed,
            "rhs_c": self.rhs_c,
            "rhs_e": self.rhs_e,
            "rho_bound_ok": self.rho_bound_ok,
            "cond_c_ok": self.cond_c_ok,
            "cond_e_ok": self.cond_e_ok,
            "sparsity": self.sparsity,
            "verdict": self.verdict,
        }


def sparsify(B: SparseMatrix, epsilon: float) -> ThresholdedComplement:
    """Drop every entry ``B_ij <= epsilon`` (entries equal to ε are dropped)."""
    if not epsilon >= 0:
        raise ParameterError("epsilon must be nonnegative")
    if B.nnz and B.values.min() < 0:
        raise ParameterError("sparsify expects a nonnegative matrix")
    keep = B.values > epsilon
    size = B.n_rows * B.n_cols
    coo = sp.csr_array(
        (B.values[keep], (B.row_ids[keep], B.col_indices[keep])), shape=B.shape
    )
    B0 = SparseMatrix.from_scipy(coo)
    return ThresholdedComplement(B0, float(epsilon), B.nnz - B0.nnz, B.nnz / size, B0.nnz / size)


def defect_vector(B: SparseMatrix, B0: SparseMatrix, epsilon: float) -> np.ndarray:
    """``c_j = max_i (B - B0)_ij / epsilon``."""
    D = (B.csr - B0.csr).tocsr()
    D.eliminate_zeros()
    if epsilon == 0:
        if D.nnz:
            raise ParameterError("epsilon = 0 but B0 differs from B")
        return np.zeros(B.n_cols)
    if not epsilon > 0:
        raise ParameterError("epsilon must be nonnegative")
    cmax = SparseMatrix.from_scipy(D).column_max() if D.nnz else np.zeros(B.n_cols)
    # a dropped entry never exceeds epsilon; clip away division round-off
    return np.minimum(cmax / epsilon, 1.0)


def gap_ratio(w) -> float:
    """``min_{i != j} |w_i - w_j| / max_i w_i`` via sorting."""
    w = np.asarray(w, dtype=np.float64)
    if w.size == 0:
        raise ParameterError("gap ratio of an empty vector")
    if w.size == 1:
        return 1.0
    ws = np.sort(w)
    return float(np.min(np.diff(ws)) / ws[-1])


def _exact_katz(G: Graph, B: SparseMatrix, t, variant, opts, dense_budget):
    n = G.n
    if B.nnz <= n * n / 4:
        mode = mode_for(variant, True)
        scale = weight_scale(G)
        return katz_complement(B, t, mode, scale, opts).katz_vector
    if n > dense_budget:
        raise ParameterError(
            f"n={n} exceeds the dense certification budget {dense_budget}; "
            "pass w explicitly or raise dense_budget"
        )
    return solve_shifted(G.to_dense(), -t, np.ones(n), opts)


def check_sufficient(
    G: Graph,
    B: SparseMatrix,
    B0: SparseMatrix,
    epsilon: float,
    t: float,
    variant: Variant | None = None,
    opts: SolveOptions = DEFAULT_SOLVE,
    w=None,
    dense_budget: int = DENSE_BUDGET,
) -> SufficiencyReport:
    """Test whether thresholding ``B`` to ``B0`` provably keeps the Katz ranking.

    ``G`` is the original graph (unit maximum weight), ``B`` its exact
    weighted complement and ``w`` its Katz vector at parameter ``t`` (computed
    here when omitted). The report is certified when
    ``t < 1/rho(A + eps e c^T)`` and ``eps < x / (t c^T w (1 + x))``.
    """
    variant = variant or G.loop_policy
    n = G.n
    if w is None:
        w = _exact_katz(G, B, t, variant, opts, dense_budget)
    w = np.asarray(w, dtype=np.float64)
    c = defect_vector(B, B0, epsilon)
    x = gap_ratio(w)
    cTw = float(c @ w)
    eTw = float(w.sum())

    scale = weight_scale(G)
    view = ComplementView.weighted(B, variant, scale)
    if cTw > 0:
        est = spectral_radius(lambda v: view.matvec(v) + epsilon * (c @ v), n)
    else:
        est = spectral_radius_view(view)
    if est.converged:
        rho_p = est.rho
        rho_ok = bool(t * rho_p * RHO_SAFETY < 1.0)
    else:
        # slow power iteration (near-reducible A); the upper bound is still rigorous
        rho_p = est.upper
        rho_ok = bool(t * rho_p < 1.0)

    rhs_c = np.inf if cTw == 0 else x / (t * cTw * (1.0 + x))
    rhs_e = x / (t * eTw * (1.0 + x))
    # nothing dropped: B0 == B and the ranking is trivially exact
    cond_c = bool(cTw == 0 or epsilon < rhs_c)
    cond_e = bool(epsilon < rhs_e)
    sparsity = 1.0 - B0.nnz / (n * n)
    return SufficiencyReport(
        float(epsilon), x, c, cTw, eTw, float(t), rho_p, float(rhs_c), float(rhs_e),
        rho_ok, cond_c, cond_e, sparsity,
    )


def katz_thresholded(
    B0: SparseMatrix,
    t: float,
    variant: Variant,
    scale: WeightScale,
    opts: SolveOptions = DEFAULT_SOLVE,
    rho: float | None = None,
) -> CentralityResult:
    """Approximate Katz ranking from a thresholded complement.

    ``B0`` stands for the exact complement of ``A + eps C``; ``t`` is validated
    against that matrix, which dominates ``A`` entrywise.
    """
    mode = mode_for(variant, True)
    return katz_complement(B0, t, mode, scale, opts, rho, route="thresholded")


def epsilon_grid(size: int, powers=(1, 2, 3, 4)) -> list[float]:
    """``size ** -k`` for each ``k``: a logarithmic grid of thresholds."""
    return [float(size) ** -k for k in powers]


def threshold_sweep(
    B: SparseMatrix,
    t: float,
    variant: Variant,
    scale: WeightScale,
    epsilons,
    reference=None,
    opts: SolveOptions = DEFAULT_SOLVE,
) -> list[dict]:
    """Kendall tau between exact and thresholded rankings for each epsilon.

    ``reference`` is the exact centrality vector (any positive multiple);
    it is computed from ``B`` when omitted.
    """
    mode = mode_for(variant, True)
    if reference is None:
        reference = katz_complement(B, t, mode, scale, opts).v
    rows = []
    for eps in epsilons:
        thr = sparsify(B, eps)
        v0 = katz_complement(thr.B0, t, mode, scale, opts, route="thresholded").v
        try:
            tau = kendall_tau(reference, v0, TIE_RTOL)
        except ParameterError:
            tau = float("nan")
        rows.append(
            {
                "epsilon": float(eps),
                "density": thr.density_after,
                "dropped": thr.dropped_count,
                "tau": tau,
                "same_ranking": rank(reference) == rank(v0),
            }
        )
    return rows
