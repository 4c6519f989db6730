"""Katz and eigenvector centrality, directly and through the complement graph.

For a dense graph ``A`` whose complement ``B`` is sparse, the Katz vector
``(I - tA)^{-1} e`` is a positive multiple of a complement-side solve
``(I + sB)^{-1} e``. The multiple is a scalar certificate recorded in
:class:`CentralityResult`; it is positive exactly when the parameter is
admissible, so it doubles as a numerical sanity check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .exceptions import CertificateError, ConvergenceError, GraphError, ParameterError
from .graph import (
    DUST_TOL,
    ComplementView,
    Graph,
    LoopPolicy,
    SparseMatrix,
    WeightScale,
    complement_unweighted,
    complement_weighted,
    is_strongly_connected,
    rescale_to_unit_max,
    weight_scale,
)
from .linalg import (
    DEFAULT_SOLVE,
    SolveOptions,
    check_katz_parameter,
    require_converged,
    rho_for_parameter,
    solve_shifted,
    spectral_radius_sparse,
    spectral_radius_view,
)
from .ranking import Ranking, rank

Mode = Literal["unweighted_loops", "unweighted_loopless", "weighted_loops", "weighted_loopless"]
MODES = ("unweighted_loops", "unweighted_loopless", "weighted_loops", "weighted_loopless")
Route = Literal["direct", "complement", "thresholded", "eigen_power", "eigen_resolvent"]


@dataclass(frozen=True)
class KatzParams:
    t: float
    route: Literal["direct", "complement_auto", "complement_forced"] = "complement_auto"
    rho_hint: float | None = None

    def __post_init__(self):
        if not np.isfinite(self.t):
            raise ParameterError("Katz parameter must be finite")
        if self.route not in ("direct", "complement_auto", "complement_forced"):
            raise ParameterError(f"unknown route {self.route!r}")


@dataclass(frozen=True, eq=False)
class CentralityResult:
    """A centrality vector plus the bookkeeping needed to trust it.

    For complement routes ``v`` is the complement-side solve and
    ``scalar_certificates["denominator"]`` links it to the direct Katz
    vector: ``katz_vector == v / denominator``.
    """

    v: np.ndarray
    t_used: float
    route: Route
    scalar_certificates: dict = field(default_factory=dict)
    mode: str | None = None

    @property
    def n(self) -> int:
        return int(self.v.size)

    @property
    def ranking(self) -> np.ndarray:
        return self.rank().order

    def rank(self) -> Ranking:
        return rank(self.v)

    @property
    def katz_vector(self) -> np.ndarray:
        """The vector ``(I - tA)^{-1} e`` of the original graph."""
        denom = self.scalar_certificates.get("denominator")
        return self.v if denom is None else self.v / denom


def _adjacency(G) -> SparseMatrix:
    return G.adj if isinstance(G, Graph) else G


def katz_direct(
    G: Graph | SparseMatrix,
    t: float,
    opts: SolveOptions = DEFAULT_SOLVE,
    rho: float | None = None,
) -> CentralityResult:
    """Solve ``(I - tA) v = e`` on the graph itself."""
    A = _adjacency(G)
    if rho is None:
        rho = rho_for_parameter(spectral_radius_sparse(A), t)
    check_katz_parameter(t, rho)
    v = solve_shifted(A, -t, np.ones(A.n_rows), opts)
    if np.any(v < 1.0 - 1e-8):
        raise CertificateError("direct Katz vector fell below 1; the system is not a Neumann series")
    return CentralityResult(v, t, "direct", {"rho": rho})


def gamma_scalar(B: SparseMatrix, t: float, opts: SolveOptions = DEFAULT_SOLVE) -> float:
    """``e^T (I + tB)^{-1} e``."""
    return float(solve_shifted(B, t, np.ones(B.n_rows), opts).sum())


def mode_for(loop_policy: LoopPolicy, weighted: bool) -> Mode:
    return f"{'weighted' if weighted else 'unweighted'}_{'loops' if loop_policy == 'with_loops' else 'loopless'}"


def complement_view_for(B: SparseMatrix, mode: Mode, scale: WeightScale | None) -> ComplementView:
    """The implicit ``A`` whose complement (in the sense of ``mode``) is ``B``."""
    if mode not in MODES:
        raise ParameterError(f"unknown complement mode {mode!r}")
    loop_policy = "with_loops" if mode.endswith("_loops") else "loopless"
    if mode.startswith("unweighted"):
        if B.nnz and np.any(B.values != 1.0):
            raise GraphError("unweighted complement must be a 0/1 matrix")
        view = ComplementView.unweighted(B, loop_policy)
    else:
        if scale is None:
            raise ParameterError(f"mode {mode} needs the weight scale of the original graph")
        if scale.u.shape != (B.n_rows,):
            raise GraphError("weight scale does not match the complement size")
        view = ComplementView.weighted(B, loop_policy, scale)
    if loop_policy == "loopless" and np.any(B.diagonal() != 0):
        raise GraphError("a loopless complement has no diagonal entries")
    if B.nnz:
        cap = view.rank_one_right[B.col_indices] + np.where(
            B.row_ids == B.col_indices, view.diagonal_shift, 0.0
        )
        if np.any(B.values > cap + DUST_TOL):
            raise GraphError("complement entries exceed the rank-one term; A would be negative")
    return view


def katz_complement(
    B: Graph | SparseMatrix,
    t: float,
    mode: Mode,
    scale: WeightScale | None = None,
    opts: SolveOptions = DEFAULT_SOLVE,
    rho: float | None = None,
    route: Route = "complement",
) -> CentralityResult:
    """Katz centrality of ``A`` computed from its complement ``B``.

    ``t`` is the Katz parameter of the *original* graph and must satisfy
    ``0 < t < 1/rho(A)``; ``rho(A)`` is estimated from the implicit view
    unless given. The sparse system solved and the certificate per mode:

    ========================  =================  =============================
    mode                      complement param   denominator
    ========================  =================  =============================
    ``unweighted_loops``      ``t``              ``1 - t * gamma``
    ``unweighted_loopless``   ``t / (1 + t)``    ``1 + t - t * chi``
    ``weighted_loops``        ``t``              ``1 - t * u^T v0``
    ``weighted_loopless``     ``t / (1 + Ωt)``   ``1 + Ωt - tΩ * chi``
    ========================  =================  =============================

    ``gamma`` and ``chi`` are ``e^T v0``. The returned ``v`` is ``v0``.
    """
    Bm = _adjacency(B)
    view = complement_view_for(Bm, mode, scale)
    if rho is None:
        rho = rho_for_parameter(spectral_radius_view(view), t)
    check_katz_parameter(t, rho)
    n = Bm.n_rows
    e = np.ones(n)
    omega = 1.0 if mode.startswith("unweighted") else float(view.rank_one_right.max(initial=0.0))
    certs: dict[str, float] = {"rho": rho}

    if mode in ("unweighted_loops", "weighted_loops"):
        s = t
        v0 = solve_shifted(Bm, s, e, opts)
        gamma = float(v0.sum())
        if mode == "unweighted_loops":
            certs["gamma"] = gamma
            denom = 1.0 - t * gamma
        else:
            certs["gamma"] = gamma
            certs["u_dot_v0"] = float(view.rank_one_right @ v0)
            denom = 1.0 - t * certs["u_dot_v0"]
    else:
        s = t / (1.0 + omega * t)
        v0 = solve_shifted(Bm, s, e, opts)
        chi = float(v0.sum())
        certs["chi"] = chi
        denom = 1.0 + omega * t - t * omega * chi
    certs["s"] = s
    certs["denominator"] = denom
    if not denom > 0:
        raise CertificateError(
            f"denominator certificate {denom:.3e} is not positive; t is too large or the solve broke down"
        )
    if np.any(v0 < 0):
        raise CertificateError("complement-side solve produced a negative centrality")
    return CentralityResult(v0, t, route, certs, mode)


def katz(
    G: Graph,
    t: float | None = None,
    route: Literal["direct", "complement", "auto"] = "auto",
    opts: SolveOptions = DEFAULT_SOLVE,
    t_frac: float | None = None,
) -> CentralityResult:
    """Katz centrality of ``G`` through whichever of ``A``, ``B`` is sparser.

    Give either ``t`` or ``t_frac`` (a fraction of ``1/rho(A)``). Weighted
    graphs with loops are rescaled to unit maximum weight first and ``t`` is
    rescaled with them, which leaves the ranking unchanged.
    """
    if (t is None) == (t_frac is None):
        raise ParameterError("give exactly one of t and t_frac")
    if route not in ("direct", "complement", "auto"):
        raise ParameterError(f"unknown route {route!r}")
    if route == "auto":
        n_missing = G.max_edges - G.num_edges
        route = "complement" if n_missing < G.num_edges else "direct"
    if route == "direct":
        rho = require_converged(spectral_radius_sparse(G.adj))
        t_eff = t if t is not None else t_frac / rho
        return katz_direct(G, t_eff, opts, rho)

    mode = mode_for(G.loop_policy, G.weighted)
    if not G.weighted:
        B = complement_unweighted(G).adj
        return _complement_with_frac(B, t, t_frac, mode, None, opts, 1.0)
    divisor = 1.0
    if G.loop_policy == "with_loops":
        G, scale0 = rescale_to_unit_max(G)
        divisor = scale0.omega
    comp, _ = complement_weighted(G)
    scale = weight_scale(G)
    return _complement_with_frac(comp.adj, t, t_frac, mode, scale, opts, divisor)


def _complement_with_frac(B, t, t_frac, mode, scale, opts, divisor):
    view = complement_view_for(B, mode, scale)
    rho = require_converged(spectral_radius_view(view))
    # a graph divided by Ω needs parameter Ω t for the same centrality
    t_eff = t * divisor if t is not None else t_frac / rho
    res = katz_complement(B, t_eff, mode, scale, opts, rho)
    if divisor != 1.0:
        certs = dict(res.scalar_certificates, weight_divisor=divisor)
        res = CentralityResult(res.v, res.t_used, res.route, certs, res.mode)
    return res


def katz_negative_series_check(B: SparseMatrix, t: float, K: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated even and odd walk sums ``sum_k t^k B^k e`` up to order ``K``.

    ``even - odd`` tends to ``(I + tB)^{-1} e`` when ``|t| rho(B) < 1``.
    """
    if K < 0:
        raise ParameterError("truncation order must be nonnegative")
    term = np.ones(B.n_rows)
    even = term.copy()
    odd = np.zeros(B.n_rows)
    for k in range(1, K + 1):
        term = t * (B.csr @ term)
        if k % 2:
            odd += term
        else:
            even += term
    return even, odd


def eigenvector_centrality_complement(
    B: Graph | SparseMatrix,
    loop_policy: LoopPolicy = "with_loops",
    tol: float = 1e-10,
    max_iter: int = 10_000,
    v0=None,
    shift: float = 1.0,
    scale: WeightScale | None = None,
    require_irreducible: bool = True,
) -> CentralityResult:
    """Perron vector of ``A`` by power iteration on its complement ``B``.

    Each step is ``v <- (e - Bv + shift v) / (n - e^T B v + shift)`` with
    loops and ``v <- (e - v - Bv + shift v) / (n - 1 - e^T B v + shift)``
    without; ``shift = 0`` gives the plain power method, the default
    ``shift = 1`` also converges on periodic graphs such as paths. Every
    iterate keeps unit 1-norm; the largest drift is reported as the
    ``normalization_drift`` certificate.
    """
    Bm = _adjacency(B)
    mode = mode_for(loop_policy, scale is not None)
    view = complement_view_for(Bm, mode, scale)
    n = view.n
    if require_irreducible and not is_strongly_connected(view):
        raise ConvergenceError("no convergence: the graph is not strongly connected")
    if v0 is None:
        v = np.full(n, 1.0 / n)
    else:
        v = np.asarray(v0, dtype=np.float64).copy()
        if np.any(v < 0) or abs(v.sum() - 1.0) > 1e-12:
            raise ParameterError("start vector must be nonnegative with unit 1-norm")
    if shift < 0:
        raise ParameterError("shift must be nonnegative")
    drift = abs(v.sum() - 1.0)
    for it in range(1, max_iter + 1):
        y = view.matvec(v)
        if shift:
            y += shift * v
        denom = y.sum()
        if not denom > 0:
            raise CertificateError(f"power-iteration denominator {denom:.3e} is not positive")
        new = y / denom
        drift = max(drift, abs(new.sum() - 1.0))
        step = np.abs(new - v).sum()
        v = new
        if step <= tol:
            rho = float(view.matvec(v).sum())
            certs = {"rho": rho, "iterations": it, "normalization_drift": drift, "step": step}
            return CentralityResult(v, 1.0 / rho if rho > 0 else np.inf, "eigen_power", certs, mode)
    raise ConvergenceError(f"no convergence: power iteration exceeded {max_iter} iterations")


def eigenvector_centrality_resolvent(
    B: Graph | SparseMatrix,
    rho_A: float | None = None,
    loop_policy: LoopPolicy = "with_loops",
    opts: SolveOptions = DEFAULT_SOLVE,
    scale: WeightScale | None = None,
) -> CentralityResult:
    """Eigenvector-centrality ranking as ``(I + B/rho)^{-1} e`` (loops) or
    ``(I + B/(rho + 1))^{-1} e`` (loopless).

    A singular system means ``-rho`` (or ``-rho - 1``) is an eigenvalue of
    ``B`` and surfaces as :class:`~densekatz.exceptions.SingularSystemError`.
    """
    Bm = _adjacency(B)
    mode = mode_for(loop_policy, scale is not None)
    view = complement_view_for(Bm, mode, scale)
    if rho_A is None:
        rho_A = require_converged(spectral_radius_view(view))
    omega = float(view.rank_one_right.max()) if loop_policy == "loopless" else 0.0
    s = 1.0 / rho_A if loop_policy == "with_loops" else 1.0 / (rho_A + omega)
    v = solve_shifted(Bm, s, np.ones(view.n), opts)
    return CentralityResult(v, 1.0 / rho_A, "eigen_resolvent", {"rho": rho_A, "s": s}, mode)
