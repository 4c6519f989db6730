"""Graph and sparse-matrix data model, complements and weight normalization.

Nodes are 0-based everywhere in the library. A graph stores its adjacency
as a :class:`SparseMatrix` in CSR layout; a dense graph is described more
cheaply by the :class:`ComplementView` of its (sparse) complement.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np
import scipy.sparse as sp

from .exceptions import GraphError

LoopPolicy = Literal["with_loops", "loopless"]
LOOP_POLICIES = ("with_loops", "loopless")

#: weighted complement entries at or below this magnitude are structural zeros
DUST_TOL = 1e-14


def _check_policy(loop_policy: str) -> None:
    if loop_policy not in LOOP_POLICIES:
        raise GraphError(f"unknown loop policy {loop_policy!r}; expected one of {LOOP_POLICIES}")


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Real matrix in compressed-sparse-row form.

    Column indices are strictly increasing inside every row and no explicit
    zeros are stored. Instances are immutable; the arrays are marked
    read-only on construction.
    """

    n_rows: int
    n_cols: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        offsets = np.ascontiguousarray(self.row_offsets, dtype=np.int64)
        cols = np.ascontiguousarray(self.col_indices, dtype=np.int64)
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        for arr in (offsets, cols, vals):
            arr.flags.writeable = False
        object.__setattr__(self, "row_offsets", offsets)
        object.__setattr__(self, "col_indices", cols)
        object.__setattr__(self, "values", vals)
        self._validate()

    def _validate(self) -> None:
        if self.n_rows < 1 or self.n_cols < 1:
            raise GraphError("matrix dimensions must be positive")
        off, cols, vals = self.row_offsets, self.col_indices, self.values
        if off.shape != (self.n_rows + 1,) or off[0] != 0:
            raise GraphError("row_offsets must have length n_rows + 1 and start at 0")
        if np.any(np.diff(off) < 0):
            raise GraphError("row_offsets must be nondecreasing")
        if off[-1] != cols.size or cols.size != vals.size:
            raise GraphError("row_offsets, col_indices and values disagree on nnz")
        if cols.size == 0:
            return
        if cols.min() < 0 or cols.max() >= self.n_cols:
            raise GraphError("column index out of bounds")
        # strictly increasing within a row: a non-increase is only allowed at a row start
        steps = np.diff(cols)
        row_starts = np.zeros(cols.size, dtype=bool)
        row_starts[off[1:-1][off[1:-1] < cols.size]] = True
        if np.any((steps <= 0) & ~row_starts[1:]):
            raise GraphError("column indices must be strictly increasing within each row")
        if np.any(vals == 0.0):
            raise GraphError("explicit zeros are not allowed")
        if not np.all(np.isfinite(vals)):
            raise GraphError("matrix entries must be finite")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_scipy(cls, mat, drop_tol: float = 0.0) -> SparseMatrix:
        """Build from any scipy sparse matrix/array; duplicates are summed by scipy."""
        csr = sp.csr_array(mat, dtype=np.float64)
        csr.sum_duplicates()
        if drop_tol > 0.0:
            csr.data[np.abs(csr.data) <= drop_tol] = 0.0
        csr.eliminate_zeros()
        csr.sort_indices()
        n_rows, n_cols = csr.shape
        return cls(n_rows, n_cols, csr.indptr, csr.indices, csr.data)

    @classmethod
    def from_dense(cls, arr, drop_tol: float = 0.0) -> SparseMatrix:
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2:
            raise GraphError("dense input must be two-dimensional")
        if drop_tol > 0.0:
            arr = np.where(np.abs(arr) <= drop_tol, 0.0, arr)
        return cls.from_scipy(sp.csr_array(arr))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None) -> SparseMatrix:
        n_cols = n_rows if n_cols is None else n_cols
        return cls(n_rows, n_cols, np.zeros(n_rows + 1), np.zeros(0), np.zeros(0))

    @classmethod
    def identity(cls, n: int) -> SparseMatrix:
        return cls(n, n, np.arange(n + 1), np.arange(n), np.ones(n))

    # -- views --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return int(self.col_indices.size)

    @property
    def density(self) -> float:
        return self.nnz / (self.n_rows * self.n_cols)

    @cached_property
    def csr(self) -> sp.csr_array:
        """The same data as a scipy ``csr_array`` (shares memory, read-only)."""
        mat = sp.csr_array(
            (self.values, self.col_indices, self.row_offsets), shape=self.shape, copy=False
        )
        mat.has_sorted_indices = True
        return mat

    @cached_property
    def row_ids(self) -> np.ndarray:
        """Row index of every stored entry (COO row array)."""
        return np.repeat(np.arange(self.n_rows), np.diff(self.row_offsets))

    def to_dense(self) -> np.ndarray:
        return self.csr.toarray()

    def transpose(self) -> SparseMatrix:
        return SparseMatrix.from_scipy(self.csr.T)

    def diagonal(self) -> np.ndarray:
        return self.csr.diagonal()

    def column_max(self) -> np.ndarray:
        """Columnwise maximum over stored entries, 0 for empty columns."""
        out = np.zeros(self.n_cols)
        if self.nnz:
            np.maximum.at(out, self.col_indices, self.values)
        return out

    def scaled(self, factor: float) -> SparseMatrix:
        return SparseMatrix(
            self.n_rows, self.n_cols, self.row_offsets, self.col_indices, self.values * factor
        )

    def entries(self) -> Iterable[tuple[int, int, float]]:
        return zip(self.row_ids.tolist(), self.col_indices.tolist(), self.values.tolist())

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz})"


@dataclass(frozen=True, eq=False)
class Graph:
    """A finite graph, possibly directed, weighted and/or with loops.

    ``adj[i, j]`` is the weight of the edge ``(i, j)``; absent edges are not
    stored. Unweighted graphs store weight 1.
    """

    n: int
    loop_policy: LoopPolicy
    weighted: bool
    adj: SparseMatrix
    directed: bool = True

    def __post_init__(self):
        _check_policy(self.loop_policy)
        if self.n < 1:
            raise GraphError("a graph needs at least one node")
        if self.adj.shape != (self.n, self.n):
            raise GraphError(f"adjacency shape {self.adj.shape} does not match n={self.n}")
        vals = self.adj.values
        if np.any(vals <= 0):
            raise GraphError("edge weights must be strictly positive")
        if not self.weighted and np.any(vals != 1.0):
            raise GraphError("unweighted graphs store weight 1 on every edge")
        if self.loop_policy == "loopless" and np.any(self.adj.diagonal() != 0):
            raise GraphError("loopless graph has a diagonal entry")
        if not self.directed:
            diff = self.adj.csr - self.adj.csr.T
            if diff.nnz and np.max(np.abs(diff.data)) > 0:
                raise GraphError("undirected graph must have a symmetric adjacency")

    @property
    def num_edges(self) -> int:
        return self.adj.nnz

    @property
    def max_edges(self) -> int:
        return self.n * self.n if self.loop_policy == "with_loops" else self.n * (self.n - 1)

    def edges(self) -> list[tuple[int, int, float]]:
        return list(self.adj.entries())

    def to_dense(self) -> np.ndarray:
        return self.adj.to_dense()

    def __repr__(self) -> str:
        kind = "weighted" if self.weighted else "unweighted"
        way = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, {kind}, {way}, {self.loop_policy}, edges={self.num_edges})"


@dataclass(frozen=True)
class WeightScale:
    """Largest weight and column maxima of a weighted graph.

    ``u`` is expressed in the units of the graph it accompanies. ``omega``
    is the largest weight in the original units: when the scale comes from
    :func:`rescale_to_unit_max` the graph was divided by ``omega`` and
    ``max(u) == 1``, otherwise ``omega == max(u)``.
    """

    omega: float
    u: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = np.asarray(self.u, dtype=np.float64)
        u.flags.writeable = False
        object.__setattr__(self, "u", u)
        if not self.omega > 0:
            raise GraphError("omega must be positive")
        if np.any(u < 0):
            raise GraphError("column maxima must be nonnegative")

    @property
    def graph_omega(self) -> float:
        """Largest weight in the units of the accompanying graph."""
        return float(self.u.max())


@dataclass(frozen=True, eq=False)
class ComplementView:
    """Implicit dense matrix ``A = e u^T + shift * I - B``.

    The left rank-one factor is always the all-ones vector. ``A`` is never
    materialized by the library itself; :meth:`to_dense` exists for tests
    and small oracles.
    """

    n: int
    rank_one_right: np.ndarray
    diagonal_shift: float
    sparse_part: SparseMatrix

    def __post_init__(self):
        u = np.asarray(self.rank_one_right, dtype=np.float64)
        u.flags.writeable = False
        object.__setattr__(self, "rank_one_right", u)
        if u.shape != (self.n,) or self.sparse_part.shape != (self.n, self.n):
            raise GraphError("complement view dimensions disagree")
        if np.any(u < 0):
            raise GraphError("rank-one factor must be nonnegative")

    @property
    def rank_one_left(self) -> np.ndarray:
        return np.ones(self.n)

    @classmethod
    def unweighted(cls, B: SparseMatrix, loop_policy: LoopPolicy) -> ComplementView:
        _check_policy(loop_policy)
        shift = 0.0 if loop_policy == "with_loops" else -1.0
        return cls(B.n_rows, np.ones(B.n_rows), shift, B)

    @classmethod
    def weighted(
        cls, B: SparseMatrix, loop_policy: LoopPolicy, scale: WeightScale
    ) -> ComplementView:
        _check_policy(loop_policy)
        n = B.n_rows
        if loop_policy == "with_loops":
            return cls(n, scale.u, 0.0, B)
        omega = scale.graph_omega
        return cls(n, np.full(n, omega), -omega, B)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """``A @ v`` in O(n + nnz(B)) operations."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape[0] != self.n:
            raise GraphError(f"vector of length {v.shape[0]} does not match n={self.n}")
        out = self.sparse_part.csr @ v
        np.negative(out, out=out)
        out += self.rank_one_right @ v
        if self.diagonal_shift:
            out += self.diagonal_shift * v
        return out

    def rmatvec(self, v: np.ndarray) -> np.ndarray:
        """``A.T @ v``."""
        v = np.asarray(v, dtype=np.float64)
        out = self.sparse_part.csr.T @ v
        np.negative(out, out=out)
        out += self.rank_one_right * v.sum()
        if self.diagonal_shift:
            out += self.diagonal_shift * v
        return out

    def to_dense(self) -> np.ndarray:
        dense = np.broadcast_to(self.rank_one_right, (self.n, self.n)).copy()
        dense[np.diag_indices(self.n)] += self.diagonal_shift
        dense -= self.sparse_part.to_dense()
        return dense

    def zero_pattern(self, tol: float = DUST_TOL) -> tuple[np.ndarray, SparseMatrix]:
        """Structural zeros of ``A`` without materializing it.

        Returns ``(zero_columns, Z)`` where ``zero_columns`` flags columns of
        ``A`` that vanish identically and ``Z`` has a stored 1 exactly at the
        remaining positions ``(i, j)`` with ``A[i, j] == 0``.
        """
        n = self.n
        u = self.rank_one_right
        zero_cols = np.abs(u) <= tol
        if self.diagonal_shift == 0.0:
            # u_j - B_ij with B_ij stored; unstored entries equal u_j
            rows, cols = self.sparse_part.row_ids, self.sparse_part.col_indices
            resid = u[cols] - self.sparse_part.values
        else:
            csr = (self.sparse_part.csr - self.diagonal_shift * sp.eye_array(n)).tocsr()
            csr.sort_indices()
            coo = csr.tocoo()
            rows, cols = coo.row, coo.col
            resid = u[cols] - coo.data
        keep = (np.abs(resid) <= tol) & ~zero_cols[cols]
        Z = sp.csr_array((np.ones(int(keep.sum())), (rows[keep], cols[keep])), shape=(n, n))
        return zero_cols, SparseMatrix.from_scipy(Z)

    def __repr__(self) -> str:
        return (
            f"ComplementView(n={self.n}, shift={self.diagonal_shift}, "
            f"nnz(B)={self.sparse_part.nnz})"
        )


# -- construction -----------------------------------------------------------


def build_graph(
    n: int,
    edges: Iterable[Sequence],
    loop_policy: LoopPolicy = "loopless",
    directed: bool = True,
    weighted: bool | None = None,
) -> Graph:
    """Build a graph from ``(i, j)`` or ``(i, j, weight)`` records.

    ``weighted`` defaults to whether any record carries a weight. Every
    direction of an undirected edge must be listed; duplicates are an error.
    """
    _check_policy(loop_policy)
    if n < 1:
        raise GraphError("a graph needs at least one node")
    rows, cols, vals = [], [], []
    has_weight = False
    for rec in edges:
        if len(rec) == 2:
            i, j = rec
            w = 1.0
        elif len(rec) == 3:
            i, j, w = rec
            has_weight = True
        else:
            raise GraphError(f"edge record {rec!r} must have 2 or 3 fields")
        i, j, w = int(i), int(j), float(w)
        if not (0 <= i < n and 0 <= j < n):
            raise GraphError(f"edge ({i}, {j}) has a node index outside [0, {n})")
        if not w > 0 or not np.isfinite(w):
            raise GraphError(f"edge ({i}, {j}) has non-positive or non-finite weight {w}")
        if i == j and loop_policy == "loopless":
            raise GraphError(f"loop ({i}, {i}) is not allowed in a loopless graph")
        rows.append(i)
        cols.append(j)
        vals.append(w)
    if weighted is None:
        weighted = has_weight
    if not weighted and any(v != 1.0 for v in vals):
        raise GraphError("unweighted graph given an edge weight other than 1")
    rows_a = np.asarray(rows, dtype=np.int64)
    cols_a = np.asarray(cols, dtype=np.int64)
    if rows_a.size:
        keys = rows_a * n + cols_a
        uniq, counts = np.unique(keys, return_counts=True)
        if np.any(counts > 1):
            k = int(uniq[np.argmax(counts > 1)])
            raise GraphError(f"duplicate edge ({k // n}, {k % n})")
    coo = sp.coo_array((np.asarray(vals, dtype=np.float64), (rows_a, cols_a)), shape=(n, n))
    return Graph(n, loop_policy, bool(weighted), SparseMatrix.from_scipy(coo), directed)


def graph_from_matrix(
    A,
    loop_policy: LoopPolicy = "loopless",
    weighted: bool = True,
    directed: bool | None = None,
) -> Graph:
    """Wrap a dense array, scipy sparse matrix or :class:`SparseMatrix` as a Graph.

    ``directed`` defaults to whether the matrix is asymmetric.
    """
    M = A if isinstance(A, SparseMatrix) else (
        SparseMatrix.from_scipy(A) if sp.issparse(A) else SparseMatrix.from_dense(A)
    )
    if M.n_rows != M.n_cols:
        raise GraphError("adjacency must be square")
    if directed is None:
        diff = M.csr - M.csr.T
        directed = bool(diff.nnz and np.max(np.abs(diff.data)) > 0)
    return Graph(M.n_rows, loop_policy, weighted, M, directed)


def column_max_vector(G: Graph) -> np.ndarray:
    """``u_j = max_i A[i, j]`` (0 for an empty column)."""
    return G.adj.column_max()


def weight_scale(G: Graph) -> WeightScale:
    """Column maxima and largest weight of ``G`` in its own units."""
    u = column_max_vector(G)
    if not u.max() > 0:
        raise GraphError("weight scale is undefined for an edgeless graph")
    return WeightScale(float(u.max()), u)


def rescale_to_unit_max(G: Graph) -> tuple[Graph, WeightScale]:
    """Divide every weight by the largest weight Ω.

    Katz rankings are unchanged when the parameter is multiplied by Ω at
    the same time. The returned scale carries Ω and the rescaled column
    maxima.
    """
    if G.num_edges == 0:
        raise GraphError("cannot rescale an edgeless graph")
    omega = float(G.adj.values.max())
    adj = G.adj if omega == 1.0 else G.adj.scaled(1.0 / omega)
    if omega != 1.0:
        # force exact unit maxima where the division rounds
        vals = np.array(adj.values)
        vals[G.adj.values == omega] = 1.0
        adj = SparseMatrix(adj.n_rows, adj.n_cols, adj.row_offsets, adj.col_indices, vals)
    scaled = Graph(G.n, G.loop_policy, G.weighted, adj, G.directed)
    return scaled, WeightScale(omega, column_max_vector(scaled))


def _complement_mask(G: Graph) -> np.ndarray:
    mask = np.ones((G.n, G.n), dtype=bool)
    mask[G.adj.row_ids, G.adj.col_indices] = False
    if G.loop_policy == "loopless":
        np.fill_diagonal(mask, False)
    return mask


def complement_unweighted(G: Graph) -> Graph:
    """Complement in ``V x V`` (with loops) or in the off-diagonal pairs (loopless).

    The cost is O(n^2), the combined size of the graph and its complement.
    """
    if G.weighted:
        raise GraphError("complement_unweighted needs an unweighted graph")
    rows, cols = np.nonzero(_complement_mask(G))
    adj = sp.csr_array((np.ones(rows.size), (rows, cols)), shape=(G.n, G.n))
    return Graph(G.n, G.loop_policy, False, SparseMatrix.from_scipy(adj), G.directed)


def complement_weighted(
    G: Graph, scale: WeightScale | None = None, tol: float = DUST_TOL
) -> tuple[Graph, ComplementView]:
    """Weighted complement and the view that reconstructs ``A`` from it.

    With loops the complement weight of ``(i, j)`` is ``u_j - A[i, j]``;
    loopless graphs use ``Ω - A[i, j]`` off the diagonal. Entries of
    magnitude at most ``tol`` are dropped as rounding dust.
    """
    if scale is None:
        scale = weight_scale(G)
    u = scale.u
    if u.shape != (G.n,):
        raise GraphError("weight scale does not match the graph size")
    A = G.to_dense()
    if G.loop_policy == "with_loops":
        if np.any(A > 1.0 + tol):
            raise GraphError("with-loops weighted complement needs weights <= 1; rescale first")
        if np.any(A > u[None, :] + tol):
            raise GraphError("column maxima u are smaller than some adjacency entry")
        dense_B = u[None, :] - A
    else:
        omega = scale.graph_omega
        dense_B = omega - A
        np.fill_diagonal(dense_B, 0.0)
    dense_B[np.abs(dense_B) <= tol] = 0.0
    if np.any(dense_B < 0):
        raise GraphError("complement weights would be negative; check the weight scale")
    B = SparseMatrix.from_dense(dense_B)
    view = ComplementView.weighted(B, G.loop_policy, scale)
    # column maxima differ in general, so u - A of a symmetric A need not be symmetric
    directed = G.directed or bool((B.csr - B.csr.T).count_nonzero())
    comp = Graph(G.n, G.loop_policy, True, B, directed)
    return comp, view


def complement_view(G_complement: Graph, scale: WeightScale | None = None) -> ComplementView:
    """View of the dense graph whose complement is ``G_complement``.

    Unweighted complements need no scale; weighted ones need the scale of
    the original graph.
    """
    if not G_complement.weighted or scale is None:
        return ComplementView.unweighted(G_complement.adj, G_complement.loop_policy)
    return ComplementView.weighted(G_complement.adj, G_complement.loop_policy, scale)


def is_strongly_connected(view: ComplementView, tol: float = DUST_TOL) -> bool:
    """Irreducibility of the implicit matrix ``A``, in O(n + nnz(B)) time.

    Runs a forward and a backward search from node 0 over the *dense*
    graph, walking each row's zero pattern instead of its neighbours.
    """
    n = view.n
    if n == 1:
        return True
    zero_cols, Z = view.zero_pattern(tol)
    if np.any(zero_cols):
        return False
    return _reaches_all(Z, n) and _reaches_all(Z.transpose(), n)


def _reaches_all(Z: SparseMatrix, n: int) -> bool:
    offsets, cols = Z.row_offsets, Z.col_indices
    unvisited = set(range(1, n))
    stack = [0]
    while stack and unvisited:
        i = stack.pop()
        blocked = set(cols[offsets[i]:offsets[i + 1]].tolist())
        reached = [j for j in unvisited if j not in blocked]
        unvisited.difference_update(reached)
        stack.extend(reached)
    return not unvisited
