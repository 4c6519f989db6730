"""Shared generators and dense oracles.

The oracles here only use numpy.linalg on fully materialized matrices, so
they stay independent of the sparse/complement code paths under test.
"""

import numpy as np
import pytest

from densekatz import SparseMatrix, build_graph, graph_from_matrix

MODES = ("unweighted_loops", "unweighted_loopless", "weighted_loops", "weighted_loopless")


def dense_rho(A):
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def dense_katz(A, t):
    n = A.shape[0]
    return np.linalg.solve(np.eye(n) - t * A, np.ones(n))


def dense_perron(A):
    vals, vecs = np.linalg.eig(A)
    k = np.argmax(vals.real)
    v = np.abs(vecs[:, k].real)
    return v / v.sum()


def random_adjacency(rng, n, mode, density=None, directed=None):
    """Random adjacency for one of the four complement modes.

    Weighted graphs get a share of entries at their column maximum (with
    loops) or at the global maximum (loopless) so the complement has
    structural zeros. Returns ``(A, directed)``.
    """
    if density is None:
        density = rng.uniform(0.05, 0.99)
    if directed is None:
        directed = bool(rng.integers(2))
    mask = rng.random((n, n)) < density
    if not directed:
        mask = np.triu(mask)
        mask = mask | mask.T
    loopless = mode.endswith("loopless")
    if loopless:
        np.fill_diagonal(mask, False)
    if mode.startswith("unweighted"):
        A = mask.astype(float)
    else:
        W = rng.uniform(0.05, 1.0, (n, n))
        if not directed:
            W = np.triu(W)
            W = W + np.triu(W, 1).T
        A = np.where(mask, W, 0.0)
        if A.max() > 0:
            A /= A.max()
        top = rng.random((n, n)) < rng.uniform(0.0, 0.8)
        if not directed:
            top = np.triu(top)
            top = top | top.T
        if loopless or not directed:
            # the global maximum keeps undirected graphs symmetric
            A = np.where(mask & top, 1.0, A)
        else:
            u = A.max(axis=0)
            A = np.where(mask & top, u[None, :], A)
    return A, directed


def random_instance(rng, mode, n_range=(5, 200), directed=None):
    """Adjacency with rho(A) > 0, redrawn until it has one."""
    while True:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        A, directed = random_adjacency(rng, n, mode, directed=directed)
        rho = dense_rho(A)
        if rho > 1e-8:
            return A, directed, rho


def complement_dense(A, mode):
    n = A.shape[0]
    if mode == "unweighted_loops":
        return 1.0 - A
    if mode == "unweighted_loopless":
        return 1.0 - np.eye(n) - A
    if mode == "weighted_loops":
        return A.max(axis=0)[None, :] - A
    omega = A.max()
    B = omega - A
    np.fill_diagonal(B, 0.0)
    return B


def gap(w):
    ws = np.sort(w)
    return float(np.min(np.diff(ws)) / ws[-1])


def planted_threshold_instance(rng, variant, n_range=(5, 100)):
    """Directed weighted graph whose complement has a few planted entries
    just below a threshold that the ε-free bound would accept.

    Returns ``(G, B, eps, t, w)`` with ``B`` the exact complement as a
    SparseMatrix and ``w`` the dense-oracle Katz vector.
    """
    mode = "weighted_loops" if variant == "with_loops" else "weighted_loopless"
    A, _, rho = random_instance(rng, mode, n_range, directed=True)
    n = len(A)
    frac = rng.uniform(0.1, 0.9)
    w = dense_katz(A, frac / rho)
    x = gap(w)
    scale_eps = x / (frac / rho * w.sum() * (1 + x))
    cap = np.broadcast_to(A.max(axis=0), (n, n)) if variant == "with_loops" else np.full((n, n), A.max())
    k = int(rng.integers(1, n + 1))
    rows, cols = rng.integers(0, n, k), rng.integers(0, n, k)
    ok = (cap[rows, cols] > 0) & ((rows != cols) | (variant == "with_loops"))
    rows, cols = rows[ok], cols[ok]
    deltas = scale_eps * rng.uniform(0.05, 0.5, rows.size)
    A[rows, cols] = cap[rows, cols] - deltas

    rho = dense_rho(A)
    t = frac / rho
    w = dense_katz(A, t)
    x = gap(w)
    rhs_e = x / (t * w.sum() * (1 + x))
    if deltas.size and deltas.max() < 0.95 * rhs_e:
        eps = float(deltas.max()) * (1 + 1e-9)
    else:
        eps = 0.9 * rhs_e
    B = complement_dense(A, mode)
    B[B < 1e-14 * max(1.0, A.max())] = 0.0
    G = graph_from_matrix(A, variant, weighted=True, directed=True)
    return G, SparseMatrix.from_dense(B), eps, t, w


@pytest.fixture
def p3():
    return build_graph(3, [(0, 1), (1, 0), (1, 2), (2, 1)], "loopless", directed=False)


@pytest.fixture
def p3_complement():
    return build_graph(3, [(0, 2), (2, 0)], "loopless", directed=False)


@pytest.fixture
def two_by_two():
    """A = [[1, 1], [1, 0]] with loops; rho(A) is the golden ratio."""
    return build_graph(2, [(0, 0), (0, 1), (1, 0)], "with_loops")


@pytest.fixture
def diag01():
    return SparseMatrix.from_dense([[0.0, 0.0], [0.0, 1.0]])


def as_graph(A, mode, directed=True):
    policy = "with_loops" if mode.endswith("_loops") else "loopless"
    return graph_from_matrix(A, policy, weighted=mode.startswith("weighted"), directed=directed)


def kendall_pairs(a, b):
    """Kendall tau-b by counting every pair: exact integer arithmetic."""
    a = np.asarray(a)
    b = np.asarray(b)
    n = len(a)
    iu = np.triu_indices(n, 1)
    da = np.sign(a[iu[0]] - a[iu[1]]).astype(np.int64)
    db = np.sign(b[iu[0]] - b[iu[1]]).astype(np.int64)
    s = int(np.sum(da * db))
    na = int(np.count_nonzero(da))
    nb = int(np.count_nonzero(db))
    return s / np.sqrt(float(na) * float(nb))


# acceptance verdicts, filled in by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})")
