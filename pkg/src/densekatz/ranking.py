"""Rankings of centrality vectors and their comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError

#: scores within this fraction of the largest score are tied
TIE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Ranking:
    """Node order by descending score, ties broken by ascending node id."""

    order: np.ndarray
    scores: np.ndarray
    tie_groups: tuple[tuple[int, ...], ...]

    def positions(self) -> np.ndarray:
        """1-based rank of every node (tied nodes get consecutive ranks)."""
        pos = np.empty(self.order.size, dtype=np.int64)
        pos[self.order] = np.arange(1, self.order.size + 1)
        return pos

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ranking):
            return NotImplemented
        return np.array_equal(self.order, other.order) and self.tie_groups == other.tie_groups

    __hash__ = None


def rank(v, rtol: float = TIE_RTOL) -> Ranking:
    """Rank the entries of ``v`` in descending order.

    Consecutive sorted scores closer than ``rtol * max|v|`` are chained into
    one tie group, listed by ascending node id.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ParameterError("rank needs a nonempty vector")
    if not np.all(np.isfinite(v)):
        raise ParameterError("cannot rank a vector with NaN or infinite entries")
    ids = np.arange(v.size)
    order = np.lexsort((ids, -v))
    tol = rtol * float(np.max(np.abs(v)))
    gaps = -np.diff(v[order])
    breaks = np.flatnonzero(gaps > tol) + 1
    groups = [np.sort(g) for g in np.split(order, breaks)]
    order = np.concatenate(groups)
    ties = tuple(tuple(g.tolist()) for g in groups if g.size > 1)
    return Ranking(order, v, ties)


def same_ranking(a, b, rtol: float = TIE_RTOL) -> bool:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ParameterError("rankings of vectors with different lengths cannot be compared")
    return rank(a, rtol) == rank(b, rtol)


def tie_levels(v, rtol: float = TIE_RTOL) -> np.ndarray:
    """Replace every score by the index of its tie group (0 for the lowest),
    so that scores chained into one group by :func:`rank` become equal."""
    v = np.asarray(v, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    tol = rtol * float(np.max(np.abs(v)))
    steps = np.concatenate(([0], np.diff(v[order]) > tol))
    levels = np.empty(v.size, dtype=np.float64)
    levels[order] = np.cumsum(steps)
    return levels


def kendall_tau(a, b, rtol: float | None = None) -> float:
    """Tie-adjusted Kendall tau (tau-b) in O(n log n).

    Concordance is counted by sorting on ``a`` and merge-sorting ``b``,
    counting the swaps. Raises when either input is constant. With
    ``rtol`` set, scores within ``rtol * max`` of each other count as tied,
    as in :func:`rank`; by default values are compared exactly.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ParameterError("kendall_tau needs two vectors of equal length")
    n = a.size
    if n < 2:
        raise ParameterError("kendall_tau needs at least two entries")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ParameterError("kendall_tau inputs must be finite")
    if rtol is not None:
        a, b = tie_levels(a, rtol), tie_levels(b, rtol)

    perm = np.lexsort((b, a))
    a_s, b_s = a[perm], b[perm]
    n0 = n * (n - 1) // 2
    n1 = _tied_pairs(a_s)
    joint = _tied_pairs_joint(a_s, b_s)
    swaps = _merge_count(b_s.tolist())
    n2 = _tied_pairs(np.sort(b))
    if n1 == n0 or n2 == n0:
        raise ParameterError("Kendall tau is undefined for a constant input")
    # pairs untied in both: concordant - discordant
    s = n0 - n1 - n2 + joint - 2 * swaps
    return s / math.sqrt((n0 - n1) * (n0 - n2))


def _tied_pairs(sorted_vals: np.ndarray) -> int:
    _, counts = np.unique(sorted_vals, return_counts=True)
    return int(sum(c * (c - 1) // 2 for c in counts.tolist()))


def _tied_pairs_joint(a_s: np.ndarray, b_s: np.ndarray) -> int:
    pairs = np.stack([a_s, b_s], axis=1)
    _, counts = np.unique(pairs, axis=0, return_counts=True)
    return int(sum(c * (c - 1) // 2 for c in counts.tolist()))


def _merge_count(seq: list) -> int:
    """Sort ``seq`` in place bottom-up; return the number of strict inversions."""
    n = len(seq)
    buf = seq[:]
    swaps = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if seq[j] < seq[i]:
                    buf[k] = seq[j]
                    swaps += mid - i
                    j += 1
                else:
                    buf[k] = seq[i]
                    i += 1
                k += 1
            buf[k:hi] = seq[i:mid] if i < mid else seq[j:hi]
        seq, buf = buf, seq
        width *= 2
    return swaps
