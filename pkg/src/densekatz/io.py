"""Reading graphs and correlation matrices, writing results.

Matrix Market files use 1-based indices; TSV edge lists and every
in-memory structure use 0-based node ids.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from .exceptions import DenseKatzError, GraphError, ParameterError
from .graph import Graph, LoopPolicy, SparseMatrix, build_graph, graph_from_matrix
from .katz import CentralityResult
from .threshold import SufficiencyReport


class FormatError(DenseKatzError, ValueError):
    """Malformed input file; the message names the offending line."""

    def __init__(self, path, line: int, msg: str):
        super().__init__(f"{path}:{line}: {msg}")
        self.line = line


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    values: np.ndarray

    def __post_init__(self):
        C = np.array(self.values, dtype=np.float64)
        if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] < 1:
            raise ParameterError("correlation matrix must be square and nonempty")
        if not np.all(np.isfinite(C)):
            raise ParameterError("correlation matrix has non-finite entries")
        if np.max(np.abs(C - C.T)) > 1e-12:
            raise ParameterError("correlation matrix is not symmetric")
        if np.max(np.abs(np.diag(C) - 1.0)) > 1e-12:
            raise ParameterError("correlation matrix must have a unit diagonal")
        if np.any(np.abs(C) > 1.0 + 1e-12):
            raise ParameterError("correlation entries must lie in [-1, 1]")
        # np.corrcoef leaves rounding of order 2**-52 around the unit diagonal
        np.fill_diagonal(C, 1.0)
        C = np.clip(C, -1.0, 1.0)
        C.flags.writeable = False
        object.__setattr__(self, "values", C)

    @property
    def n(self) -> int:
        return self.values.shape[0]


# -- Matrix Market ----------------------------------------------------------


def read_matrix_market(
    path, loop_policy: LoopPolicy = "loopless", weighted: bool | None = None
) -> Graph:
    """Read a coordinate Matrix Market file.

    ``general`` files are read as directed graphs, ``symmetric`` ones are
    expanded to both directions. Pattern files are unweighted.
    """
    path = Path(path)
    with path.open() as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError(path, 1, "empty file")
    header = lines[0].split()
    if (
        len(header) != 5
        or header[0].lower() != "%%matrixmarket"
        or header[1].lower() != "matrix"
        or header[2].lower() != "coordinate"
    ):
        raise FormatError(path, 1, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'")
    field_, symmetry = header[3].lower(), header[4].lower()
    if field_ not in ("real", "integer", "pattern"):
        raise FormatError(path, 1, f"unsupported field {field_!r}")
    if symmetry not in ("general", "symmetric"):
        raise FormatError(path, 1, f"unsupported symmetry {symmetry!r}")
    if weighted is None:
        weighted = field_ != "pattern"

    lineno = 1
    body = iter(enumerate(lines[1:], start=2))
    size = None
    for lineno, line in body:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        size = s.split()
        break
    if size is None:
        raise FormatError(path, lineno, "missing size line")
    try:
        n_rows, n_cols, nnz = (int(x) for x in size)
    except ValueError:
        raise FormatError(path, lineno, "size line must be 'rows cols entries'") from None
    if n_rows != n_cols:
        raise FormatError(path, lineno, f"adjacency must be square, got {n_rows}x{n_cols}")

    edges = []
    seen = 0
    for lineno, line in body:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        parts = s.split()
        want = 2 if field_ == "pattern" else 3
        if len(parts) != want:
            raise FormatError(path, lineno, f"expected {want} fields, got {len(parts)}")
        try:
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
            w = 1.0 if field_ == "pattern" else float(parts[2])
        except ValueError:
            raise FormatError(path, lineno, f"cannot parse entry {s!r}") from None
        if not (0 <= i < n_rows and 0 <= j < n_cols):
            raise FormatError(path, lineno, f"index ({i + 1}, {j + 1}) outside {n_rows}x{n_cols}")
        seen += 1
        # explicit zeros count towards the header total but are not edges
        if w == 0.0:
            continue
        edges.append((i, j, w, lineno))
    if seen != nnz:
        raise FormatError(path, lineno, f"header announces {nnz} entries, found {seen}")

    records = []
    for i, j, w, _ in edges:
        records.append((i, j, w))
        if symmetry == "symmetric" and i != j:
            records.append((j, i, w))
    try:
        if weighted:
            return build_graph(n_rows, records, loop_policy, directed=symmetry == "general", weighted=True)
        return build_graph(
            n_rows, [(i, j) for i, j, _ in records], loop_policy,
            directed=symmetry == "general", weighted=False,
        )
    except GraphError as exc:
        raise FormatError(path, lineno, str(exc)) from exc


def write_matrix_market(G: Graph, path, symmetric: bool | None = None) -> None:
    """Write ``G`` with 17 significant digits, so that floats round-trip."""
    if symmetric is None:
        symmetric = not G.directed
    field_ = "real" if G.weighted else "pattern"
    entries = [
        (i, j, w) for i, j, w in G.edges() if not symmetric or i >= j
    ]
    with Path(path).open("w") as fh:
        fh.write(f"%%MatrixMarket matrix coordinate {field_} {'symmetric' if symmetric else 'general'}\n")
        fh.write(f"% loop_policy={G.loop_policy}\n")
        fh.write(f"{G.n} {G.n} {len(entries)}\n")
        for i, j, w in entries:
            if G.weighted:
                fh.write(f"{i + 1} {j + 1} {w:.17g}\n")
            else:
                fh.write(f"{i + 1} {j + 1}\n")


# -- TSV edge lists -----------------------------------------------------------


def read_tsv(
    path,
    loop_policy: LoopPolicy = "loopless",
    weighted: bool = False,
    n: int | None = None,
    directed: bool = True,
) -> Graph:
    """Read ``u<TAB>v[<TAB>weight]`` lines with 0-based ids; ``#`` starts a comment."""
    path = Path(path)
    records = []
    max_id = -1
    lineno = 0
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split("\t")
            if len(parts) not in (2, 3):
                raise FormatError(path, lineno, f"expected 2 or 3 tab-separated fields, got {len(parts)}")
            try:
                i, j = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise FormatError(path, lineno, f"cannot parse {s!r}") from None
            if i < 0 or j < 0:
                raise FormatError(path, lineno, "node ids must be nonnegative")
            if len(parts) == 3 and not weighted and w != 1.0:
                raise FormatError(path, lineno, "weight given in an unweighted edge list")
            records.append((i, j, w) if weighted else (i, j))
            max_id = max(max_id, i, j)
    if n is None:
        n = max_id + 1
    if n < 1:
        raise FormatError(path, max(lineno, 1), "edge list defines no nodes")
    try:
        return build_graph(n, records, loop_policy, directed=directed, weighted=weighted)
    except GraphError as exc:
        raise FormatError(path, lineno, str(exc)) from exc


def read_edge_list(
    path,
    format: Literal["tsv", "matrix_market", "mtx"] | None = None,
    loop_policy: LoopPolicy = "loopless",
    weighted: bool | None = None,
) -> Graph:
    """Dispatch on ``format`` (guessed from the suffix when omitted)."""
    path = Path(path)
    if format is None:
        format = "matrix_market" if path.suffix.lower() == ".mtx" else "tsv"
    if format in ("matrix_market", "mtx"):
        return read_matrix_market(path, loop_policy, weighted)
    if format == "tsv":
        return read_tsv(path, loop_policy, bool(weighted))
    raise ParameterError(f"unknown edge-list format {format!r}")


# -- correlation matrices -------------------------------------------------------


def read_correlation_csv(path) -> CorrelationMatrix:
    """Dense CSV correlation matrix; a non-numeric first row is taken as a header."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise FormatError(path, 1, "empty correlation file")
    start = 0
    try:
        [float(x) for x in rows[0]]
    except ValueError:
        start = 1
    data = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        try:
            data.append([float(x) for x in row])
        except ValueError:
            raise FormatError(path, lineno, "non-numeric correlation entry") from None
        if len(data[-1]) != len(data[0]):
            raise FormatError(path, lineno, "ragged correlation matrix")
    return CorrelationMatrix(np.array(data))


def correlation_to_adjacency(
    C: CorrelationMatrix | np.ndarray,
    eta: float,
    mode: Literal["unweighted", "weighted"] = "unweighted",
    loop_policy: LoopPolicy = "loopless",
    absolute: bool = False,
    inclusive: bool = False,
) -> Graph:
    """Threshold a correlation matrix into a graph.

    An edge ``(i, j)`` exists when ``C_ij > eta`` (``>=`` with ``inclusive``,
    ``|C_ij|`` with ``absolute``). Weighted graphs keep the correlation
    (or its magnitude) as the weight, so they need ``eta >= 0`` unless
    ``absolute`` is set. Loopless graphs drop the diagonal.
    """
    if not isinstance(C, CorrelationMatrix):
        C = CorrelationMatrix(C)
    if not -1.0 < eta < 1.0:
        raise ParameterError("eta must lie in (-1, 1)")
    if mode not in ("unweighted", "weighted"):
        raise ParameterError(f"unknown mode {mode!r}")
    vals = np.abs(C.values) if absolute else C.values
    keep = vals >= eta if inclusive else vals > eta
    if loop_policy == "loopless":
        np.fill_diagonal(keep, False)
    if mode == "unweighted":
        A = keep.astype(np.float64)
    else:
        if np.any(vals[keep] <= 0):
            raise ParameterError("weighted thresholding kept non-positive correlations; use eta >= 0")
        A = np.where(keep, vals, 0.0)
    return graph_from_matrix(SparseMatrix.from_dense(A), loop_policy, mode == "weighted", directed=False)


# -- results -------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, float) and not np.isfinite(x):
        return None if np.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def result_to_dict(result: CentralityResult) -> dict:
    return {
        "n": result.n,
        "t": float(result.t_used),
        "route": result.route,
        "scores": [float(x) for x in result.v],
        "ranking": [int(i) for i in result.ranking],
        "certificates": {k: _jsonable(v) for k, v in result.scalar_certificates.items()},
    }


def write_result(result: CentralityResult | SufficiencyReport, path, format: Literal["json", "csv"] = "json") -> None:
    """Write a centrality result or sufficiency report.

    Centrality JSON has the fields ``n, t, route, scores, ranking,
    certificates``; centrality CSV has the header ``node,score,rank`` with
    rows in rank order (rank is 1-based).
    """
    path = Path(path)
    if format not in ("json", "csv"):
        raise ParameterError(f"unknown output format {format!r}")
    if isinstance(result, SufficiencyReport):
        payload = {k: _jsonable(v) for k, v in result.as_dict().items()}
        if format == "json":
            path.write_text(json.dumps(payload, indent=2) + "\n")
        else:
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["field", "value"])
                w.writerows(payload.items())
        return
    if format == "json":
        path.write_text(json.dumps(result_to_dict(result), indent=2) + "\n")
        return
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["node", "score", "rank"])
        for pos, node in enumerate(result.ranking, start=1):
            w.writerow([int(node), repr(float(result.v[node])), pos])


def read_scores(path) -> np.ndarray:
    """Scores from a result file written by :func:`write_result`."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return np.asarray(json.loads(path.read_text())["scores"], dtype=np.float64)
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    scores = np.empty(len(rows))
    for row in rows:
        scores[int(row["node"])] = float(row["score"])
    return scores
