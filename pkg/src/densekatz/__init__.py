"""Katz and eigenvector centrality for very dense graphs.

A graph missing only a few of its possible edges has a sparse complement.
Katz centrality with parameter ``t`` on the graph ranks nodes exactly like
a Katz-type solve with a negative parameter on the complement, which costs
time proportional to the complement's size.
"""

from .exceptions import (
    CertificateError,
    ConvergenceError,
    DenseKatzError,
    GraphError,
    ParameterError,
    SingularSystemError,
    SolverError,
)
from .graph import (
    ComplementView,
    Graph,
    SparseMatrix,
    WeightScale,
    build_graph,
    column_max_vector,
    complement_unweighted,
    complement_view,
    complement_weighted,
    graph_from_matrix,
    is_strongly_connected,
    rescale_to_unit_max,
    weight_scale,
)
from .katz import (
    CentralityResult,
    KatzParams,
    eigenvector_centrality_complement,
    eigenvector_centrality_resolvent,
    gamma_scalar,
    katz,
    katz_complement,
    katz_direct,
    katz_negative_series_check,
)
from .linalg import (
    SolveOptions,
    SpectralEstimate,
    implicit_matvec,
    solve_shifted,
    spectral_radius,
    spmv,
)
from .ranking import Ranking, kendall_tau, rank, same_ranking, tie_levels
from .threshold import (
    SufficiencyReport,
    ThresholdedComplement,
    check_sufficient,
    defect_vector,
    gap_ratio,
    katz_thresholded,
    sparsify,
)

__version__ = "0.1.0"
