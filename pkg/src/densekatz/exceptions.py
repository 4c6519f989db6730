"""Exception hierarchy shared by all modules."""


class DenseKatzError(Exception):
    """Base class for every error raised by this package."""


class GraphError(DenseKatzError, ValueError):
    """Invalid graph or sparse-matrix construction."""


class ParameterError(DenseKatzError, ValueError):
    """A numerical parameter lies outside its admissible range."""


class SolverError(DenseKatzError, ArithmeticError):
    """A linear solve failed or did not meet its residual contract."""


class SingularSystemError(SolverError):
    """The shifted system is singular or numerically singular."""


class ConvergenceError(DenseKatzError, ArithmeticError):
    """An iterative method stopped without meeting its tolerance."""


class CertificateError(DenseKatzError, ArithmeticError):
    """A scalar certificate that must be positive was not."""
