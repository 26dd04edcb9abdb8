"""Exception hierarchy shared across the package."""


class SomChangeError(Exception):
    """Base class for all somchange errors."""


class DataError(SomChangeError):
    """Invalid or malformed input data (CSV faults, non-finite values, ...)."""


class DimensionMismatchError(SomChangeError):
    """A vector or matrix has the wrong dimensionality for the model."""


class PatternError(SomChangeError):
    """A weight vector violates the weighted-pattern contract."""


class SolverError(SomChangeError):
    """The transport solver failed to reach an optimum."""


class ModelNotFoundError(SomChangeError):
    """Requested model id is not present in the store."""
