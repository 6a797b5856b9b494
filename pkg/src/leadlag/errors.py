"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: UsageError -> 1, DataError -> 2,
NumericalError -> 3.
"""


class LeadLagError(Exception):
    """Base class for all toolkit errors."""


class UsageError(LeadLagError):
    """Invalid flags, config values, or parameter combinations."""


class DataError(LeadLagError):
    """Invalid or degenerate input data (CSV problems, zero variance, ...)."""


class NumericalError(LeadLagError):
    """Numerical failure, e.g. PageRank not converging."""
