"""Shared exception types."""


class EstimationError(RuntimeError):
    """An estimation run could not produce a usable result."""


class LineSearchError(EstimationError):
    """Backtracking line search exhausted its halvings without descent."""
