"""
Custom exception classes for PAMM compression and metrics.
"""

from core.linalg.exceptions import ArgumentError, FormatError, LinalgError, NumericError, ShapeError

class PammError(Exception):
    """Base exception for PAMM errors that are not plain linear algebra failures."""

    def __init__(self, message: str, operation: str | None = None):
        self.operation = operation
        super().__init__(message)


class UndefinedMetricError(PammError):
    """Raised when a metric is undefined for its inputs, e.g. a zero reference norm."""

    def __init__(self, message: str = "Metric is undefined for these inputs", operation: str | None = None):
        super().__init__(message, operation)

__all__ = [
    'ArgumentError',
    'FormatError',
    'LinalgError',
    'NumericError',
    'PammError',
    'ShapeError',
    'UndefinedMetricError',
]
