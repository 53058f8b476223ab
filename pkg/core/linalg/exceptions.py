"""
Custom exception classes for dense linear algebra operations.
"""

class LinalgError(Exception):
    """Base exception for linear algebra errors."""

    def __init__(self, message: str, operation: str | None = None):
        self.operation = operation
        super().__init__(message)


class ShapeError(LinalgError):
    """Raised when operand dimensions do not agree."""

    def __init__(self, message: str = "Dimension mismatch", operation: str | None = None,
                 shapes: tuple[tuple[int, ...], ...] = ()):
        self.shapes = shapes
        if shapes:
            message = f"{message}: {' vs '.join(str(s) for s in shapes)}"
        super().__init__(message, operation)


class NumericError(LinalgError):
    """Raised when a computation meets or produces non-finite values."""

    def __init__(self, message: str = "Non-finite value encountered", operation: str | None = None,
                 step: int | None = None):
        self.step = step
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message, operation)


class ArgumentError(LinalgError, ValueError):
    """Raised when a count, seed or tolerance argument is out of range."""

    def __init__(self, message: str = "Invalid argument", operation: str | None = None):
        super().__init__(message, operation)


class FormatError(LinalgError):
    """Raised when a matrix or compressed-activation file cannot be parsed."""

    def __init__(self, message: str = "Malformed file", operation: str | None = None):
        super().__init__(message, operation)
