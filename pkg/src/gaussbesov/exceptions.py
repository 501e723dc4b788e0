"""Exception types raised by the library."""


class DimensionError(ValueError):
    """Raised when a point, multi-index or expansion has the wrong dimension."""


class BudgetExceededError(RuntimeError):
    """Raised when a requested grid or index set exceeds the configured budget."""


class QuadratureError(RuntimeError):
    """Raised when a quadrature fails its accuracy target.

    The achieved error estimate is kept on ``self.error``.
    """

    def __init__(self, message, error=float("nan")):
        super().__init__(message)
        self.error = error


class ExpansionFormatError(ValueError):
    """Raised when an expansion document is malformed."""
