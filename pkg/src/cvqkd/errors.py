class InvalidArgumentError(ValueError):
    """Raised when an operation receives an argument outside its contract."""


class InsufficientDataError(ValueError):
    """Raised when too few samples remain for a statistical estimate."""
