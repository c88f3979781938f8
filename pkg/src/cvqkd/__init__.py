"""Turbo-coded DPSK reconciliation for continuous-variable QKD simulation."""

from .errors import InsufficientDataError, InvalidArgumentError

__version__ = "0.1.0"

__all__ = ["InvalidArgumentError", "InsufficientDataError", "__version__"]
