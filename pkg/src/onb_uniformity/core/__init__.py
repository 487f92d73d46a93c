from .errors import (
    ConvergenceError,
    DecompositionUnsupportedError,
    DimensionMismatchError,
    DomainError,
    EmptyOrthocomplementError,
    InvalidDimensionError,
    MeasureUnavailableError,
    OnbLabError,
    ResourceLimitError,
    UsageError,
)
from .logger import configure_logging, get_logger

__all__ = [
    "ConvergenceError",
    "DecompositionUnsupportedError",
    "DimensionMismatchError",
    "DomainError",
    "EmptyOrthocomplementError",
    "InvalidDimensionError",
    "MeasureUnavailableError",
    "OnbLabError",
    "ResourceLimitError",
    "UsageError",
    "configure_logging",
    "get_logger",
]
