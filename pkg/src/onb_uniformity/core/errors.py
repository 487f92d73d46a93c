class OnbLabError(Exception):
    """Base class for every error raised by the package."""


class InvalidDimensionError(OnbLabError, ValueError):
    pass


class EmptyOrthocomplementError(OnbLabError, ValueError):
    """The orthocomplement of a vector in dimension 1 has no unit vectors."""


class DomainError(OnbLabError, ValueError):
    pass


class DimensionMismatchError(OnbLabError, ValueError):
    pass


class ResourceLimitError(OnbLabError):
    """Requested tensor rank or size is outside the supported range."""


class DecompositionUnsupportedError(OnbLabError):
    pass


class MeasureUnavailableError(OnbLabError):
    """A Custom region was used where its exact measure is required."""


class ConvergenceError(OnbLabError):
    pass


class UsageError(OnbLabError):
    """Command-line misuse; carries the help text to print."""

    def __init__(self, message: str, help_text: str = ""):
        super().__init__(message)
        self.help_text = help_text
