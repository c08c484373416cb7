"""Exception types shared across the package."""


class TensorSvpError(Exception):
    """Base class for all package errors."""


class RankDeficientError(TensorSvpError, ValueError):
    """A basis (or Gram matrix) that must have full column rank does not."""


class SingularMatrixError(TensorSvpError, ValueError):
    pass


class ParameterError(TensorSvpError, ValueError):
    """Invalid parameter combination.

    ``stage`` names the pipeline stage that rejected the input, when known.
    """

    def __init__(self, message, stage=None):
        self.stage = stage
        if stage:
            message = f"[{stage}] {message}"
        super().__init__(message)


class ResourceLimitError(TensorSvpError, RuntimeError):
    """A computation would exceed a configured size ceiling."""

    def __init__(self, what, required, allowed):
        self.what = what
        self.required = required
        self.allowed = allowed
        super().__init__(f"{what}: required {required}, allowed {allowed}")


class FormatError(TensorSvpError, ValueError):
    """Malformed text input."""
