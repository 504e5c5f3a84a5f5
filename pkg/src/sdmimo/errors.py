"""Exception types shared across the package."""


class SdmimoError(Exception):
    """Base class for package errors."""


class ConfigError(SdmimoError, ValueError):
    """Invalid configuration or parameter domain."""


class DomainError(SdmimoError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class BracketError(SdmimoError, RuntimeError):
    """A root bracket could not be established (signals invalid inputs)."""


class NoSolutionError(SdmimoError, RuntimeError):
    """No fixed-point solution found where one must exist (bug signal)."""


class SingularMatrixError(SdmimoError, RuntimeError):
    """A matrix that is positive definite by construction failed to factor."""
