"""
Custom exceptions for the sinr-region application.
"""


class ConfigError(Exception):
    """
    Raised when configuration is missing or invalid.
    """


class ChannelSpecError(Exception):
    """
    Raised when a channel spec file cannot be read, parsed or validated.
    """


class ModelError(ValueError):
    """
    Raised when a channel, direction or constraint violates its invariants.
    """


class LinalgError(Exception):
    """
    Raised when a matrix kernel receives input it cannot handle.
    """


class SingularMatrixError(LinalgError):
    """
    Raised when a linear system has no unique solution at working precision.
    """


class NegativeEntryError(LinalgError):
    """
    Raised when a nonnegative matrix is required but a negative entry is present.
    """


class SolverError(Exception):
    """
    Raised when the max-min SINR solver cannot produce a result.
    """


class ZeroWeightError(SolverError):
    """
    Raised when a direction has zero weights where strictly positive ones are required.
    """


class PowerRecoveryError(SolverError):
    """
    Raised when no valid power vector exists for the requested SINR target.
    """


class VerificationError(Exception):
    """
    Raised when the closed form and the bisection oracle disagree.
    """
