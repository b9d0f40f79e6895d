"""Exception hierarchy shared by every module."""

from __future__ import annotations


class RNLError(Exception):
    """Base class for all errors raised by rnl_lab."""


class ValidationError(RNLError, ValueError):
    """An input violates a documented invariant.

    ``violations`` holds one human-readable line per broken invariant.
    """

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = list(violations or [message])


class DomainError(RNLError, ValueError):
    """A numeric argument lies outside the operation's domain."""


class SuperluminalError(DomainError):
    """A velocity or frame velocity reaches or exceeds the speed of light."""


class UnsupportedConfigurationError(RNLError, ValueError):
    """The inputs describe a configuration the model does not define."""


class DegenerateConditioningError(RNLError):
    """A conditional probability is requested on a zero-probability outcome."""


class HypothesisError(RNLError):
    """An operation's mathematical precondition (e.g. uniform marginals) fails."""
