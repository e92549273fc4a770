"""Exception hierarchy.

Numerical failures (:class:`DomainError`, :class:`RankError`) map to CLI exit
code 2; :class:`ConfigError` maps to exit code 1.
"""


class DualClockError(Exception):
    """Base class for all package errors."""


class ConfigError(DualClockError, ValueError):
    """A scenario configuration failed validation."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class DomainError(DualClockError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RankError(DualClockError, ArithmeticError):
    """A regression is rank deficient (too few records or no time spread)."""


class TrialError(DualClockError):
    """A Monte-Carlo trial failed; carries the trial index."""

    def __init__(self, trial: int, cause: BaseException) -> None:
        super().__init__(f"trial {trial} failed: {type(cause).__name__}: {cause}")
        self.trial = trial
        self.cause = cause
