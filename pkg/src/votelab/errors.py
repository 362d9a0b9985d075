"""Shared exception types."""


class VotelabError(Exception):
    """Base class for errors raised by this package."""


class ProfileFormatError(VotelabError):
    """A profile file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SearchBudgetExceeded(VotelabError):
    """An exact search would exceed its configured budget.

    Raised instead of returning an approximate answer.
    """
