"""Shared exception types."""


class TandemError(Exception):
    """Base class for all package errors."""


class CapacityError(TandemError):
    """Raised when an enumeration or product exceeds its configured state cap."""

    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"{what} exceeded capacity: {count} > {cap}")
        self.what = what
        self.count = count
        self.cap = cap


class ConfigError(TandemError):
    """Invalid user-supplied configuration (CLI exit code 2)."""


class SynthesisError(TandemError):
    """No cooperative solution from the initial vertex (CLI exit code 3)."""

    def __init__(self, message: str, winning=None):
        super().__init__(message)
        self.winning = winning if winning is not None else set()
