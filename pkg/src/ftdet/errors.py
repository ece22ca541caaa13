"""Exception types shared by the library and the command line."""

from __future__ import annotations


class FtdetError(Exception):
    """Base class for every error raised by this package."""


class InvariantViolation(FtdetError):
    """A value does not satisfy the invariants of its declared type."""


class CapExceeded(FtdetError):
    """More distinct T-states became reachable than the exploration cap allows."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"more than {cap} T-states reachable (reached {count})")
        self.count = count
        self.cap = cap


class UnknownState(FtdetError):
    def __init__(self, state):
        super().__init__(f"unknown state {state!r}")
        self.state = state


class NotGreibach(FtdetError):
    """A grammar production is not of the form b -> a alpha."""


class ParseError(FtdetError):
    """Malformed machine file; carries the 1-based position when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.col = col


class ValidationError(FtdetError):
    """Well-formed machine file whose content breaks an invariant."""
