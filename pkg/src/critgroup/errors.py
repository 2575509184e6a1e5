"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class CritGroupError(Exception):
    """Base class for errors raised by critgroup."""


class ParseError(CritGroupError, ValueError):
    """Malformed graph, matrix or marking text."""


class DimensionError(CritGroupError, ValueError):
    """Matrix/vector shapes do not agree."""


class DisconnectedGraphError(CritGroupError, ValueError):
    """A connected graph was required."""


class MarkingError(CritGroupError, ValueError):
    """A marking or construction precondition does not hold."""


class InvariantError(CritGroupError, AssertionError):
    """An internal invariant failed; always a bug or corrupted input."""

    def __init__(self, message, step=None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


class SearchBudgetExceeded(CritGroupError, RuntimeError):
    """A bounded combinatorial search gave up before deciding."""
