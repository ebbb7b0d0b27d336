"""Exception hierarchy shared by every engine module."""


class EngineError(Exception):
    """Base class for all errors raised by the engine."""

    kind = "engine"


class ArgumentError(EngineError, ValueError):
    kind = "argument"


class PartitionError(EngineError, ValueError):
    kind = "partition"


class DivisionError(EngineError, ZeroDivisionError):
    kind = "division"


class ImproperFilterError(EngineError):
    """Raised when generators intersect in a finite set."""

    kind = "improper-filter"


class FragmentError(EngineError):
    """The formula lies outside the shapes the evaluators decide."""

    kind = "fragment"


class DomainError(EngineError):
    kind = "domain"


class PreconditionError(EngineError):
    kind = "precondition"

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class IncoherenceError(EngineError):
    kind = "incoherence"

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class ParseError(EngineError):
    """Parse failure carrying the offending character span."""

    kind = "syntax"

    def __init__(self, message, pos=0, end=None, text=""):
        super().__init__(message)
        self.pos = pos
        self.end = pos + 1 if end is None else end
        self.text = text

    def __str__(self):
        return f"{self.args[0]} at column {self.pos}"


class RepairWarning(UserWarning):
    """A singular index was carved out of a piece and set to 0."""
