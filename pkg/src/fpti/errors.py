"""Exception hierarchy shared by every module."""


class FptiError(Exception):
    """Base class for all library errors."""


class NotPrime(FptiError, ValueError):
    pass


class DuplicateVariable(FptiError, ValueError):
    pass


class InvalidVariable(FptiError, ValueError):
    pass


class CtxMismatch(FptiError, ValueError):
    """Operands live in different rings."""


class RankMismatch(FptiError, ValueError):
    """Operands live in free modules of different rank."""


class ParseError(FptiError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        elif column is not None:
            where = f"column {column}: "
        super().__init__(where + message)


class ExponentOverflow(FptiError, ValueError):
    """p**e does not fit the supported exponent range."""


class ResourceCap(FptiError, RuntimeError):
    """A configured resource bound was exceeded."""


class IterationCap(ResourceCap):
    """The star-closure chain did not stabilize within the iteration cap."""


class StabilizationCapExceeded(ResourceCap):
    """An HSL chain did not stabilize within e_max steps.

    ``partial`` holds the report computed so far.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NoTestElement(FptiError):
    """No candidate test element passed the nonzerodivisor check."""


class InvariantViolation(FptiError, AssertionError):
    """An internal algebraic invariant failed; indicates a bug."""


class BoundsExceeded(FptiError, ValueError):
    """An oracle instance is too large for dense enumeration."""
