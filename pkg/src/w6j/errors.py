"""Exception types shared across the package."""


class W6jError(Exception):
    """Base class for every error raised by this package."""


class DomainError(W6jError, ValueError):
    """Malformed quantum numbers (|m| > j, wrong parity, negative j)."""


class ResourceLimit(W6jError):
    """A computation would exceed a configured size limit."""


class IncompatibleRadicands(W6jError, ArithmeticError):
    """Two nonzero radicals with different square classes were added."""


class ParseError(W6jError, ValueError):
    def __init__(self, message, position=None, line=None, column=None):
        self.position = position
        self.line = line
        self.column = column
        if position is not None:
            message = f"{message} (line {line}, column {column}, char {position})"
        super().__init__(message)


class ValidationError(W6jError, ValueError):
    """A network description violates a structural invariant."""


class UnknownEdge(W6jError, KeyError):
    pass


class NotATwoJNode(W6jError, ValueError):
    pass


class DegenerateConfig(W6jError, ValueError):
    """A triangle or tetrahedron needed by the computation has collapsed."""


class EmptyRange(W6jError, ValueError):
    """The polygon inequality fails, so the classical range is empty."""


class NotAllowed(W6jError, ValueError):
    """A semiclassical formula was requested outside the allowed region."""


class EmptyLevelSet(W6jError, ValueError):
    pass


class UnknownOperator(W6jError, KeyError):
    pass
