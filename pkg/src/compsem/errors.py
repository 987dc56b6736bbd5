"""Exception hierarchy shared by every compsem module."""


class CompsemError(Exception):
    """Base class for all errors raised by compsem."""


# relations
class RestrictionError(CompsemError):
    pass


class EmptyDomainError(CompsemError):
    pass


class DomainMismatchError(CompsemError):
    pass


class TypeMismatchError(CompsemError):
    pass


class CompositionError(CompsemError):
    pass


# syntax
class ParseError(CompsemError):
    """Malformed input text. ``offset`` is the 0-based character position."""

    def __init__(self, message, offset=None):
        self.message = message
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class ArityError(CompsemError):
    pass


class UnknownSymbolError(CompsemError):
    pass


# structures
class MissingSymbolError(CompsemError):
    pass


class PartialFunctionError(CompsemError):
    pass


class OutOfDomainError(CompsemError):
    pass


class BudgetExceededError(CompsemError):
    pass


# semantics
class UnboundVariableError(CompsemError):
    pass


# audit
class ClaimShapeError(CompsemError):
    pass


class VersionMismatchError(CompsemError):
    pass
