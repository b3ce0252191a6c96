"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EngineError):
    """An operation was applied outside its mathematical domain."""


class ClassificationError(DomainError):
    """No classical-group row matches the given representation."""


class CaseMismatchError(DomainError):
    """Inputs do not have the shapes required by the declared case."""


class IncompleteTableError(EngineError):
    """An epsilon table is missing a required pair, twist or self entry."""


class DocumentError(EngineError):
    """An input document failed schema validation."""
