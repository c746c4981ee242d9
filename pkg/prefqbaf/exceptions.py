from typing import Optional, Sequence, Tuple


class PrefqbafError(Exception):
    pass


class ValidationError(PrefqbafError):
    """A framework or score assignment breaks a structural invariant."""
    pass


class CycleError(ValidationError):
    def __init__(self, arguments: Sequence[str], message: Optional[str] = None):
        self.arguments: Tuple[str, ...] = tuple(arguments)
        super().__init__(message or f"cycle through arguments: {', '.join(self.arguments)}")


class CoverageError(ValidationError):
    pass


class PreferenceError(PrefqbafError):
    pass


class PreferenceSyntaxError(PreferenceError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class SingleTierError(PreferenceError):
    pass


class DuplicateArgumentError(PreferenceError):
    pass


class UnknownArgumentError(PreferenceError):
    pass


class ParamError(PrefqbafError):
    pass


class DomainError(PrefqbafError):
    pass


class EmptyDecisionError(PrefqbafError):
    pass


class ConfigError(PrefqbafError):
    pass


class LengthMismatchError(PrefqbafError):
    pass


class EmptySequenceError(PrefqbafError):
    pass


class DocumentError(PrefqbafError):
    pass


class ParseError(DocumentError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class SchemaError(DocumentError):
    def __init__(self, message: str, locations: Sequence[str] = ()):
        self.locations: Tuple[str, ...] = tuple(locations)
        super().__init__(message)


class StorageError(PrefqbafError):
    pass
