from __future__ import annotations


class DeclarationError(ValueError):
    """Unknown, undeclared or duplicated variable."""


class QddcSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class MacroError(ValueError):
    pass


class CapacityError(ValueError):
    pass


class AlphabetMismatchError(ValueError):
    pass


class WitnessCollisionError(ValueError):
    pass


class NotPrefixClosedError(ValueError):
    pass


class ControllerIntegrityError(ValueError):
    """A controller table has no entry for a reachable (state, input)."""


class SpecFileError(ValueError):
    pass


class ReferenceCountError(ValueError):
    """A controller size is further from its reference count than the tolerance allows."""
