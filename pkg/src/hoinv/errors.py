"""Exception hierarchy. ``exit_code`` is what the CLI returns for each class."""


class HoinvError(Exception):
    exit_code = 4


class MissingInputError(HoinvError, FileNotFoundError):
    exit_code = 2


class KindMismatchError(HoinvError):
    exit_code = 3


class MalformedInputError(HoinvError, ValueError):
    exit_code = 4


class InvalidActionError(MalformedInputError):
    """A generator matrix is singular."""


class DomainError(HoinvError, ValueError):
    exit_code = 4


class SingularityError(DomainError, ZeroDivisionError):
    pass


class PrecisionError(HoinvError, ArithmeticError):
    """A truncated series cannot meet its tail bound at the requested point."""

    exit_code = 4

    def __init__(self, message, suggested_truncation=None):
        super().__init__(message)
        self.suggested_truncation = suggested_truncation


class OutputError(HoinvError, OSError):
    exit_code = 5
