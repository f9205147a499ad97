"""Exception hierarchy shared by all orbita modules."""


class OrbitaError(Exception):
    """Base class for domain errors (bad input, violated preconditions)."""


class DimensionError(OrbitaError, ValueError):
    pass


class ParseError(OrbitaError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class BudgetExceeded(OrbitaError):
    pass


class NotPeriodicError(OrbitaError):
    pass


class TheoremViolation(Exception):
    """A check that a proven statement guarantees has failed.

    Deliberately not an OrbitaError: this signals a bug or a falsification,
    never bad user input.
    """
