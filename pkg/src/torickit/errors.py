"""Exception hierarchy shared by all torickit modules."""


class ToricError(Exception):
    """Base class for every error raised by torickit."""


class DimensionError(ToricError, ValueError):
    """Vectors or matrices of incompatible lengths were combined."""


class DegenerateInputError(ToricError, ValueError):
    """Input is degenerate (zero vector, all-zero coordinates, empty weights)."""


class UnsupportedInputError(ToricError, ValueError):
    """Input lies outside the supported domain of an operation."""


class UnknownConeError(ToricError, KeyError):
    """A cone was looked up in a fan that does not contain it."""


class NotCartierError(ToricError):
    """A Weil divisor has no integral local data on some maximal cone."""

    def __init__(self, message, cone=None):
        super().__init__(message)
        self.cone = cone


class OutOfSupportError(ToricError, ValueError):
    """A point outside the support of a fan was evaluated."""


class ParseError(ToricError, ValueError):
    """A fan, polytope or divisor document could not be parsed."""

    def __init__(self, message, location=None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location
