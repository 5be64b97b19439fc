"""Exception hierarchy.

Every error raised deliberately by the package derives from
:class:`RelayRateError`. Input problems additionally derive from
``ValueError`` so callers that only know the builtin still catch them.
"""


class RelayRateError(Exception):
    pass


class InputError(RelayRateError, ValueError):
    """Malformed or out-of-range input (CLI exit code 2)."""


class NumericalError(RelayRateError, ArithmeticError):
    """A numerical routine could not produce a trustworthy answer (exit 3)."""


# entropy-core
class NegativeProbabilityError(InputError):
    pass


class MassNotOneError(InputError):
    pass


class SymbolOutOfRangeError(InputError):
    pass


class DuplicateEntryError(InputError):
    pass


class BitOutOfRangeError(InputError):
    pass


class OverlappingSetsError(InputError):
    pass


class EmptyComponentSubsetError(InputError):
    pass


class NegativeRateError(InputError):
    pass


class ProbabilityOutOfRangeError(InputError):
    pass


class MissingSubsetError(InputError):
    pass


class NonEntropicProfileError(InputError):
    """Raised instead of a warning when profiles are validated strictly."""


class TooManyUsersError(InputError):
    pass


# imeasure
class EmptySubsetError(InputError):
    pass


class KOutOfRangeError(InputError):
    pass


class JNotInComplementError(InputError):
    pass


class InvalidPairError(InputError):
    pass


# relay-analysis
class LengthMismatchError(InputError):
    pass


class NonpositiveCapacityError(InputError):
    pass


class EntropyOutOfRangeError(InputError):
    pass


class WrongUserCountError(InputError):
    pass


# lp
class DimensionTooLargeError(InputError):
    pass


class NumericalBreakdownError(NumericalError):
    pass


# io
class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
