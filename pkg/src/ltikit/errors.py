"""Exception hierarchy.

Every error carries the CLI exit code it maps to, so the command-line front
end never has to keep its own lookup table.
"""


class LtiError(Exception):
    exit_code = 2


class UsageError(LtiError):
    """Bad request parameters (time grids, horizons)."""

    exit_code = 1


class InputError(LtiError):
    """Malformed or inconsistent input data."""

    exit_code = 3


class NumericalError(LtiError):
    """The request is well formed but the math cannot deliver an answer."""

    exit_code = 2


class SingularMatrix(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class Uncontrollable(NumericalError):
    pass


class SingularGramian(NumericalError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class DimensionMismatch(InputError):
    pass


class DimensionError(DimensionMismatch):
    """Raised by the model-file parser."""


class ParseError(InputError):
    pass


class MultiInput(InputError):
    pass


class DomainMismatch(InputError):
    """Operation requires the other time domain."""


class GridMismatch(InputError):
    pass


class IndefiniteWeight(InputError):
    pass


class NonSymmetricWeight(InputError):
    pass


class InvalidTime(UsageError):
    pass


class InvalidGrid(UsageError):
    pass


class InvalidHorizon(UsageError):
    pass


class NonFiniteValue(InputError):
    pass
