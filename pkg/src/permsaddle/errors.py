"""Exception hierarchy.

Each class carries the CLI exit code it maps to.
"""


class PermSaddleError(Exception):
    exit_code = 1


class InvalidSizeError(PermSaddleError, ValueError):
    exit_code = 3


class InvalidValueError(PermSaddleError, ValueError):
    exit_code = 3


class DataFormatError(PermSaddleError, ValueError):
    """Unparseable input file; the message names the offending line."""

    exit_code = 3


class TieError(PermSaddleError, ValueError):
    """Tied observations; the permutation null assumes none."""

    exit_code = 4


class DimensionError(PermSaddleError, ValueError):
    exit_code = 3


class DegenerateSpecError(PermSaddleError, ValueError):
    """Score vectors make the statistic constant over all permutations."""

    exit_code = 3


class SolverError(PermSaddleError, RuntimeError):
    exit_code = 5


class EnumerationLimitError(PermSaddleError, ValueError):
    exit_code = 3


class ConfigError(PermSaddleError, ValueError):
    exit_code = 3
