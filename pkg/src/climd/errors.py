"""Exception types shared across the package.

The CLI maps these onto its exit-code contract:
0 success, 1 validation error, 2 infeasible schedule, 3 I/O error.
"""


class ClimdError(Exception):
    """Base class for all package errors."""


class ValidationError(ClimdError):
    """Malformed or contract-violating input (bad probability vector,
    duplicate sample id, unknown class, corrupt file line, ...)."""


class DomainError(ValidationError):
    """Numeric argument outside a function's mathematical domain."""


class InfeasibleScheduleError(ClimdError):
    """Requested subset size cannot be met under the per-class caps."""
