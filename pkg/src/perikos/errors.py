"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: :class:`DomainError` to 2,
:class:`PrecisionError` (and :class:`ConvergenceError`) to 3, and
:class:`SchemaError` to 4.
"""


class PerikosError(Exception):
    """Base class for all package errors."""


class PrimeMismatch(PerikosError, ValueError):
    """Operands live over different primes or residue fields."""


class DomainError(PerikosError, ValueError):
    """Input lies outside the domain where the operation is defined."""


class PrecisionError(PerikosError, ArithmeticError):
    """The precision budget cannot resolve the requested quantity."""

    def __init__(self, msg, achieved=None):
        super().__init__(msg)
        self.achieved = achieved


class ConvergenceError(PrecisionError):
    """An adaptive limit did not stabilize before its iteration cap."""


class SchemaError(PerikosError, ValueError):
    """Malformed or unknown fields in a job description."""
