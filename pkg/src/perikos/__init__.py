"""Desk-scale computations around p-adic period maps.

Subpackages and modules:

* :mod:`perikos.parith` - p-adic numbers, Witt vectors of finite fields, power series
* :mod:`perikos.formal_groups` - formal group laws, logarithms, Lubin-Tate deformations
* :mod:`perikos.isocrystals` - Newton polygons and Kottwitz sets
* :mod:`perikos.period_map` - the crystalline period map on Lubin-Tate space
* :mod:`perikos.ff_curve` - points, bundles and modifications on the Fargues-Fontaine curve
* :mod:`perikos.actions` - J, GL_h and Weil actions on tower points
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DomainError,
    PerikosError,
    PrecisionError,
    PrimeMismatch,
    SchemaError,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "DomainError",
    "PerikosError",
    "PrecisionError",
    "PrimeMismatch",
    "SchemaError",
]
