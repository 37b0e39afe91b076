"""Exact-precision p-adic arithmetic."""

from .finite_field import GF, conway_polynomial
from .padic import Padic
from .series import CoeffRing, PSeries
from .witt import WittElem

__all__ = ["GF", "conway_polynomial", "Padic", "CoeffRing", "PSeries", "WittElem"]
