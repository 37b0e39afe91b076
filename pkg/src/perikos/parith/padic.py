"""Capped absolute-precision p-adic numbers.

A :class:`Padic` is an element of Q_p known modulo ``p**abs_precision``.
Nonzero values are stored as ``p**valuation * unit`` with ``unit`` an integer
prime to ``p`` reduced modulo ``p**(abs_precision - valuation)``.  Anything
congruent to zero at the stated precision is the canonical zero, whose
valuation is ``math.inf``.

Plain ``int`` and ``Fraction`` operands are treated as exact and are lifted
to whatever precision keeps the result's precision unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from ..errors import PrecisionError, PrimeMismatch

INF = math.inf


def vp_int(n: int, p: int) -> int | float:
    """p-adic valuation of an integer (``inf`` for zero)."""
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rational(x, p: int) -> int | float:
    x = Fraction(x)
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


@dataclass(frozen=True)
class Padic:
    prime: int
    valuation: int | float
    unit: int
    abs_precision: int

    # -- construction -----------------------------------------------------

    @classmethod
    def _normalize(cls, p: int, v: int, n: int, N: int) -> "Padic":
        """Element ``p**v * n`` known modulo ``p**N``."""
        if n == 0 or N - v <= 0:
            return cls(p, INF, 0, N)
        n %= p ** (N - v)
        if n == 0:
            return cls(p, INF, 0, N)
        while n % p == 0:
            n //= p
            v += 1
        return cls(p, v, n, N)

    @classmethod
    def zero(cls, p: int, prec: int) -> "Padic":
        return cls(p, INF, 0, prec)

    @classmethod
    def one(cls, p: int, prec: int) -> "Padic":
        return cls._normalize(p, 0, 1, prec)

    @classmethod
    def from_rational(cls, p: int, x, prec: int) -> "Padic":
        """Reduce the exact rational ``x`` to absolute precision ``prec``."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, prec)
        vd = vp_int(x.denominator, p)
        d = x.denominator // p**vd
        v = -vd
        if prec - v <= 0:
            return cls.zero(p, prec)
        mod = p ** (prec - v)
        return cls._normalize(p, v, x.numerator * pow(d, -1, mod), prec)

    from_int = from_rational

    @classmethod
    def from_digits(cls, p: int, valuation: int, digits, prec: int | None = None) -> "Padic":
        """Build ``p**valuation * sum(digits[i] * p**i)``.

        ``prec`` defaults to ``valuation + len(digits)``.
        """
        if prec is None:
            prec = valuation + len(digits)
        if any(not 0 <= d < p for d in digits):
            raise ValueError(f"digits must lie in [0, {p})")
        n = sum(d * p**i for i, d in enumerate(digits))
        return cls._normalize(p, valuation, n, prec)

    def zero_like(self, prec: int | None = None) -> "Padic":
        return Padic.zero(self.prime, self.abs_precision if prec is None else prec)

    def one_like(self, prec: int | None = None) -> "Padic":
        return Padic.one(self.prime, self.abs_precision if prec is None else prec)

    def from_rational_like(self, x, prec: int | None = None) -> "Padic":
        return Padic.from_rational(self.prime, x, self.abs_precision if prec is None else prec)

    # -- inspection -------------------------------------------------------

    @property
    def m(self) -> int:
        return 1

    @property
    def digits(self) -> list[int]:
        """Base-p digits of the unit part, least significant first."""
        if self.is_zero():
            return []
        out, n = [], self.unit
        for _ in range(self.abs_precision - self.valuation):
            n, r = divmod(n, self.prime)
            out.append(r)
        return out

    @property
    def relative_precision(self) -> int:
        return 0 if self.is_zero() else self.abs_precision - self.valuation

    def is_zero(self) -> bool:
        """True when the element is indistinguishable from zero at its precision."""
        return self.valuation == INF

    def is_unit(self) -> bool:
        return self.valuation == 0

    def is_integral(self) -> bool:
        return self.valuation >= 0

    def to_fraction(self) -> Fraction:
        """The representative ``p**v * unit`` as an exact rational."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.prime) ** self.valuation

    def residue(self) -> tuple[int]:
        """Image in the residue field F_p (the element must be integral)."""
        if self.valuation < 0:
            raise ValueError("residue of a non-integral element")
        if self.abs_precision < 1:
            raise PrecisionError("residue not determined at precision < 1")
        return ((self.unit % self.prime) if self.valuation == 0 else 0,)

    # -- precision --------------------------------------------------------

    def with_precision(self, N: int) -> "Padic":
        """Truncate to ``N``, or pad with zero digits when ``N`` is larger."""
        if self.is_zero():
            return Padic.zero(self.prime, N)
        return Padic._normalize(self.prime, self.valuation, self.unit, N)

    def agrees(self, other, prec: int | None = None) -> bool:
        """Equality at the common precision (or at ``prec`` when given)."""
        d = self - other
        if prec is None:
            return d.is_zero()
        return d.valuation >= prec

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Padic"):
        if other.prime != self.prime:
            raise PrimeMismatch(f"primes differ: {self.prime} vs {other.prime}")

    def _coerce(self, other, for_mul: bool = False) -> "Padic":
        if isinstance(other, Padic):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)):
            v = vp_rational(other, self.prime)
            N = self.abs_precision
            if for_mul and not self.is_zero() and v != INF:
                N = max(N, N + v - self.valuation)
            return Padic.from_rational(self.prime, other, N)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        N = min(self.abs_precision, other.abs_precision)
        # an operand whose valuation reaches N contributes nothing
        if self.valuation >= N:
            return other.with_precision(N) if other.valuation < N else Padic.zero(self.prime, N)
        if other.valuation >= N:
            return self.with_precision(N)
        v = min(self.valuation, other.valuation)
        p = self.prime
        n = self.unit * p ** (self.valuation - v) + other.unit * p ** (other.valuation - v)
        return Padic._normalize(p, v, n, N)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return Padic._normalize(self.prime, self.valuation, -self.unit, self.abs_precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other, for_mul=True)
        if other is NotImplemented:
            return other
        if self.is_zero() and other.is_zero():
            return Padic.zero(self.prime, self.abs_precision + other.abs_precision)
        N = min(self.valuation + other.abs_precision, other.valuation + self.abs_precision)
        if self.is_zero() or other.is_zero():
            return Padic.zero(self.prime, N)
        return Padic._normalize(self.prime, self.valuation + other.valuation,
                                self.unit * other.unit, N)

    __rmul__ = __mul__

    def inverse(self) -> "Padic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of an element indistinguishable from zero")
        rel = self.abs_precision - self.valuation
        u = pow(self.unit, -1, self.prime**rel)
        return Padic._normalize(self.prime, -self.valuation, u, self.abs_precision - 2 * self.valuation)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int) -> "Padic":
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_zero():
            return Padic.one(self.prime, self.abs_precision) if e == 0 else Padic.zero(self.prime, e * self.abs_precision)
        N = (e - 1) * self.valuation + self.abs_precision
        rel = N - e * self.valuation
        return Padic._normalize(self.prime, e * self.valuation, pow(self.unit, e, self.prime**rel), N)

    def scale_p(self, k: int) -> "Padic":
        """Multiply by ``p**k``: shifts valuation and precision together."""
        if self.is_zero():
            return Padic.zero(self.prime, self.abs_precision + k)
        return Padic(self.prime, self.valuation + k, self.unit, self.abs_precision + k)

    def frobenius(self, n: int = 1) -> "Padic":
        return self

    # -- output -----------------------------------------------------------

    def __repr__(self):
        return f"Padic({self.to_fraction()} + O({self.prime}^{self.abs_precision}))"

    def to_json(self) -> dict:
        return {
            "type": "padic",
            "p": self.prime,
            "valuation": None if self.is_zero() else self.valuation,
            "digits": self.digits,
            "prec": self.abs_precision,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Padic":
        if d.get("type", "padic") != "padic":
            raise ValueError(f"not a padic record: {d.get('type')}")
        if d["valuation"] is None:
            return cls.zero(d["p"], d["prec"])
        out = cls.from_digits(d["p"], d["valuation"], d["digits"], d["prec"])
        if out.valuation != d["valuation"]:
            raise ValueError("leading digit must be nonzero")
        return out
