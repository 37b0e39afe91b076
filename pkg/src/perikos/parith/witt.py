"""Elements of W(F_{p^m})[1/p] at capped absolute precision.

W(F_{p^m}) is modelled as Z_p[x]/(T(x)) where T is the minimal polynomial
of the Teichmüller lift of the Conway root.  With this choice ``x`` itself is
a Teichmüller representative, so the Frobenius is the ring map ``x -> x^p``
and acts on a Teichmüller expansion sum [a_i] p^i digit by digit.

Internally a nonzero element is ``p**valuation * u`` where ``u`` is a
coordinate vector (basis ``1, x, ..., x^(m-1)``) reduced modulo
``p**(abs_precision - valuation)`` and not divisible by ``p``.  The
Teichmüller digits are derived on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from ..errors import PrecisionError, PrimeMismatch
from .finite_field import GF, conway_polynomial
from .padic import Padic, vp_int, vp_rational

INF = math.inf

_MODULI: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}


def _raw_mulmod(a, b, mod, N):
    """Multiply coefficient lists and reduce modulo the monic ``mod`` and N."""
    d = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] += ai * bj
    for k in range(len(res) - 1, d - 1, -1):
        c = res[k]
        if c:
            for j in range(d):
                res[k - d + j] -= c * mod[j]
    res = res[:d] + [0] * (d - len(res))
    return [c % N for c in res]


def _raw_pow(a, e, mod, N):
    d = len(mod) - 1
    result = [1] + [0] * (d - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _raw_mulmod(result, base, mod, N)
        e >>= 1
        if e:
            base = _raw_mulmod(base, base, mod, N)
    return result


def _compute_modulus(p, m, K):
    conway = list(conway_polynomial(p, m))
    N = p**K
    q = p**m
    if m == 1:
        omega = pow(-conway[0], q ** (K - 1), N)
        return ((-omega) % N, 1)
    w = [0, 1] + [0] * (m - 2)
    for _ in range(K - 1):
        w = _raw_pow(w, q, conway, N)
    conj = [w]
    for _ in range(m - 1):
        conj.append(_raw_pow(conj[-1], p, conway, N))
    # prod_j (T - w_j) with coefficients in Z/p^K[x]/(conway)
    poly = [[1] + [0] * (m - 1)]
    for c in conj:
        shifted = [[0] * m] + poly
        scaled = [_raw_mulmod(coef, c, conway, N) for coef in poly] + [[0] * m]
        poly = [[(s - t) % N for s, t in zip(a, b)] for a, b in zip(shifted, scaled)]
    out = []
    for coef in poly:
        if any(coef[1:]):
            raise ArithmeticError("Teichmüller modulus is not defined over Z_p")
        out.append(coef[0])
    return tuple(out)


def teichmuller_modulus(p: int, m: int, K: int) -> tuple[int, ...]:
    """Monic T(x) mod p^K, lowest degree first, whose roots are Teichmüller."""
    K = max(K, 1)
    cached = _MODULI.get((p, m))
    if cached is None or cached[0] < K:
        top = 16
        while top < K:
            top *= 2
        cached = (top, _compute_modulus(p, m, top))
        _MODULI[(p, m)] = cached
    N = p**K
    return tuple(c % N for c in cached[1])


def ring_mul(a, b, p, m, K):
    """Product in Z/p^K[x]/(T)."""
    if m == 1:
        return ((a[0] * b[0]) % p**K,)
    return tuple(_raw_mulmod(a, b, teichmuller_modulus(p, m, K), p**K))


def ring_pow(a, e, p, m, K):
    if m == 1:
        return (pow(a[0], e, p**K),)
    return tuple(_raw_pow(a, e, teichmuller_modulus(p, m, K), p**K))


@lru_cache(maxsize=None)
def _frobenius_matrix(p, m, n, K):
    # column j holds sigma^n(x^j) = x^(j p^n)
    T = teichmuller_modulus(p, m, K)
    N = p**K
    y = _raw_pow([0, 1] + [0] * (m - 2), p ** (n % m), T, N)
    cols = [[1] + [0] * (m - 1)]
    for _ in range(m - 1):
        cols.append(_raw_mulmod(cols[-1], y, T, N))
    return tuple(tuple(c) for c in cols)


def ring_frobenius(a, n, p, m, K):
    if m == 1 or n % m == 0:
        return tuple(c % p**K for c in a)
    cols = _frobenius_matrix(p, m, n % m, K)
    N = p**K
    return tuple(sum(a[j] * cols[j][i] for j in range(m)) % N for i in range(m))


def teichmuller_lift(field: GF, a, K: int) -> tuple[int, ...]:
    """Coordinates of [a] modulo p^K."""
    p, m = field.p, field.m
    if not any(a):
        return (0,) * m
    if m == 1:
        g = a[0]
        return (pow(g, p ** (K - 1), p**K),)
    w = tuple(a)
    for _ in range(K - 1):
        w = ring_pow(w, field.order, p, m, K)
    return w


def _ring_inverse(a, p, m, K):
    field = GF(p, m)
    y = field.inv(tuple(c % p for c in a))
    k = 1
    while k < K:
        k = min(2 * k, K)
        N = p**k
        ay = ring_mul(a, y, p, m, k)
        two_minus = tuple(((2 if i == 0 else 0) - c) % N for i, c in enumerate(ay))
        y = ring_mul(y, two_minus, p, m, k)
    return tuple(c % p**K for c in y)


def _vp_vec(vec, p):
    return min(vp_int(c, p) for c in vec)


@dataclass(frozen=True)
class WittElem:
    prime: int
    m: int
    valuation: int | float
    unit: tuple[int, ...]
    abs_precision: int

    # -- construction -----------------------------------------------------

    @classmethod
    def _normalize(cls, p, m, v, vec, N) -> "WittElem":
        rel = N - v
        if rel <= 0:
            return cls.zero(p, m, N)
        mod = p**rel
        vec = tuple(c % mod for c in vec)
        k = _vp_vec(vec, p)
        if k == INF:
            return cls.zero(p, m, N)
        if k:
            d = p**k
            vec = tuple(c // d for c in vec)
        return cls(p, m, v + k, vec, N)

    @classmethod
    def zero(cls, p: int, m: int, prec: int) -> "WittElem":
        return cls(p, m, INF, (0,) * m, prec)

    @classmethod
    def one(cls, p: int, m: int, prec: int) -> "WittElem":
        return cls._normalize(p, m, 0, (1,) + (0,) * (m - 1), prec)

    @classmethod
    def from_rational(cls, p: int, m: int, x, prec: int) -> "WittElem":
        return cls.from_padic(Padic.from_rational(p, x, prec), m)

    @classmethod
    def from_padic(cls, x: Padic, m: int) -> "WittElem":
        if x.is_zero():
            return cls.zero(x.prime, m, x.abs_precision)
        return cls(x.prime, m, x.valuation, (x.unit,) + (0,) * (m - 1), x.abs_precision)

    @classmethod
    def from_coords(cls, p: int, m: int, coords, prec: int, valuation: int = 0) -> "WittElem":
        """Element ``p**valuation * sum(coords[j] x^j)`` known modulo p^prec."""
        coords = tuple(coords) + (0,) * (m - len(coords))
        return cls._normalize(p, m, valuation, coords, prec)

    @classmethod
    def teichmuller(cls, p: int, m: int, a, prec: int) -> "WittElem":
        field = GF(p, m)
        a = field.elem(a)
        if prec <= 0:
            return cls.zero(p, m, prec)
        return cls._normalize(p, m, 0, teichmuller_lift(field, a, prec), prec)

    @classmethod
    def from_teich_digits(cls, p: int, m: int, digits, valuation: int = 0,
                          prec: int | None = None) -> "WittElem":
        """``p**valuation * sum([digits[i]] p^i)``; precision defaults to the digit count."""
        if prec is None:
            prec = valuation + len(digits)
        rel = prec - valuation
        if rel <= 0:
            return cls.zero(p, m, prec)
        field = GF(p, m)
        N = p**rel
        acc = [0] * m
        for i, a in enumerate(digits[:rel]):
            t = teichmuller_lift(field, field.elem(a), rel)
            scale = p**i
            acc = [(x + scale * y) % N for x, y in zip(acc, t)]
        return cls._normalize(p, m, valuation, acc, prec)

    def zero_like(self, prec: int | None = None) -> "WittElem":
        return WittElem.zero(self.prime, self.m, self.abs_precision if prec is None else prec)

    def one_like(self, prec: int | None = None) -> "WittElem":
        return WittElem.one(self.prime, self.m, self.abs_precision if prec is None else prec)

    def from_rational_like(self, x, prec: int | None = None) -> "WittElem":
        return WittElem.from_rational(self.prime, self.m, x,
                                      self.abs_precision if prec is None else prec)

    # -- inspection -------------------------------------------------------

    @property
    def field(self) -> GF:
        return GF(self.prime, self.m)

    @property
    def relative_precision(self) -> int:
        return 0 if self.is_zero() else self.abs_precision - self.valuation

    @property
    def teich_digits(self) -> list[tuple[int, ...]]:
        """Teichmüller digits of the unit part, least significant first."""
        if self.is_zero():
            return []
        p = self.prime
        field = self.field
        rel = self.relative_precision
        vec = list(self.unit)
        out = []
        for k in range(rel, 0, -1):
            a = field.elem(vec)
            out.append(a)
            t = teichmuller_lift(field, a, k)
            vec = [((x - y) % p**k) // p for x, y in zip(vec, t)]
        return out

    def is_zero(self) -> bool:
        return self.valuation == INF

    def is_unit(self) -> bool:
        return self.valuation == 0

    def is_integral(self) -> bool:
        return self.valuation >= 0

    def residue(self) -> tuple[int, ...]:
        if self.valuation < 0:
            raise ValueError("residue of a non-integral element")
        if self.abs_precision < 1:
            raise PrecisionError("residue not determined at precision < 1")
        if self.valuation > 0:
            return (0,) * self.m
        return tuple(c % self.prime for c in self.unit)

    def to_padic(self) -> Padic:
        if self.is_zero():
            return Padic.zero(self.prime, self.abs_precision)
        if self.m != 1 and any(self.unit[1:]):
            raise ValueError("element does not lie in Q_p")
        return Padic(self.prime, self.valuation, self.unit[0], self.abs_precision)

    # -- precision --------------------------------------------------------

    def with_precision(self, N: int) -> "WittElem":
        if self.is_zero():
            return WittElem.zero(self.prime, self.m, N)
        return WittElem._normalize(self.prime, self.m, self.valuation, self.unit, N)

    def agrees(self, other, prec: int | None = None) -> bool:
        d = self - other
        if prec is None:
            return d.is_zero()
        return d.valuation >= prec

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other, for_mul: bool = False) -> "WittElem":
        if isinstance(other, WittElem):
            if (other.prime, other.m) != (self.prime, self.m):
                raise PrimeMismatch(f"W(F_{self.prime}^{self.m}) vs W(F_{other.prime}^{other.m})")
            return other
        if isinstance(other, Padic):
            if other.prime != self.prime:
                raise PrimeMismatch(f"primes differ: {self.prime} vs {other.prime}")
            return WittElem.from_padic(other, self.m)
        if isinstance(other, (int, Rational)):
            v = vp_rational(other, self.prime)
            N = self.abs_precision
            if for_mul and not self.is_zero() and v != INF:
                N = max(N, N + v - self.valuation)
            return WittElem.from_rational(self.prime, self.m, other, N)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p, m = self.prime, self.m
        N = min(self.abs_precision, other.abs_precision)
        if self.valuation >= N:
            return other.with_precision(N) if other.valuation < N else WittElem.zero(p, m, N)
        if other.valuation >= N:
            return self.with_precision(N)
        v = min(self.valuation, other.valuation)
        sa, sb = p ** (self.valuation - v), p ** (other.valuation - v)
        vec = tuple(a * sa + b * sb for a, b in zip(self.unit, other.unit))
        return WittElem._normalize(p, m, v, vec, N)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return WittElem._normalize(self.prime, self.m, self.valuation,
                                   tuple(-c for c in self.unit), self.abs_precision)

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
        p, m = self.prime, self.m
        if self.is_zero() and other.is_zero():
            return WittElem.zero(p, m, self.abs_precision + other.abs_precision)
        N = min(self.valuation + other.abs_precision, other.valuation + self.abs_precision)
        if self.is_zero() or other.is_zero():
            return WittElem.zero(p, m, N)
        v = self.valuation + other.valuation
        return WittElem._normalize(p, m, v, ring_mul(self.unit, other.unit, p, m, N - v), N)

    __rmul__ = __mul__

    def inverse(self) -> "WittElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of an element indistinguishable from zero")
        rel = self.relative_precision
        u = _ring_inverse(self.unit, self.prime, self.m, rel)
        return WittElem._normalize(self.prime, self.m, -self.valuation, u,
                                   self.abs_precision - 2 * self.valuation)

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

    def __pow__(self, e: int) -> "WittElem":
        if e < 0:
            return self.inverse() ** (-e)
        p, m = self.prime, self.m
        if self.is_zero():
            return WittElem.one(p, m, self.abs_precision) if e == 0 else WittElem.zero(p, m, e * self.abs_precision)
        N = (e - 1) * self.valuation + self.abs_precision
        rel = N - e * self.valuation
        return WittElem._normalize(p, m, e * self.valuation, ring_pow(self.unit, e, p, m, rel), N)

    def scale_p(self, k: int) -> "WittElem":
        if self.is_zero():
            return WittElem.zero(self.prime, self.m, self.abs_precision + k)
        return WittElem(self.prime, self.m, self.valuation + k, self.unit, self.abs_precision + k)

    def frobenius(self, n: int = 1) -> "WittElem":
        """Apply the Frobenius ``n`` times (negative ``n`` allowed)."""
        if self.is_zero() or self.m == 1:
            return self
        vec = ring_frobenius(self.unit, n, self.prime, self.m, self.relative_precision)
        return WittElem(self.prime, self.m, self.valuation, vec, self.abs_precision)

    # -- output -----------------------------------------------------------

    def __repr__(self):
        if self.is_zero():
            return f"WittElem(0 + O({self.prime}^{self.abs_precision}), m={self.m})"
        return (f"WittElem(p^{self.valuation}*{list(self.unit)} + O({self.prime}^{self.abs_precision}),"
                f" m={self.m})")

    def to_json(self) -> dict:
        return {
            "type": "witt",
            "p": self.prime,
            "m": self.m,
            "valuation": None if self.is_zero() else self.valuation,
            "digits": [list(a) for a in self.teich_digits],
            "prec": self.abs_precision,
        }

    @classmethod
    def from_json(cls, d: dict) -> "WittElem":
        if d.get("type") != "witt":
            raise ValueError(f"not a witt record: {d.get('type')}")
        p, m = d["p"], d["m"]
        if d["valuation"] is None:
            return cls.zero(p, m, d["prec"])
        out = cls.from_teich_digits(p, m, [tuple(a) for a in d["digits"]], d["valuation"], d["prec"])
        if out.valuation != d["valuation"]:
            raise ValueError("leading Teichmüller digit must be nonzero")
        return out
