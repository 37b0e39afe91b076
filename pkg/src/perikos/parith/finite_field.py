"""Finite fields F_{p^m} realized through Conway polynomials.

Elements are tuples of ``m`` integers in ``[0, p)``: the coordinates in the
basis ``1, a, ..., a^(m-1)`` where ``a`` is a root of the Conway polynomial.
The polynomials come from ``conway.json`` shipped next to this module; pairs
missing from the table are searched for with the same deterministic
procedure that produced it.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from itertools import product

Poly = list  # coefficient lists, lowest degree first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mulmod(a, b, mod, p):
    """Product of ``a`` and ``b`` reduced modulo the monic polynomial ``mod``."""
    if not a or not b:
        return []
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] += ai * bj
    return poly_mod(res, mod, p)


def poly_mod(a, mod, p):
    a = [c % p for c in a]
    d = len(mod) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c:
            for j in range(d + 1):
                a[k - d + j] = (a[k - d + j] - c * mod[j]) % p
    return _trim(a[:d])


def poly_powmod(a, e, mod, p):
    result = [1]
    base = poly_mod(list(a), mod, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, mod, p)
        e >>= 1
        if e:
            base = poly_mulmod(base, base, mod, p)
    return result


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def is_primitive(f, p) -> bool:
    """True iff ``f`` (monic) is irreducible and ``x`` generates the unit group."""
    m = len(f) - 1
    if f[0] % p == 0:
        return False
    order = p**m - 1
    if poly_powmod([0, 1], order, f, p) != [1]:
        return False
    return all(poly_powmod([0, 1], order // r, f, p) != [1] for r in prime_factors(order))


def _from_conway_digits(a, p):
    # x^m - a1 x^(m-1) + a2 x^(m-2) - ... ; returned lowest degree first
    m = len(a)
    coeffs = [0] * (m + 1)
    coeffs[m] = 1
    for i, ai in enumerate(a, start=1):
        coeffs[m - i] = ((-1) ** i * ai) % p
    return coeffs


def _compatible(f, p, m, sub) -> bool:
    # root^((p^m-1)/(p^d-1)) must be a root of the degree-d Conway polynomial
    for d, g in sub.items():
        y = poly_powmod([0, 1], (p**m - 1) // (p**d - 1), f, p)
        acc: list[int] = []
        for c in reversed(g):
            acc = poly_mulmod(acc, y, f, p) or [0]
            acc = poly_mod([acc[0] + c] + acc[1:], f, p)
        if acc:
            return False
    return True


def search_conway(p: int, m: int) -> list[int]:
    """Lexicographically least compatible primitive polynomial of degree ``m``."""
    sub = {d: conway_polynomial(p, d) for d in range(1, m) if m % d == 0}
    for a in product(range(p), repeat=m):
        f = _from_conway_digits(a, p)
        if is_primitive(f, p) and _compatible(f, p, m, sub):
            return f
    raise ValueError(f"no primitive polynomial of degree {m} over F_{p}")


@lru_cache(maxsize=None)
def _table() -> dict[str, list[int]]:
    data = resources.files(__package__).joinpath("conway.json").read_text()
    return json.loads(data)["polynomials"]


@lru_cache(maxsize=None)
def conway_polynomial(p: int, m: int) -> tuple[int, ...]:
    """Conway polynomial for ``(p, m)``, lowest degree coefficient first."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError("field degree must be >= 1")
    entry = _table().get(f"{p},{m}")
    if entry is not None:
        return tuple(entry)
    return tuple(search_conway(p, m))


class GF:
    """Arithmetic in F_{p^m} on coordinate tuples."""

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.modulus = list(conway_polynomial(p, m))
        self.order = p**m

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))

    def elem(self, coords) -> tuple[int, ...]:
        coords = [c % self.p for c in coords]
        if len(coords) > self.m:
            coords = poly_mod(coords, self.modulus, self.p)
        return tuple(coords) + (0,) * (self.m - len(coords))

    def zero(self):
        return (0,) * self.m

    def one(self):
        return self.elem([1])

    def gen(self):
        return self.elem([0, 1]) if self.m > 1 else self.elem([-self.modulus[0]])

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        return self.elem(poly_mulmod(_trim(list(a)), _trim(list(b)), self.modulus, self.p))

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        return self.elem(poly_powmod(_trim(list(a)), e, self.modulus, self.p))

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.pow(a, self.order - 2)

    def frobenius(self, a, n=1):
        return self.pow(a, pow(self.p, n % self.m))

    def is_zero(self, a) -> bool:
        return not any(a)
