"""One-dimensional formal group laws given by logarithms.

Laws are built as ``F(x, y) = exp(log x + log y)`` with ``exp`` the
compositional inverse of the logarithm.  The logarithms of interest are
p-typical, ``log(x) = sum_n b_n x^(p^n)``, with ``b_n`` from the functional
equation

    p * b_n = sum_{i=1}^{h} b_{n-i} * u_i^(p^(n-i)),    u_h = 1,

specialized at concrete deformation parameters ``u_1, ..., u_{h-1}``.  At
``u = 0`` this is the Honda logarithm ``sum_k x^(p^(hk)) / p^k``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, PrecisionError
from .parith.padic import Padic
from .parith.series import CoeffRing, PSeries
from .parith.witt import WittElem

INF = math.inf


def honda_log(h: int, p: int, M: int, prec: int = 20) -> PSeries:
    """``sum_k x^((p^h)^k) / p^k`` truncated below degree ``M`` (exact)."""
    if h < 1:
        raise ValueError("height must be >= 1")
    if M < 2:
        raise ValueError("truncation order must be >= 2")
    coeffs = {}
    k, deg = 0, 1
    while deg < M:
        coeffs[deg] = Fraction(1, p**k)
        k += 1
        deg = p ** (h * k)
    return PSeries.from_dict(CoeffRing(p, 1, prec), 1, M, coeffs)


def quasi_logs(h: int, p: int, M: int, prec: int = 20) -> list[PSeries]:
    """``[l_0, ..., l_{h-1}]`` with ``l_i(x) = l_0(x^(p^i)) / p`` for i >= 1."""
    l0 = honda_log(h, p, M, prec)
    out = [l0]
    for i in range(1, h):
        xi = PSeries.monomial(l0.ring, (p**i,), M)
        out.append(l0.compose(xi) / p)
    return out


@dataclass(frozen=True)
class DeformationParams:
    """Deformation parameters ``u_1, ..., u_{h-1}``.

    Values may be ints, Fractions, Padic or WittElem.  Integral points of
    Lubin–Tate space need every ``u_i`` of valuation >= 1.
    """

    h: int
    u: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        if self.h < 1:
            raise ValueError("height must be >= 1")
        if len(self.u) != self.h - 1:
            raise ValueError(f"height {self.h} needs {self.h - 1} parameters, got {len(self.u)}")

    def valuations(self, p: int) -> list:
        return [_valuation(x, p) for x in self.u]

    def is_integral_point(self, p: int) -> bool:
        return all(v >= 1 for v in self.valuations(p))

    def to_json(self) -> dict:
        return {"h": self.h, "u": [_value_json(x) for x in self.u]}

    @classmethod
    def from_json(cls, d: dict) -> "DeformationParams":
        return cls(d["h"], tuple(_value_from_json(x) for x in d["u"]))


def _valuation(x, p):
    if isinstance(x, (Padic, WittElem)):
        return x.valuation
    x = Fraction(x)
    if x == 0:
        return INF
    v, n, d = 0, x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _value_json(x):
    if isinstance(x, (Padic, WittElem)):
        return x.to_json()
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def _value_from_json(x):
    if isinstance(x, dict):
        return WittElem.from_json(x) if x.get("type") == "witt" else Padic.from_json(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    raise ValueError(f"cannot read deformation parameter {x!r}")


def _lift(x, p: int, m: int, prec: int):
    """Coerce a parameter value into Padic (m = 1) or WittElem at ``prec``."""
    if isinstance(x, WittElem):
        if x.prime != p:
            raise ValueError("parameter prime mismatch")
        if x.m != m:
            if x.m == 1:
                return WittElem.from_padic(x.to_padic(), m)
            raise ValueError(f"parameter lives in W(F_{p}^{x.m}), expected m = {m}")
        return x
    if isinstance(x, Padic):
        if x.prime != p:
            raise ValueError("parameter prime mismatch")
        return x if m == 1 else WittElem.from_padic(x, m)
    if m == 1:
        return Padic.from_rational(p, x, prec)
    return WittElem.from_rational(p, m, x, prec)


def _ring_degree(u) -> int:
    return max((x.m for x in u if isinstance(x, WittElem)), default=1)


def gh_universal_coeffs(h: int, params: DeformationParams | list | tuple, n_max: int,
                        p: int, prec: int = 20) -> list:
    """``b_0, ..., b_{n_max}`` of the p-typical logarithm at the given parameters.

    Exact (int / Fraction) parameters are lifted to absolute precision
    ``prec``; each recursion step divides by p, so the precision of ``b_n``
    falls roughly by one every ``h`` steps.
    """
    if not isinstance(params, DeformationParams):
        params = DeformationParams(h, tuple(params))
    if params.h != h:
        raise ValueError("parameter height mismatch")
    m = _ring_degree(params.u)
    u = [_lift(x, p, m, prec) for x in params.u]
    one = Padic.one(p, prec) if m == 1 else WittElem.one(p, m, prec)
    u.append(one)  # u_h
    b = [one]
    for n in range(1, n_max + 1):
        acc = None
        for i in range(1, min(h, n) + 1):
            term = b[n - i] * (u[i - 1] ** (p ** (n - i)))
            acc = term if acc is None else acc + term
        b.append(acc / p)
    return b


def gh_symbolic_h2(p: int, n_max: int) -> list[dict[int, Fraction]]:
    """Height-2 coefficients as polynomials in ``u = u_1`` with exact rationals.

    Entry ``n`` maps exponent -> coefficient.  Degrees grow like p^n, so
    this is meant for small ``n_max`` cross-checks only.
    """
    def add(a, b):
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, 0) + c
            if out[k] == 0:
                del out[k]
        return out

    def shift(a, k):
        return {e + k: c for e, c in a.items()}

    b = [{0: Fraction(1)}]
    for n in range(1, n_max + 1):
        acc: dict[int, Fraction] = {}
        acc = add(acc, shift(b[n - 1], p ** (n - 1)))
        if n >= 2:
            acc = add(acc, b[n - 2])
        b.append({e: c / p for e, c in acc.items()})
    return b


def specialize(poly: dict[int, Fraction], u) -> Fraction:
    """Evaluate a one-variable polynomial at an exact value."""
    return sum((c * Fraction(u) ** e for e, c in poly.items()), Fraction(0))


def log_from_coeffs(b: list, p: int, M: int, prec: int | None = None) -> PSeries:
    """``sum_n b_n x^(p^n)`` truncated below degree ``M``."""
    m = b[0].m if isinstance(b[0], WittElem) else 1
    if prec is None:
        prec = max(x.abs_precision for x in b)
    coeffs = {}
    for n, c in enumerate(b):
        if p**n >= M:
            break
        coeffs[p**n] = c
    ring = CoeffRing(p, m, prec)
    return PSeries.from_dict(ring, 1, M, coeffs)


# -- formal group laws -------------------------------------------------------


@dataclass(frozen=True)
class FormalGroupLaw:
    """A bivariate series ``F(x, y)`` with optional logarithm."""

    F: PSeries
    log: PSeries | None = None
    h: int | float | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def ring(self) -> CoeffRing:
        return self.F.ring

    @property
    def p(self) -> int:
        return self.F.ring.p

    @property
    def order(self) -> int:
        return self.F.order

    def precision(self):
        return self.F.precision()

    def _vars(self, n):
        return [PSeries.variable(self.ring, n, self.order, i) for i in range(n)]

    def check_unit(self) -> bool:
        x, = self._vars(1)
        zero = PSeries.zero(self.ring, 1, self.order)
        return self.F.compose(x, zero).agrees(x) and self.F.compose(zero, x).agrees(x)

    def check_commutative(self) -> bool:
        x, y = self._vars(2)
        return self.F.compose(y, x).agrees(self.F)

    def check_associative(self) -> bool:
        """Full check of F(F(x,y),z) = F(x,F(y,z)) in three variables."""
        x, y, z = self._vars(3)
        Fxy = self.F.compose(x, y)
        Fyz = self.F.compose(y, z)
        return self.F.compose(Fxy, z).agrees(self.F.compose(x, Fyz))

    def check_associative_sampled(self, trials: int = 20, seed: int = 0) -> bool:
        """Associativity at random points of p*Z_p (cheap surrogate)."""
        rng = random.Random(seed)
        p = self.p
        prec = min(self.F.precision(), self.order)
        for _ in range(trials):
            a, b, c = (Padic.from_rational(p, p * rng.randrange(p**prec), prec) for _ in range(3))
            lhs = evaluate(self.F, [evaluate(self.F, [a, b]), c])
            rhs = evaluate(self.F, [a, evaluate(self.F, [b, c])])
            if not lhs.agrees(rhs):
                return False
        return True

    def check_log(self) -> bool:
        """log(F(x, y)) = log(x) + log(y)."""
        if self.log is None:
            raise ValueError("law carries no logarithm")
        x, y = self._vars(2)
        lhs = self.log.compose(self.F)
        rhs = self.log.compose(x) + self.log.compose(y)
        return lhs.agrees(rhs)

    def axioms(self, associativity: bool = False) -> dict[str, bool]:
        out = {"unit": self.check_unit(), "commutative": self.check_commutative()}
        if self.log is not None:
            out["log_homomorphism"] = self.check_log()
        if associativity:
            out["associative"] = self.check_associative()
        return out

    def to_json(self) -> dict:
        return {
            "type": "fgl",
            "h": None if self.h is None else (None if self.h == INF else self.h),
            "F": self.F.to_json(),
            "log": None if self.log is None else self.log.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "FormalGroupLaw":
        log = d.get("log")
        return cls(PSeries.from_json(d["F"]), None if log is None else PSeries.from_json(log), d.get("h"))


def evaluate(f: PSeries, point: list) -> Padic | WittElem:
    """Evaluate ``f`` at elements of positive valuation (error O(x^order) ignored)."""
    total = None
    for e, c in f.coeffs().items():
        term = c
        for x, k in zip(point, e):
            if k:
                term = term * x**k
        total = term if total is None else total + term
    if total is None:
        return f.ring.element(0, (0,) * f.ring.m, f.precision())
    return total


def additive_law(p: int, M: int, prec: int = 20) -> FormalGroupLaw:
    ring = CoeffRing(p, 1, prec)
    x = PSeries.variable(ring, 1, M)
    return fgl_from_log(x)


def multiplicative_law(p: int, M: int, prec: int = 20) -> FormalGroupLaw:
    """``x + y + xy`` (no logarithm attached)."""
    ring = CoeffRing(p, 1, prec)
    F = PSeries.from_dict(ring, 2, M, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    return FormalGroupLaw(F, None, 1)


def fgl_from_log(log: PSeries, M: int | None = None, h=None) -> FormalGroupLaw:
    """The law ``exp(log x + log y)``; ``log`` must be ``x + O(x^2)``."""
    if log.nvars != 1:
        raise ValueError("logarithm must be univariate")
    if M is not None:
        log = log.truncate(M)
    M = log.order
    if (0,) in log.terms or not log.coeff((1,)).agrees(log.coeff((1,)).one_like()):
        raise ValueError("logarithm must start with x")
    exp = log.reverse()
    x = PSeries.variable(log.ring, 2, M, 0)
    y = PSeries.variable(log.ring, 2, M, 1)
    S = log.compose(x) + log.compose(y)
    return FormalGroupLaw(exp.compose(S), log, h)


def p_series(F: FormalGroupLaw, method: str = "auto", n: int | None = None) -> PSeries:
    """``[n](x)`` (default ``n = p``) by iterated addition or via the logarithm."""
    n = F.p if n is None else n
    if method == "auto":
        method = "log" if F.log is not None else "add"
    ring = F.ring
    x = PSeries.variable(ring, 1, F.order)
    if method == "log":
        if F.log is None:
            raise ValueError("law carries no logarithm")
        return F.log.reverse().compose(F.log.scale(n))
    if method != "add":
        raise ValueError(f"unknown method {method!r}")
    acc = PSeries.zero(ring, 1, F.order)
    for _ in range(n):
        acc = F.F.compose(acc, x)
    return acc


def height_mod_p(F: FormalGroupLaw, h_max: int | None = None, series: PSeries | None = None):
    """Height of the reduction mod p, or ``inf`` if [p] vanishes mod p.

    With ``h_max`` given the truncation order must exceed ``p**h_max``;
    a vanishing reduction then means the height exceeds ``h_max`` and
    ``inf`` is returned.
    """
    p = F.p
    if h_max is not None and F.order <= p**h_max:
        raise PrecisionError(f"truncation order {F.order} cannot see degree {p}^{h_max}")
    ps = p_series(F) if series is None else series
    for d in range(1, ps.order):
        c = ps.coeff((d,))
        if c.abs_precision < 1:
            raise PrecisionError(f"coefficient of x^{d} not known mod p")
        if c.valuation < 0:
            raise DomainError(f"[p]-series has a non-integral coefficient at degree {d}")
        if c.valuation == 0:
            k = round(math.log(d, p))
            if p**k != d:
                raise DomainError(f"first unit coefficient at degree {d}, not a power of {p}")
            return k
    return INF


def deformation_law(h: int, p: int, u=(), M: int = 20, prec: int = 10,
                    max_prec: int = 400) -> FormalGroupLaw:
    """Law of the deformation at ``u`` with every coefficient known mod p^prec.

    The working precision is raised until the propagated precision of F
    reaches ``prec``.
    """
    params = u if isinstance(u, DeformationParams) else DeformationParams(h, tuple(u))
    n_max = 0
    while p ** (n_max + 1) < M:
        n_max += 1
    work = prec + n_max + 2
    while True:
        b = gh_universal_coeffs(h, params, n_max, p, work)
        log = log_from_coeffs(b, p, M, prec=work)
        law = fgl_from_log(log, h=h)
        got = law.F.precision()
        if got >= prec:
            F = law.F.with_precision(prec)
            return FormalGroupLaw(F, law.log, h, {"working_precision": work})
        if work >= max_prec:
            raise PrecisionError(f"precision {got} < {prec} at working precision {work}", achieved=got)
        work = min(max_prec, work + max(prec - got, 4) + work // 2)
