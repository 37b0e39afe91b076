"""Truncated multivariate power series over Q_p or W(F_{p^m})[1/p].

A :class:`PSeries` keeps every coefficient as ``p**(-shift) * vec`` with one
shift shared by the whole series and ``vec`` an integer coordinate vector.
Precision is tracked per total degree: ``prec[d]`` is the absolute
precision of every coefficient of degree ``d``.  A degree may be exact
(``prec[d] == inf``) when its coefficients lie in Z[1/p]; this keeps
substitutions like ``x -> x^p`` or ``(x, y) -> (y, x)`` lossless.

Per-degree precision matters for logarithms and exponentials, whose
coefficients have valuations falling without bound: a single precision for
the whole series would be dragged down by the worst degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational

from ..errors import PrimeMismatch
from . import _kernel
from .padic import Padic, vp_int
from .witt import WittElem, teichmuller_modulus

INF = math.inf


@dataclass(frozen=True)
class CoeffRing:
    """Coefficient ring Q_p (m = 1) or W(F_{p^m})[1/p].

    ``prec`` is the working precision used whenever an exact quantity has to
    be materialized p-adically (a rational with denominator prime to p, an
    exact coefficient read out as an element, a reduction modulo the
    Teichmüller modulus).
    """

    p: int
    m: int = 1
    prec: int = 20

    def element(self, v, vec, N):
        """The element ``p**v * vec`` at absolute precision ``N``."""
        if N == INF:
            N = max(self.prec, v + 1) if any(vec) else self.prec
        if self.m == 1:
            return Padic._normalize(self.p, v, vec[0], N) if vec[0] else Padic.zero(self.p, N)
        return WittElem._normalize(self.p, self.m, v, tuple(vec), N)

    def coerce(self, x):
        """Split ``x`` into ``(v, vec, N)`` with value ``p**v * vec``."""
        p, m = self.p, self.m
        if isinstance(x, Padic):
            if x.prime != p:
                raise PrimeMismatch(f"primes differ: {p} vs {x.prime}")
            if x.is_zero():
                return 0, (0,) * m, x.abs_precision
            return x.valuation, (x.unit,) + (0,) * (m - 1), x.abs_precision
        if isinstance(x, WittElem):
            if (x.prime, x.m) != (p, m):
                raise PrimeMismatch(f"coefficient ring mismatch: W(F_{x.prime}^{x.m}) vs ({p}, {m})")
            if x.is_zero():
                return 0, (0,) * m, x.abs_precision
            return x.valuation, x.unit, x.abs_precision
        if isinstance(x, (int, Rational)):
            x = Fraction(x)
            den = x.denominator
            k = 0
            while den % p == 0:
                den //= p
                k += 1
            if den == 1:
                return -k, (x.numerator,) + (0,) * (m - 1), INF
            return self.coerce(Padic.from_rational(p, x, self.prec))
        raise TypeError(f"cannot use {type(x).__name__} as a coefficient")

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "prec": self.prec}

    @classmethod
    def from_json(cls, d) -> "CoeffRing":
        return cls(d["p"], d.get("m", 1), d.get("prec", 20))


def _vp_vec(vec, p):
    return min(vp_int(c, p) for c in vec)


def _minplus(Na, vb, Nb, va, order):
    """Per-degree precision of a product from precisions and valuations."""
    out = [INF] * order
    fa = [(i, n) for i, n in enumerate(Na) if n != INF]
    fb = [(j, n) for j, n in enumerate(Nb) if n != INF]
    for i, n in fa:
        for j in range(order - i):
            w = n + vb[j]
            if w < out[i + j]:
                out[i + j] = w
    for j, n in fb:
        for i in range(order - j):
            w = n + va[i]
            if w < out[i + j]:
                out[i + j] = w
    return out


class PSeries:
    """Immutable truncated power series in ``nvars`` variables.

    Monomials of total degree ``>= order`` are discarded.  Build instances
    with :meth:`from_dict`, :meth:`variable`, :meth:`constant` or
    :meth:`zero` rather than the raw constructor.
    """

    __slots__ = ("ring", "nvars", "order", "prec", "shift", "terms", "_vals")

    def __init__(self, ring, nvars, order, prec, shift, terms):
        self.ring = ring
        self.nvars = nvars
        self.order = order
        self.prec = prec
        self.shift = shift
        self.terms = terms
        self._vals = None

    # -- canonical form ---------------------------------------------------

    @classmethod
    def _make(cls, ring, nvars, order, prec, shift, terms) -> "PSeries":
        p = ring.p
        prec = tuple(prec[:order])
        if len(prec) < order:
            raise ValueError("precision vector shorter than the truncation order")
        out = {}
        mods: dict[int, int] = {}
        for e, vec in terms.items():
            d = sum(e)
            if d >= order:
                continue
            N = prec[d]
            if N != INF:
                k = N + shift
                if k <= 0:
                    continue
                mod = mods.get(k)
                if mod is None:
                    mod = mods[k] = p**k
                vec = [c % mod for c in vec]
            if any(vec):
                out[e] = tuple(vec)
        if not out:
            shift = 0
        elif all(c % p == 0 for vec in out.values() for c in vec):
            g = reduce(math.gcd, (c for vec in out.values() for c in vec))
            k = vp_int(g, p)
            d = p**k
            out = {e: tuple(c // d for c in vec) for e, vec in out.items()}
            shift -= k
        return cls(ring, nvars, order, prec, shift, out)

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_dict(cls, ring: CoeffRing, nvars: int, order: int, coeffs, prec=None) -> "PSeries":
        """Series from ``{exponent: value}``.

        Exponents are tuples (plain ints are accepted when ``nvars == 1``).
        Values may be ints, Fractions, :class:`Padic` or :class:`WittElem`.
        ``prec`` caps the precision, either one int for every degree or a
        per-degree list; by default each degree is as precise as its
        coefficients and degrees without coefficients are exactly zero.
        """
        if nvars < 1:
            raise ValueError("a series needs at least one variable")
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        if prec is None:
            precs = [INF] * order
        elif isinstance(prec, (int, float)):
            precs = [prec] * order
        else:
            precs = list(prec)
        parts = []
        for e, x in coeffs.items():
            if isinstance(e, int):
                e = (e,)
            e = tuple(e)
            if len(e) != nvars or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            d = sum(e)
            if d >= order:
                continue
            v, vec, N = ring.coerce(x)
            precs[d] = min(precs[d], N)
            if any(vec):
                parts.append((e, v, vec))
        shift = max((-v for _, v, _ in parts), default=0)
        terms: dict = {}
        for e, v, vec in parts:
            f = ring.p ** (v + shift)
            old = terms.get(e, (0,) * ring.m)
            terms[e] = tuple(a + f * c for a, c in zip(old, vec))
        return cls._make(ring, nvars, order, precs, shift, terms)

    @classmethod
    def zero(cls, ring: CoeffRing, nvars: int, order: int, prec=INF) -> "PSeries":
        return cls._make(ring, nvars, order, [prec] * order, 0, {})

    @classmethod
    def constant(cls, ring: CoeffRing, nvars: int, order: int, c) -> "PSeries":
        return cls.from_dict(ring, nvars, order, {(0,) * nvars: c})

    @classmethod
    def variable(cls, ring: CoeffRing, nvars: int, order: int, i: int = 0) -> "PSeries":
        e = [0] * nvars
        e[i] = 1
        return cls.from_dict(ring, nvars, order, {tuple(e): 1})

    @classmethod
    def monomial(cls, ring: CoeffRing, exponent, order: int, c=1) -> "PSeries":
        exponent = tuple(exponent)
        return cls.from_dict(ring, len(exponent), order, {exponent: c})

    def _like(self, prec, shift, terms, order=None, nvars=None) -> "PSeries":
        return PSeries._make(self.ring, self.nvars if nvars is None else nvars,
                             self.order if order is None else order, prec, shift, terms)

    # -- inspection -------------------------------------------------------

    @property
    def p(self) -> int:
        return self.ring.p

    def valuations(self) -> tuple:
        """Per-degree minimum coefficient valuation (the precision if none)."""
        if self._vals is None:
            vals = list(self.prec)
            seen = [False] * self.order
            p = self.ring.p
            for e, vec in self.terms.items():
                d = sum(e)
                v = _vp_vec(vec, p) - self.shift
                if not seen[d] or v < vals[d]:
                    vals[d] = v
                    seen[d] = True
            self._vals = tuple(vals)
        return self._vals

    def valuation(self) -> int | float:
        return min((v for v, N in zip(self.valuations(), self.prec) if v < N), default=INF)

    def precision(self, d: int | None = None):
        """Absolute precision of degree ``d``, or the minimum over all degrees."""
        if d is None:
            return min(self.prec)
        return self.prec[d]

    def is_exact(self) -> bool:
        return all(N == INF for N in self.prec)

    def __len__(self):
        return len(self.terms)

    def _key(self, e):
        if isinstance(e, int):
            e = (e,)
        return tuple(e)

    def coeff(self, e):
        """Coefficient of the monomial ``e`` as a Padic / WittElem."""
        e = self._key(e)
        d = sum(e)
        if d >= self.order:
            raise IndexError(f"degree {d} is beyond the truncation order {self.order}")
        vec = self.terms.get(e, (0,) * self.ring.m)
        return self.ring.element(-self.shift, vec, self.prec[d])

    def exact_coeff(self, e) -> Fraction:
        """Stored representative of a Q_p coefficient as a rational."""
        if self.ring.m != 1:
            raise ValueError("exact_coeff is only available over Q_p")
        vec = self.terms.get(self._key(e), (0,))
        return Fraction(vec[0]) / Fraction(self.ring.p) ** self.shift

    def coeffs(self) -> dict:
        """All stored coefficients as elements, keyed by exponent."""
        return {e: self.coeff(e) for e in sorted(self.terms, key=lambda e: (sum(e), e))}

    def is_integral(self) -> bool:
        """True when every stored coefficient has nonnegative valuation."""
        return all(v >= 0 for v in self.valuations())

    def __repr__(self):
        shown = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e))[:6]:
            shown.append(f"{self.coeff(e)!r}*x^{list(e)}")
        more = " + ..." if len(self.terms) > 6 else ""
        return (f"PSeries(p={self.ring.p}, m={self.ring.m}, nvars={self.nvars}, "
                f"order={self.order}: {' + '.join(shown) or '0'}{more})")

    def __eq__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        return ((self.ring.p, self.ring.m, self.nvars, self.order, self.prec, self.shift, self.terms)
                == (other.ring.p, other.ring.m, other.nvars, other.order, other.prec,
                    other.shift, other.terms))

    __hash__ = None

    # -- precision --------------------------------------------------------

    def truncate(self, order: int) -> "PSeries":
        order = min(order, self.order)
        return self._like(self.prec, self.shift, self.terms, order=order)

    def with_precision(self, prec) -> "PSeries":
        """Cap the precision at ``prec`` (an int or a per-degree list)."""
        caps = [prec] * self.order if isinstance(prec, (int, float)) else list(prec)
        return self._like([min(a, b) for a, b in zip(self.prec, caps)], self.shift, self.terms)

    def agrees(self, other: "PSeries", prec=None) -> bool:
        """Equality through the common truncation order at the common precision.

        With ``prec`` given, the difference must also have valuation >= prec.
        """
        d = self - other
        if prec is None:
            return not d.terms
        return d.valuation() >= prec

    # -- ring structure ---------------------------------------------------

    def _check(self, other: "PSeries"):
        if (other.ring.p, other.ring.m) != (self.ring.p, self.ring.m):
            raise PrimeMismatch("series over different coefficient rings")
        if other.nvars != self.nvars:
            raise ValueError(f"variable counts differ: {self.nvars} vs {other.nvars}")

    def _coerce(self, other):
        if isinstance(other, PSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Rational, Padic, WittElem)):
            return PSeries.constant(self.ring, self.nvars, self.order, other)
        return NotImplemented

    def _add(self, other: "PSeries", sign: int) -> "PSeries":
        order = min(self.order, other.order)
        prec = [min(a, b) for a, b in zip(self.prec[:order], other.prec[:order])]
        s = max(self.shift, other.shift)
        fa, fb = self.ring.p ** (s - self.shift), sign * self.ring.p ** (s - other.shift)
        terms = {e: [c * fa for c in v] for e, v in self.terms.items() if sum(e) < order}
        zero = [0] * self.ring.m
        for e, v in other.terms.items():
            if sum(e) < order:
                acc = terms.get(e, zero)
                terms[e] = [a + fb * c for a, c in zip(acc, v)]
        return self._like(prec, s, terms, order=order)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._add(self, -1)

    def __neg__(self):
        return self._like(self.prec, self.shift, {e: [-c for c in v] for e, v in self.terms.items()})

    def _reduce_wide(self, raw, prec, shift):
        """Fold length-(2m-1) product vectors back to length m."""
        m = self.ring.m
        wide = {sum(e) for e, v in raw.items() if any(v[m:])}
        if not wide:
            return {e: v[:m] for e, v in raw.items()}, prec
        prec = list(prec)
        for d in wide:
            if prec[d] == INF:
                prec[d] = self.ring.prec
        K = max(prec[d] + shift for d in wide)
        if K <= 0:
            return {e: v[:m] for e, v in raw.items() if sum(e) not in wide}, prec
        T = teichmuller_modulus(self.ring.p, m, K)
        out = {}
        for e, v in raw.items():
            v = list(v)
            for k in range(2 * m - 2, m - 1, -1):
                c = v[k]
                if c:
                    for j in range(m):
                        v[k - m + j] -= c * T[j]
            out[e] = v[:m]
        return out, prec

    def __mul__(self, other):
        if isinstance(other, (int, Rational, Padic, WittElem)):
            return self.scale(other)
        if not isinstance(other, PSeries):
            return NotImplemented
        self._check(other)
        order = min(self.order, other.order)
        prec = _minplus(self.prec[:order], other.valuations()[:order],
                        other.prec[:order], self.valuations()[:order], order)
        A = {e: v for e, v in self.terms.items() if sum(e) < order}
        B = {e: v for e, v in other.terms.items() if sum(e) < order}
        raw = _kernel.multiply(A, B, self.nvars, order, self.ring.m)
        shift = self.shift + other.shift
        if self.ring.m > 1:
            raw, prec = self._reduce_wide(raw, prec, shift)
        return self._like(prec, shift, raw, order=order)

    __rmul__ = __mul__

    def scale(self, c) -> "PSeries":
        """Multiply every coefficient by the scalar ``c``."""
        v, vec, Nc = self.ring.coerce(c)
        vc = v + _vp_vec(vec, self.ring.p) if any(vec) else INF
        vals = self.valuations()
        prec = [min(N + vc, Nc + val) for N, val in zip(self.prec, vals)]
        m = self.ring.m
        if m == 1:
            terms = {e: (x[0] * vec[0],) for e, x in self.terms.items()}
            return self._like(prec, self.shift - v, terms)
        raw = {}
        for e, x in self.terms.items():
            acc = [0] * (2 * m - 1)
            for i, a in enumerate(x):
                if a:
                    for j, b in enumerate(vec):
                        acc[i + j] += a * b
            raw[e] = acc
        raw, prec = self._reduce_wide(raw, prec, self.shift - v)
        return self._like(prec, self.shift - v, raw)

    def scale_p(self, k: int) -> "PSeries":
        """Multiply by ``p**k``; always legal since p is invertible."""
        return self._like([N + k for N in self.prec], self.shift - k, self.terms)

    def __truediv__(self, c):
        if isinstance(c, (int, Rational)):
            if c == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(Fraction(1) / Fraction(c))
        if isinstance(c, (Padic, WittElem)):
            return self.scale(c.inverse())
        return NotImplemented

    def __pow__(self, e: int) -> "PSeries":
        if e < 0:
            return self.inverse() ** (-e)
        result = PSeries.constant(self.ring, self.nvars, self.order, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- substitution -----------------------------------------------------

    def _raw_coeff_series(self, nvars, order, vec, N) -> "PSeries":
        # constant series p**(-shift) * vec known to precision N
        prec = [N] + [INF] * (order - 1)
        terms = {(0,) * nvars: vec} if vec is not None else {}
        return PSeries._make(self.ring, nvars, order, prec, self.shift, terms)

    def compose(self, *gs: "PSeries") -> "PSeries":
        """Substitute ``gs[i]`` for the i-th variable.

        Every ``g`` must have zero constant term; the constant term is taken
        to be exactly zero.  The result is truncated at the smallest order
        involved.
        """
        if len(gs) == 1 and isinstance(gs[0], (list, tuple)):
            gs = tuple(gs[0])
        if len(gs) != self.nvars:
            raise ValueError(f"need {self.nvars} substitutions, got {len(gs)}")
        n = gs[0].nvars
        for g in gs:
            if (g.ring.p, g.ring.m) != (self.ring.p, self.ring.m):
                raise PrimeMismatch("series over different coefficient rings")
            if g.nvars != n:
                raise ValueError("substituted series must share their variables")
            if (0,) * n in g.terms:
                raise ValueError("substituted series has a nonzero constant term")
        order = min([self.order] + [g.order for g in gs])
        gs = tuple(g._like((INF,) + g.prec[1:], g.shift, g.terms) for g in gs)
        if all(g.is_exact() and len(g.terms) == 1 for g in gs):
            return self._substitute_monomials(gs, n, order)
        return self._compose(gs, n, order)

    def _substitute_monomials(self, gs, n, order) -> "PSeries":
        p, m = self.ring.p, self.ring.m
        mons = []
        for g in gs:
            (a, vec), = g.terms.items()
            if m > 1 and any(vec[1:]):
                return self._compose(gs, n, order)
            mons.append((a, sum(a), vec[0], g.shift, vp_int(vec[0], p) - g.shift))
        k = self.nvars
        # precision: every exponent of f (stored or not) lands somewhere
        prec = [INF] * order
        if not self.is_exact():
            exps = ((i,) for i in range(self.order)) if k == 1 else \
                _kernel.monomials_below(k, self.order)
            for e in exps:
                N = self.prec[sum(e)]
                if N == INF:
                    continue
                D = sum(x * mon[1] for x, mon in zip(e, mons))
                if D < order:
                    w = N + sum(x * mon[4] for x, mon in zip(e, mons))
                    if w < prec[D]:
                        prec[D] = w
        items = []
        for e, vec in self.terms.items():
            D = sum(x * mon[1] for x, mon in zip(e, mons))
            if D >= order:
                continue
            c, s = 1, self.shift
            for x, mon in zip(e, mons):
                if x:
                    c *= mon[2] ** x
                    s += x * mon[3]
            new_e = tuple(sum(x * mon[0][j] for x, mon in zip(e, mons)) for j in range(n))
            items.append((new_e, c, s, vec))
        S = max((s for _, _, s, _ in items), default=0)
        terms: dict = {}
        for new_e, c, s, vec in items:
            f = c * p ** (S - s)
            acc = terms.get(new_e, [0] * m)
            terms[new_e] = [a + f * x for a, x in zip(acc, vec)]
        return PSeries._make(self.ring, n, order, prec, S, terms)

    def _compose(self, gs, n, order) -> "PSeries":
        if self.nvars == 1:
            coefs = {}
            for i in range(min(self.order, order)):
                vec = self.terms.get((i,))
                if vec is not None or self.prec[i] != INF:
                    coefs[i] = self._raw_coeff_series(n, order, vec, self.prec[i])
            return _horner(coefs, gs[0], self.ring, n, order)
        groups: dict[int, dict] = {}
        for e, vec in self.terms.items():
            groups.setdefault(e[0], {})[e[1:]] = vec
        coefs = {}
        for i in range(min(self.order, order)):
            sub_prec = self.prec[i:]
            if i not in groups and all(N == INF for N in sub_prec):
                continue
            inner = PSeries(self.ring, self.nvars - 1, self.order - i, tuple(sub_prec),
                            self.shift, groups.get(i, {}))
            inner = PSeries._make(self.ring, inner.nvars, inner.order, inner.prec,
                                  inner.shift, inner.terms)
            coefs[i] = inner._compose(gs[1:], n, order)
        return _horner(coefs, gs[0], self.ring, n, order)

    def _mul_x(self, k: int) -> "PSeries":
        # univariate: multiply by x^k, raising the order by k
        prec = (INF,) * k + self.prec
        return self._like(prec, self.shift, {(e[0] + k,): v for e, v in self.terms.items()},
                          order=self.order + k)

    def _div_x(self, k: int) -> "PSeries":
        # univariate: drop degrees < k and divide by x^k
        terms = {(e[0] - k,): v for e, v in self.terms.items() if e[0] >= k}
        return self._like(self.prec[k:], self.shift, terms, order=self.order - k)

    def _scalar_inverse(self, e, c):
        # exact when the coefficient is +-p^k exactly, else p-adic
        vec = self.terms.get(e)
        if self.prec[sum(e)] == INF and vec[0] in (1, -1) and not any(vec[1:]):
            return Fraction(vec[0]) * Fraction(self.ring.p) ** self.shift
        return c.inverse()

    def derivative(self, i: int = 0) -> "PSeries":
        """Partial derivative in the i-th variable (order drops by one)."""
        if self.order < 2:
            raise ValueError("order too small to differentiate")
        terms = {}
        for e, vec in self.terms.items():
            k = e[i]
            if k:
                new_e = e[:i] + (k - 1,) + e[i + 1:]
                terms[new_e] = [k * c for c in vec]
        return self._like(self.prec[1:], self.shift, terms, order=self.order - 1)

    def inverse(self) -> "PSeries":
        """Multiplicative inverse; the constant term must be a unit."""
        c = self.coeff((0,) * self.nvars)
        if c.is_zero():
            raise ZeroDivisionError("constant term is not invertible")
        y = PSeries.constant(self.ring, self.nvars, self.order, self._scalar_inverse((0,) * self.nvars, c))
        for _ in range(max(1, math.ceil(math.log2(self.order))) + 1):
            y = y * (2 - self * y)
        return y

    def reverse(self) -> "PSeries":
        """Compositional inverse of a univariate ``c*x + O(x^2)`` with c a unit."""
        if self.nvars != 1:
            raise ValueError("reversion needs a univariate series")
        if (0,) in self.terms:
            raise ValueError("series to reverse has a nonzero constant term")
        M = self.order
        if M < 2:
            raise ValueError("order too small to reverse")
        c = self.coeff((1,))
        if c.is_zero() or c.valuation != 0:
            raise ValueError("linear coefficient is not a unit")
        x = PSeries.variable(self.ring, 1, M)
        g = x.scale(self._scalar_inverse((1,), c))
        if M == 2:
            return g
        df = self.derivative()
        for _ in range(max(1, math.ceil(math.log2(M)))):
            resid = (self.compose(g) - x)._div_x(2)
            step = resid * df.compose(g).truncate(M - 2).inverse()
            g = g - step._mul_x(2)
        return g

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            d = sum(e)
            if self.prec[d] == INF:
                if self.ring.m == 1:
                    value = {"type": "rational", "value": str(self.exact_coeff(e))}
                else:
                    value = {"type": "rational_vector",
                             "value": [str(Fraction(c) / Fraction(self.ring.p) ** self.shift)
                                       for c in self.terms[e]]}
            else:
                value = self.coeff(e).to_json()
            terms.append([list(e), value])
        return {
            "type": "pseries",
            "ring": self.ring.to_json(),
            "nvars": self.nvars,
            "order": self.order,
            "prec": [None if N == INF else N for N in self.prec],
            "terms": terms,
        }

    @classmethod
    def from_json(cls, d: dict) -> "PSeries":
        if d.get("type") != "pseries":
            raise ValueError(f"not a pseries record: {d.get('type')}")
        ring = CoeffRing.from_json(d["ring"])
        prec = [INF if N is None else N for N in d["prec"]]
        coeffs = {}
        for e, value in d["terms"]:
            kind = value.get("type")
            if kind == "rational":
                coeffs[tuple(e)] = Fraction(value["value"])
            elif kind == "rational_vector":
                parts = [Fraction(s) for s in value["value"]]
                k = max(vp_int(x.denominator, ring.p) for x in parts)
                scaled = tuple(int(x * ring.p**k) for x in parts)
                coeffs[tuple(e)] = WittElem(ring.p, ring.m, -k, scaled, INF) if any(scaled) else 0
            elif kind == "padic":
                coeffs[tuple(e)] = Padic.from_json(value)
            elif kind == "witt":
                coeffs[tuple(e)] = WittElem.from_json(value)
            else:
                raise ValueError(f"unknown coefficient type {kind!r}")
        return cls.from_dict(ring, d["nvars"], d["order"], coeffs, prec=prec)


def _horner(coefs: dict, g: PSeries, ring: CoeffRing, n: int, order: int) -> PSeries:
    """Evaluate sum_i coefs[i] * g**i with gaps handled by cached powers."""
    if not coefs:
        return PSeries.zero(ring, n, order)
    powers = {1: g}

    def gpow(k):
        if k not in powers:
            half = gpow(k // 2)
            sq = half * half
            powers[k] = sq * g if k % 2 else sq
        return powers[k]

    idx = sorted(coefs, reverse=True)
    res = coefs[idx[0]]
    prev = idx[0]
    for i in idx[1:]:
        res = res * gpow(prev - i) + coefs[i]
        prev = i
    if prev:
        res = res * gpow(prev)
    return res
