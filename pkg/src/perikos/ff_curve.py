"""Discrete geometry of the Fargues–Fontaine curve.

Rank-one points of Spa(W(O_{C^flat})) are recorded by the exact logarithmic
radii ``log_p = -log_p |p(x)|`` and ``log_w = -log_p |w(x)|`` (``w`` the
pseudo-uniformizer of O_{C^flat}); ``inf`` means the function vanishes at the
point.  Frobenius fixes ``|p|`` and raises ``|w|`` to the p-th power, so it
multiplies ``kappa = log_w / log_p`` by p.

Vector bundles are formal sums of stable bundles O(d/r); modifications are
tracked only through rank and degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError
from .isocrystals import SlopeData, kottwitz_enumerate
from .period_map import ProjPoint, RigidPoint, period_point

INF = math.inf

X_K = "x_k"
Y_POINT = "Y-point"
P_AXIS = "p-axis"
W_AXIS = "w-axis"


def _radius(v):
    if v == INF or v is None:
        return INF
    v = Fraction(v)
    if v <= 0:
        raise ValueError(f"logarithmic radius must be positive, got {v}")
    return v


@dataclass(frozen=True)
class AdicPoint:
    prime: int
    log_p: Fraction | float
    log_w: Fraction | float

    def __post_init__(self):
        object.__setattr__(self, "log_p", _radius(self.log_p))
        object.__setattr__(self, "log_w", _radius(self.log_w))

    @property
    def tag(self) -> str:
        if self.log_p == INF and self.log_w == INF:
            return X_K
        if self.log_p == INF:
            return P_AXIS
        if self.log_w == INF:
            return W_AXIS
        return Y_POINT

    def to_json(self) -> dict:
        def enc(v):
            return None if v == INF else str(v)
        return {"p": self.prime, "log_p": enc(self.log_p), "log_w": enc(self.log_w), "tag": self.tag}

    @classmethod
    def from_json(cls, d: dict) -> "AdicPoint":
        def dec(v):
            return INF if v is None else Fraction(v)
        return cls(d["p"], dec(d["log_p"]), dec(d["log_w"]))


def untilt_point(p: int) -> AdicPoint:
    """The point x_C where |p| = |w|."""
    return AdicPoint(p, 1, 1)


def kappa(x: AdicPoint):
    """``log_w / log_p``: 0 on the p-axis, ``inf`` on the w-axis."""
    if x.tag == X_K:
        raise DomainError("kappa is undefined at the non-analytic point x_k")
    if x.log_w == INF:
        return INF
    if x.log_p == INF:
        return Fraction(0)
    return x.log_w / x.log_p


def frobenius_move(x: AdicPoint, n: int) -> AdicPoint:
    """Apply phi^n: log_w scales by p^n, log_p is fixed."""
    if x.log_w == INF:
        return x
    return AdicPoint(x.prime, x.log_p, x.log_w * Fraction(x.prime) ** n)


def _floor_log(r: Fraction, p: int) -> int:
    """Largest k with p^k <= r, for rational r > 0."""
    k = 0
    if r >= 1:
        while Fraction(p) ** (k + 1) <= r:
            k += 1
    else:
        while Fraction(p) ** k > r:
            k -= 1
    return k


def fundamental_domain(x: AdicPoint) -> tuple[AdicPoint, int]:
    """Unique ``(phi^n x, n)`` with kappa in [1, p)."""
    if x.tag != Y_POINT:
        raise DomainError(f"fundamental domain is defined on Y only, got a {x.tag}")
    n = -_floor_log(kappa(x), x.prime)
    return frobenius_move(x, n), n


# -- bundles -----------------------------------------------------------------


@dataclass(frozen=True)
class BundleFF:
    """Direct sum of O(lambda)^mult; summands sorted by slope descending."""

    summands: tuple

    def __post_init__(self):
        merged: dict[Fraction, int] = {}
        for s, k in self.summands:
            s = Fraction(s)
            if not isinstance(k, int) or k <= 0:
                raise ValueError(f"multiplicity must be a positive integer, got {k!r}")
            merged[s] = merged.get(s, 0) + k
        if not merged:
            raise ValueError("a bundle needs at least one summand")
        object.__setattr__(self, "summands", tuple(sorted(merged.items(), reverse=True)))

    @classmethod
    def O(cls, slope, mult: int = 1) -> "BundleFF":
        return cls(((Fraction(slope), mult),))

    @classmethod
    def trivial(cls, n: int) -> "BundleFF":
        return cls.O(0, n)

    @property
    def rank(self) -> int:
        return sum(k * s.denominator for s, k in self.summands)

    @property
    def degree(self) -> int:
        return sum(k * s.numerator for s, k in self.summands)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    def rank_deg_slope(self) -> tuple[int, int, Fraction]:
        return self.rank, self.degree, self.slope

    def __add__(self, other: "BundleFF") -> "BundleFF":
        return BundleFF(self.summands + other.summands)

    def dual(self) -> "BundleFF":
        return BundleFF(tuple((-s, k) for s, k in self.summands))

    def tensor(self, other: "BundleFF") -> "BundleFF":
        out = []
        for s, a in self.summands:
            for t, b in other.summands:
                u = s + t
                total_rank = a * b * s.denominator * t.denominator
                out.append((u, total_rank // u.denominator))
        return BundleFF(tuple(out))

    __mul__ = tensor

    def hn_polygon(self) -> list[tuple[int, int]]:
        pts = [(0, 0)]
        for s, k in self.summands:
            x, y = pts[-1]
            pts.append((x + k * s.denominator, y + k * s.numerator))
        return pts

    def is_semistable(self) -> bool:
        return len(self.summands) == 1

    def to_json(self) -> list:
        return [[s.numerator, s.denominator, k] for s, k in self.summands]

    @classmethod
    def from_json(cls, data) -> "BundleFF":
        return cls(tuple((Fraction(n, d), k) for n, d, k in data))

    def __str__(self):
        parts = []
        for s, k in self.summands:
            parts.append(f"O({s})" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts)


def bundle_rank_deg_slope(E: BundleFF) -> tuple[int, int, Fraction]:
    return E.rank_deg_slope()


def bundle_dual(E: BundleFF) -> BundleFF:
    return E.dual()


def bundle_tensor(E: BundleFF, G: BundleFF) -> BundleFF:
    return E.tensor(G)


def hn_polygon(E: BundleFF) -> list[tuple[int, int]]:
    return E.hn_polygon()


def bundle_from_isocrystal(s: SlopeData, sign: int = 1) -> BundleFF:
    """Slope part lambda of total rank k goes to O(sign * lambda)^(k / r_lambda).

    ``sign = 1`` keeps slopes; ``sign = -1`` is the dual convention.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return BundleFF(tuple((sign * lam, k // lam.denominator) for lam, k in s.pairs))


# -- modifications -----------------------------------------------------------


class RankMismatch(DomainError):
    """The two bundles of a modification have different ranks."""


class DegreeMismatch(DomainError):
    """deg(E) - deg(F) differs from the modification length."""


@dataclass(frozen=True)
class ModificationTriple:
    """``E`` and ``F`` isomorphic away from ``locus`` with ``deg E - deg F = length``."""

    E: BundleFF
    F: BundleFF
    length: int = 1
    locus: str = "inf"

    def source(self) -> BundleFF:
        return self.E

    def target(self) -> BundleFF:
        """Second leg of the Hecke correspondence: forget down to F."""
        return self.F

    def to_json(self) -> dict:
        return {"E": self.E.to_json(), "F": self.F.to_json(), "length": self.length,
                "locus": self.locus}

    @classmethod
    def from_json(cls, d: dict) -> "ModificationTriple":
        return cls(BundleFF.from_json(d["E"]), BundleFF.from_json(d["F"]),
                   d.get("length", 1), d.get("locus", "inf"))


def hecke_validate(t: ModificationTriple) -> ModificationTriple:
    if t.length < 0:
        raise DegreeMismatch(f"modification length must be nonnegative, got {t.length}")
    if t.E.rank != t.F.rank:
        raise RankMismatch(f"rank(E) = {t.E.rank} but rank(F) = {t.F.rank}")
    if t.E.degree - t.F.degree != t.length:
        raise DegreeMismatch(f"deg(E) - deg(F) = {t.E.degree - t.F.degree} but length = {t.length}")
    return t


def pdiv_bundle_classes(h: int) -> list[BundleFF]:
    """E(G) for the one-dimensional height-h isogeny classes."""
    return [bundle_from_isocrystal(k.slope_data) for k in kottwitz_enumerate(h, 1, 0, 1)]


@dataclass(frozen=True)
class FiberDescriptor:
    base_class: BundleFF
    fiber_dim: int

    def to_json(self) -> dict:
        return {"base_class": self.base_class.to_json(), "fiber": f"P^{self.fiber_dim}",
                "fiber_dim": self.fiber_dim}


def perdom_fiber(E: BundleFF) -> FiberDescriptor:
    """Fiber of the period domain over E: projective space of dimension rank - 1."""
    return FiberDescriptor(E, E.rank - 1)


@dataclass(frozen=True)
class GlobalPoint:
    triple: ModificationTriple
    fiber: FiberDescriptor
    point: ProjPoint
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def base_class(self) -> BundleFF:
        return self.triple.E

    def commutes(self, x: RigidPoint | None = None, prec: int | None = None) -> bool:
        """Fiber descriptor is perdom_fiber(E); the point lies in that fiber
        (and equals the local period point when ``x`` is supplied)."""
        ok = self.fiber == perdom_fiber(self.triple.E) and self.point.h == self.fiber.fiber_dim + 1
        if x is not None:
            ok = ok and self.point == period_point(x, prec if prec is not None else self.point.precision)
        return ok

    def to_json(self) -> dict:
        return {"triple": self.triple.to_json(), "base_class": self.base_class.to_json(),
                "fiber": self.fiber.to_json(), "point": self.point.to_json()}


def global_point(x: RigidPoint, prec: int) -> GlobalPoint:
    """Hecke triple, base class and fiber point attached to a deformation point."""
    h = x.h
    E = bundle_from_isocrystal(SlopeData(((Fraction(1, h), h),)))
    triple = hecke_validate(ModificationTriple(E, BundleFF.trivial(h), 1))
    point = period_point(x, prec)
    g = GlobalPoint(triple, perdom_fiber(E), point, dict(point.meta))
    if not g.commutes():
        raise AssertionError("global point failed its own commutativity contract")
    return g
