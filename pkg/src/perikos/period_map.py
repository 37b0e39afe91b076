"""Evaluation of the crystalline period map on Lubin–Tate space.

A deformation point ``u = (u_1, ..., u_{h-1})`` in the open unit polydisc
is sent to the projective point whose coordinates are

    phi_i(u) = lim_{n -> oo} p^n * b_{nh+i}(u),        i = 0, ..., h-1,

with ``b_n`` the coefficients of the p-typical logarithm of the deformed
law.  The limit is taken adaptively: levels ``n`` are computed until three
consecutive normalized coordinate vectors agree to the requested precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConvergenceError, DomainError, PrecisionError
from .formal_groups import DeformationParams, _valuation, _value_from_json, _value_json, gh_universal_coeffs
from .parith.padic import Padic
from .parith.witt import WittElem

INF = math.inf


@dataclass(frozen=True)
class RigidPoint:
    """A point of the rigid generic fiber given by exactly representable ``u``."""

    h: int
    p: int
    u: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        if self.h < 1:
            raise ValueError("height must be >= 1")
        if len(self.u) != self.h - 1:
            raise ValueError(f"height {self.h} needs {self.h - 1} parameters, got {len(self.u)}")

    @property
    def valuations(self) -> tuple:
        """Exact valuations of the parameters (``inf`` for zero)."""
        return tuple(v if v == INF else Fraction(v) for v in (_valuation(x, self.p) for x in self.u))

    @property
    def params(self) -> DeformationParams:
        return DeformationParams(self.h, self.u)

    def to_json(self) -> dict:
        return {"h": self.h, "p": self.p, "u": [_value_json(x) for x in self.u]}

    @classmethod
    def from_json(cls, d: dict) -> "RigidPoint":
        return cls(d["h"], d["p"], tuple(_value_from_json(x) for x in d["u"]))


def radius_check(x: RigidPoint) -> bool:
    """True iff every parameter lies strictly inside the unit disc."""
    return all(v > 0 for v in x.valuations)


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A point of P^{h-1} in canonical form.

    The pivot is the first coordinate of minimal valuation and is exactly 1;
    the other coordinates carry their own precision.
    """

    h: int
    coords: tuple
    pivot: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def canonical(cls, coords, meta=None) -> "ProjPoint":
        coords = tuple(coords)
        if not coords:
            raise ValueError("a projective point needs at least one coordinate")
        if all(c.is_zero() for c in coords):
            raise PrecisionError("all coordinates vanish at the working precision")
        vmin = min(c.valuation for c in coords)
        pivot = next(i for i, c in enumerate(coords) if c.valuation == vmin)
        inv = coords[pivot].inverse()
        out = []
        for i, c in enumerate(coords):
            if i == pivot:
                out.append(c.one_like(max(c.abs_precision - 2 * c.valuation, 1)))
            else:
                out.append(c * inv)
        return cls(len(coords), tuple(out), pivot, dict(meta or {}))

    @property
    def precision(self) -> int:
        return min(c.abs_precision for i, c in enumerate(self.coords) if i != self.pivot) \
            if self.h > 1 else INF

    def agrees(self, other: "ProjPoint", prec: int | None = None) -> bool:
        if not isinstance(other, ProjPoint) or other.h != self.h or other.pivot != self.pivot:
            return False
        return all(a.agrees(b, prec) for i, (a, b) in enumerate(zip(self.coords, other.coords))
                   if i != self.pivot)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.agrees(other)

    __hash__ = None

    def with_precision(self, N: int) -> "ProjPoint":
        coords = tuple(c if i == self.pivot else c.with_precision(N) for i, c in enumerate(self.coords))
        return ProjPoint(self.h, coords, self.pivot, self.meta)

    def values(self) -> list:
        """Coordinates as exact rationals (Q_p) or coordinate vectors."""
        out = []
        for c in self.coords:
            if isinstance(c, Padic):
                out.append(c.to_fraction())
            else:
                out.append(c)
        return out

    def __repr__(self):
        return f"ProjPoint([{' : '.join(repr(c) for c in self.coords)}], pivot={self.pivot})"

    def to_json(self) -> dict:
        return {"h": self.h, "pivot": self.pivot, "coords": [c.to_json() for c in self.coords]}

    @classmethod
    def from_json(cls, d: dict) -> "ProjPoint":
        coords = tuple(_value_from_json(c) for c in d["coords"])
        return cls(d["h"], coords, d["pivot"])


def _one(x: RigidPoint, prec: int):
    ms = [c.m for c in x.u if isinstance(c, WittElem)]
    m = max(ms, default=1)
    return Padic.one(x.p, prec) if m == 1 else WittElem.one(x.p, m, prec)


def level_point(b: list, p: int, h: int, n: int) -> ProjPoint:
    """Normalized ``[p^n b_{nh} : ... : p^n b_{nh+h-1}]``."""
    return ProjPoint.canonical([b[n * h + i].scale_p(n) for i in range(h)])


def period_point(x: RigidPoint, target_prec: int, max_level: int = 64,
                 max_work: int | None = None, level: int | None = None) -> ProjPoint:
    """Canonical period point of ``x`` with coordinates known mod p^target_prec.

    ``level`` forces a fixed truncation level instead of the adaptive search
    (useful for stability checks).  Raises :class:`DomainError` outside the
    polydisc, :class:`ConvergenceError` if the levels do not settle by
    ``max_level`` and :class:`PrecisionError` when the input precision is
    exhausted.
    """
    if not radius_check(x):
        raise DomainError("deformation parameters must have positive valuation")
    h = x.h
    if h == 1:
        return ProjPoint(1, (_one(x, target_prec),), 0, {"n_max": 0, "working_precision": target_prec})
    if max_work is None:
        max_work = 16 * target_prec + 64
    work = target_prec + h + 4
    while True:
        try:
            return _evaluate(x, target_prec, work, max_level, level)
        except PrecisionError as exc:
            if isinstance(exc, ConvergenceError) or work >= max_work:
                raise
            if any(isinstance(c, (Padic, WittElem)) for c in x.u) and \
                    min(c.abs_precision for c in x.u if isinstance(c, (Padic, WittElem))) < work:
                raise PrecisionError(f"input precision exhausted: {exc}", achieved=exc.achieved) from exc
            work = min(max_work, 2 * work)


def _evaluate(x, target, work, max_level, level):
    h, p = x.h, x.p
    top = max_level if level is None else level
    b = gh_universal_coeffs(h, x.params, (top + 1) * h - 1, p, work)
    if level is not None:
        P = level_point(b, p, h, level)
        if P.precision < target:
            raise PrecisionError(f"level {level} known only to precision {P.precision}",
                                 achieved=P.precision)
        P = P.with_precision(target)
        P.meta.update({"n_max": (level + 1) * h - 1, "working_precision": work})
        return P
    history: list[ProjPoint] = []
    agreement = -INF
    for n in range(1, top + 1):
        P = level_point(b, p, h, n)
        history.append(P)
        if len(history) >= 3:
            a, c = history[-3], history[-2]
            same = P.agrees(c, target) and P.agrees(a, target)
            if same:
                if P.precision < target:
                    raise PrecisionError(f"coordinates known only to precision {P.precision}",
                                         achieved=P.precision)
                P = P.with_precision(target)
                P.meta.update({"n_max": (n + 1) * h - 1, "working_precision": work, "level": n})
                return P
            agreement = max(agreement, _agreement(P, c))
    raise ConvergenceError(f"no agreement to precision {target} by level {top}",
                           achieved=agreement)


def _agreement(P: ProjPoint, Q: ProjPoint):
    if P.pivot != Q.pivot:
        return -INF
    vals = [(a - b).valuation for i, (a, b) in enumerate(zip(P.coords, Q.coords)) if i != P.pivot]
    return min(vals, default=INF)


def hodge_line(x: RigidPoint, prec: int, **kwargs) -> ProjPoint:
    """The Hodge line inside the constant Dieudonné space: same point as
    :func:`period_point`, named for its geometric meaning."""
    return period_point(x, prec, **kwargs)
