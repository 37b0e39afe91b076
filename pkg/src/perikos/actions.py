"""Group actions on Lubin–Tate tower points.

J is modelled as the unit group of the maximal order O_D of the central
division algebra over Q_p of invariant 1/h:

    O_D = W(F_{p^h})<Pi>,   Pi^h = p,   Pi * a = sigma(a) * Pi.

A tower point carries a quasi-isogeny proxy ``iota`` (matrix over
W(F_{p^h})[1/p]) and a rational level structure ``alpha`` (matrix over Q_p).
J acts on ``iota`` from the left, GL_h(Q_p) on ``alpha`` from the right, and
the Weil group by a coefficient Frobenius twist followed by a power of the
Dieudonné Frobenius.  Inertia is carried as opaque labels only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .errors import DomainError
from .ff_curve import AdicPoint, frobenius_move
from .isocrystals import dieudonne_of_onedim
from .parith.padic import Padic
from .parith.witt import WittElem
from .period_map import ProjPoint, RigidPoint


def _witt(x, p, h, prec):
    if isinstance(x, WittElem):
        if (x.prime, x.m) != (p, h):
            raise ValueError(f"coefficient must lie in W(F_{p}^{h})")
        return x
    if isinstance(x, Padic):
        return WittElem.from_padic(x, h)
    return WittElem.from_rational(p, h, x, prec)


@dataclass(frozen=True)
class ODElem:
    """``sum_i coeffs[i] * Pi^i`` with coefficients in W(F_{p^h})."""

    h: int
    p: int
    coeffs: tuple

    @classmethod
    def make(cls, h: int, p: int, coeffs, prec: int = 20) -> "ODElem":
        coeffs = list(coeffs) + [0] * (h - len(coeffs))
        if len(coeffs) != h:
            raise ValueError(f"need {h} coefficients")
        return cls(h, p, tuple(_witt(c, p, h, prec) for c in coeffs))

    @classmethod
    def one(cls, h: int, p: int, prec: int = 20) -> "ODElem":
        return cls.make(h, p, [1], prec)

    @classmethod
    def pi(cls, h: int, p: int, prec: int = 20) -> "ODElem":
        return cls.make(h, p, [0, 1] if h > 1 else [p], prec)

    @classmethod
    def scalar(cls, h: int, p: int, a: WittElem | int) -> "ODElem":
        prec = a.abs_precision if isinstance(a, WittElem) else 20
        return cls.make(h, p, [a], prec)

    @property
    def precision(self) -> int:
        return min(c.abs_precision for c in self.coeffs)

    def _check(self, other: "ODElem"):
        if (other.h, other.p) != (self.h, self.p):
            raise ValueError(f"O_D parameters differ: (h, p) = {(self.h, self.p)} vs {(other.h, other.p)}")

    def __mul__(self, other: "ODElem") -> "ODElem":
        self._check(other)
        h, p = self.h, self.p
        out = [None] * h
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                term = a * b.frobenius(i)
                k = i + j
                if k >= h:
                    term = term * p
                    k -= h
                out[k] = term if out[k] is None else out[k] + term
        return ODElem(h, p, tuple(out))

    def __add__(self, other: "ODElem") -> "ODElem":
        self._check(other)
        return ODElem(self.h, self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ODElem") -> "ODElem":
        self._check(other)
        return ODElem(self.h, self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def agrees(self, other: "ODElem", prec: int | None = None) -> bool:
        self._check(other)
        return all(a.agrees(b, prec) for a, b in zip(self.coeffs, other.coeffs))

    def is_integral(self) -> bool:
        return all(c.is_zero() or c.valuation >= 0 for c in self.coeffs)

    def is_unit(self) -> bool:
        """In O_D^x: integral with unit reduced norm (equivalently a_0 a unit)."""
        return self.is_integral() and linalg.det(matrix_of(self)).valuation == 0

    def to_json(self) -> dict:
        return {"h": self.h, "p": self.p, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, d: dict) -> "ODElem":
        return cls(d["h"], d["p"], tuple(WittElem.from_json(c) for c in d["coeffs"]))


def od_mul(a: ODElem, b: ODElem) -> ODElem:
    return a * b


def matrix_of(s: ODElem):
    """Left multiplication by ``s`` on D viewed as a right W-module with basis Pi^j.

    ``s * Pi^j = sum_i Pi^{(i+j) mod h} * sigma^{-(i+j)}(a_i) * (p if i+j >= h)``,
    so column j holds those coefficients and matrix_of(s t) = matrix_of(s) matrix_of(t).
    """
    h, p = s.h, s.p
    cols = [[None] * h for _ in range(h)]
    for j in range(h):
        for i, a in enumerate(s.coeffs):
            k = i + j
            entry = a.frobenius(-k)
            if k >= h:
                entry = entry * p
            cols[j][k % h] = entry
    return tuple(tuple(cols[j][i] for j in range(h)) for i in range(h))


# -- tower points ------------------------------------------------------------


@dataclass(frozen=True)
class WeilElem:
    """Frobenius power ``n`` together with symbolic inertia labels."""

    n: int = 0
    inertia_tag: tuple = ()

    def __mul__(self, other: "WeilElem") -> "WeilElem":
        return WeilElem(self.n + other.n, self.inertia_tag + other.inertia_tag)

    def inverse(self) -> "WeilElem":
        return WeilElem(-self.n, tuple(f"{t}^-1" for t in reversed(self.inertia_tag)))

    def to_json(self) -> dict:
        return {"n": self.n, "inertia_tag": list(self.inertia_tag)}


@dataclass(frozen=True)
class TowerPoint:
    """``(G, iota, alpha)`` with G a deformation point or an opaque label."""

    h: int
    p: int
    deformation: RigidPoint | str
    iota: tuple
    alpha: tuple
    adic: AdicPoint | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def make(cls, h, p, deformation, iota, alpha, adic=None, prec: int = 20) -> "TowerPoint":
        iota = tuple(tuple(_witt(x, p, h, prec) for x in row) for row in iota)
        alpha = tuple(tuple(x if isinstance(x, Padic) else Padic.from_rational(p, x, prec) for x in row)
                      for row in alpha)
        for M, name in ((iota, "iota"), (alpha, "alpha")):
            if len(M) != h or any(len(r) != h for r in M):
                raise ValueError(f"{name} must be {h}x{h}")
            if linalg.det(M).is_zero():
                raise DomainError(f"{name} is not invertible at the working precision")
        return cls(h, p, deformation, iota, alpha, adic)

    @classmethod
    def base(cls, h: int, p: int, deformation="G0", prec: int = 20) -> "TowerPoint":
        eye = [[1 if i == j else 0 for j in range(h)] for i in range(h)]
        return cls.make(h, p, deformation, eye, eye, None, prec)

    def agrees(self, other: "TowerPoint", prec: int | None = None) -> bool:
        return (self.h == other.h and self.deformation == other.deformation
                and self.adic == other.adic
                and linalg.mat_agrees(self.iota, other.iota, prec)
                and linalg.mat_agrees(self.alpha, other.alpha, prec))

    def is_integral_level(self) -> bool:
        """alpha and alpha^-1 both p-integral."""
        inv = linalg.mat_inv(self.alpha)
        return all(x.is_zero() or x.valuation >= 0 for M in (self.alpha, inv) for row in M for x in row)

    def to_json(self) -> dict:
        d = self.deformation
        return {
            "h": self.h, "p": self.p,
            "deformation": d.to_json() if isinstance(d, RigidPoint) else d,
            "iota": [[x.to_json() for x in row] for row in self.iota],
            "alpha": [[x.to_json() for x in row] for row in self.alpha],
            "adic": None if self.adic is None else self.adic.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "TowerPoint":
        def_ = d["deformation"]
        if isinstance(def_, dict):
            def_ = RigidPoint.from_json(def_)
        iota = tuple(tuple(WittElem.from_json(x) for x in row) for row in d["iota"])
        alpha = tuple(tuple(Padic.from_json(x) for x in row) for row in d["alpha"])
        adic = d.get("adic")
        return cls.make(d["h"], d["p"], def_, iota, alpha,
                        None if adic is None else AdicPoint.from_json(adic))


def act_J(s: ODElem, x: TowerPoint) -> TowerPoint:
    """``s . (G, iota, alpha) = (G, s o iota, alpha)``: iota becomes matrix_of(s) iota."""
    if (s.h, s.p) != (x.h, x.p):
        raise ValueError("O_D element and tower point have different (h, p)")
    if not s.is_unit():
        raise DomainError("J acts through units of O_D only")
    return TowerPoint(x.h, x.p, x.deformation, linalg.mat_mul(matrix_of(s), x.iota), x.alpha, x.adic)


def act_GL(g, x: TowerPoint) -> TowerPoint:
    """``g . (G, iota, alpha) = (G, iota, alpha o g)``."""
    g = tuple(tuple(e if isinstance(e, Padic) else Padic.from_rational(x.p, e, x.alpha[0][0].abs_precision)
                    for e in row) for row in g)
    if len(g) != x.h or any(len(r) != x.h for r in g):
        raise ValueError(f"g must be {x.h}x{x.h}")
    if linalg.det(g).is_zero():
        raise DomainError("g is singular at the working precision")
    return TowerPoint(x.h, x.p, x.deformation, x.iota, linalg.mat_mul(x.alpha, g), x.adic)


def tower_transition(x: TowerPoint) -> TowerPoint:
    """The map (G, iota, alpha) -> (G, iota, alpha o p) between tower levels."""
    p = x.p
    g = [[p if i == j else 0 for j in range(x.h)] for i in range(x.h)]
    return act_GL(g, x)


def frobenius_matrix_power(h: int, p: int, n: int, prec: int):
    """Matrix of phi^n for the connected one-dimensional Dieudonné model."""
    A = dieudonne_of_onedim(h, p, prec).phi
    if n < 0:
        A = linalg.mat_inv(A)
        n = -n
    out = linalg.identity(h, A[0][0])
    for k in range(n):
        out = linalg.mat_mul(out, linalg.mat_frobenius(A, k))
    return out


def _twist_deformation(d, n):
    if not isinstance(d, RigidPoint):
        return d
    u = tuple(c.frobenius(n) if isinstance(c, WittElem) else c for c in d.u)
    return RigidPoint(d.h, d.p, u)


def act_Weil(w: WeilElem, x: TowerPoint) -> TowerPoint:
    """``w . (G, iota, alpha) = (G^w, iota^w o Frob^n, alpha^w)``.

    The twist ``(-)^w`` is sigma^n on Witt coefficients; inertia labels do
    not act.  Adic data moves by phi^n.
    """
    n = w.n
    prec = linalg.mat_precision(x.iota)
    iota = linalg.mat_frobenius(x.iota, n)
    if n:
        iota = linalg.mat_mul(iota, frobenius_matrix_power(x.h, x.p, n, prec + abs(n)))
    adic = None if x.adic is None else frobenius_move(x.adic, n)
    return TowerPoint(x.h, x.p, _twist_deformation(x.deformation, n), iota, x.alpha, adic)


def act_J_on_period(s: ODElem, y: ProjPoint) -> ProjPoint:
    """Projective action of matrix_of(s) on a point of P^{h-1}."""
    if s.h != y.h:
        raise ValueError("rank mismatch between O_D element and projective point")
    if not s.is_unit():
        raise DomainError("J acts through units of O_D only")
    coords = [_witt(c, s.p, s.h, c.abs_precision) for c in y.coords]
    M = matrix_of(s)
    new = []
    for row in M:
        acc = row[0] * coords[0]
        for a, c in zip(row[1:], coords[1:]):
            acc = acc + a * c
        new.append(acc)
    return ProjPoint.canonical(new)


def commute_check(s: ODElem, g, x: TowerPoint) -> bool:
    """act_J and act_GL commute on x."""
    return act_J(s, act_GL(g, x)).agrees(act_GL(g, act_J(s, x)))


# -- random generators (seeded) ----------------------------------------------


def random_witt(rng: random.Random, p: int, m: int, prec: int, unit: bool = False) -> WittElem:
    while True:
        coords = [rng.randrange(p**prec) for _ in range(m)]
        w = WittElem.from_coords(p, m, coords, prec)
        if not unit or w.is_unit():
            return w


def random_odelem(rng: random.Random, h: int, p: int, prec: int, unit: bool = True) -> ODElem:
    coeffs = [random_witt(rng, p, h, prec, unit=(unit and i == 0)) for i in range(h)]
    return ODElem(h, p, tuple(coeffs))


def random_gl(rng: random.Random, h: int, p: int, prec: int):
    while True:
        g = tuple(tuple(Padic.from_rational(p, rng.randrange(-p**3, p**3) * p ** rng.randrange(-1, 2),
                                            prec) for _ in range(h)) for _ in range(h))
        if not linalg.det(g).is_zero():
            return g


def random_tower_point(rng: random.Random, h: int, p: int, prec: int) -> TowerPoint:
    while True:
        iota = [[random_witt(rng, p, h, prec) for _ in range(h)] for _ in range(h)]
        alpha = [[Padic.from_rational(p, rng.randrange(p**prec), prec) for _ in range(h)] for _ in range(h)]
        try:
            u = tuple(p * rng.randrange(1, p**4) for _ in range(h - 1))
            return TowerPoint.make(h, p, RigidPoint(h, p, u), iota, alpha,
                                   AdicPoint(p, rng.randint(1, 9), rng.randint(1, 9)), prec)
        except DomainError:
            continue
