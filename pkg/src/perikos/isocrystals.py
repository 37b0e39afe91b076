"""Isocrystals over W(F_{p^m})[1/p]: Newton polygons and Kottwitz sets.

An isocrystal is given by the matrix ``A`` of a sigma-semilinear bijection
``phi``.  Its m-th power is linear with matrix ``A sigma(A) ... sigma^{m-1}(A)``;
the slopes of ``phi`` are the valuations of the eigenvalues of that matrix
divided by ``m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import DomainError, PrecisionError
from .parith.padic import Padic
from .parith.witt import WittElem

INF = math.inf


# -- slope data --------------------------------------------------------------


@dataclass(frozen=True)
class SlopeData:
    """Canonical slope decomposition: ``((slope, multiplicity), ...)`` ascending.

    Slopes are Fractions in lowest terms, strictly increasing, and each
    multiplicity is divisible by its slope's denominator.
    """

    pairs: tuple

    def __post_init__(self):
        merged: dict[Fraction, int] = {}
        for s, k in self.pairs:
            s = Fraction(s)
            if not isinstance(k, int) or k <= 0:
                raise ValueError(f"multiplicity must be a positive integer, got {k!r}")
            merged[s] = merged.get(s, 0) + k
        pairs = tuple(sorted(merged.items()))
        for s, k in pairs:
            if k % s.denominator:
                raise ValueError(f"slope {s} needs multiplicity divisible by {s.denominator}, got {k}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_slopes(cls, slopes) -> "SlopeData":
        """From a list of slopes with repetition (one entry per dimension)."""
        counts: dict[Fraction, int] = {}
        for s in slopes:
            s = Fraction(s)
            counts[s] = counts.get(s, 0) + 1
        return cls(tuple(counts.items()))

    @property
    def rank(self) -> int:
        return sum(k for _, k in self.pairs)

    @property
    def degree(self) -> int:
        d = sum(s * k for s, k in self.pairs)
        assert d.denominator == 1
        return int(d)

    def multiplicity(self, slope) -> int:
        return dict(self.pairs).get(Fraction(slope), 0)

    def slopes(self) -> list[Fraction]:
        return [s for s, k in self.pairs for _ in range(k)]

    def vertices(self) -> list[tuple[int, Fraction]]:
        """Breakpoints of the polygon from (0, 0), slopes ascending."""
        pts = [(0, Fraction(0))]
        for s, k in self.pairs:
            x, y = pts[-1]
            pts.append((x + k, y + s * k))
        return pts

    def key(self):
        return tuple((s, k) for s, k in self.pairs)

    def to_json(self) -> list:
        return [[s.numerator, s.denominator, k] for s, k in self.pairs]

    @classmethod
    def from_json(cls, data) -> "SlopeData":
        pairs = []
        for item in data:
            if len(item) != 3:
                raise ValueError("slope entries are [numerator, denominator, multiplicity]")
            n, d, k = item
            pairs.append((Fraction(n, d), k))
        return cls(tuple(pairs))

    def __str__(self):
        return "{" + ", ".join(f"({s}, {k})" for s, k in self.pairs) + "}"


@dataclass(frozen=True)
class KottwitzClass:
    slope_data: SlopeData
    h: int

    def __post_init__(self):
        if self.slope_data.rank != self.h:
            raise ValueError("multiplicities must add up to h")

    @property
    def in_b_prime(self) -> bool:
        """All slopes in [0, 1]."""
        return all(0 <= s <= 1 for s, _ in self.slope_data.pairs)

    @property
    def degree(self) -> int:
        return self.slope_data.degree

    def to_json(self) -> dict:
        return {"h": self.h, "degree": self.degree, "slopes": self.slope_data.to_json(),
                "in_b_prime": self.in_b_prime}


# -- isocrystals -------------------------------------------------------------


def _as_witt(x, p, m, prec):
    if isinstance(x, WittElem):
        if (x.prime, x.m) != (p, m):
            raise ValueError("matrix entry over the wrong ring")
        return x
    if isinstance(x, Padic):
        return WittElem.from_padic(x, m)
    return WittElem.from_rational(p, m, x, prec)


@dataclass(frozen=True)
class Isocrystal:
    """``phi(e_j) = sum_i A[i][j] e_i`` extended sigma-semilinearly."""

    p: int
    m: int
    phi: tuple

    @classmethod
    def from_matrix(cls, p: int, m: int, rows, prec: int = 20) -> "Isocrystal":
        A = tuple(tuple(_as_witt(x, p, m, prec) for x in row) for row in rows)
        n = len(A)
        if n == 0 or any(len(r) != n for r in A):
            raise ValueError("phi matrix must be square and nonempty")
        X = cls(p, m, A)
        if linalg.det(A).is_zero():
            raise DomainError("phi matrix is not invertible at the stated precision")
        return X

    @property
    def n(self) -> int:
        return len(self.phi)

    @property
    def precision(self) -> int:
        return linalg.mat_precision(self.phi)

    def linearize(self):
        return linearize(self)

    def newton_polygon(self) -> SlopeData:
        return newton_polygon(self)

    def sigma_conjugate(self, U) -> "Isocrystal":
        """Matrix of phi in the basis given by the columns of U: U^-1 A sigma(U)."""
        A = linalg.mat_mul(linalg.mat_mul(linalg.mat_inv(U), self.phi), linalg.mat_frobenius(U))
        return Isocrystal(self.p, self.m, A)

    def direct_sum(self, other: "Isocrystal") -> "Isocrystal":
        if (other.p, other.m) != (self.p, self.m):
            raise ValueError("isocrystals over different rings")
        z = self.phi[0][0].zero_like()
        n, k = self.n, other.n
        rows = [tuple(r) + (z,) * k for r in self.phi]
        rows += [(z,) * n + tuple(r) for r in other.phi]
        return Isocrystal(self.p, self.m, tuple(rows))

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m,
                "phi": [[x.to_json() for x in row] for row in self.phi]}


def linearize(X: Isocrystal):
    """Matrix of the linear map phi^m: A sigma(A) ... sigma^{m-1}(A)."""
    out = X.phi
    for k in range(1, X.m):
        out = linalg.mat_mul(out, linalg.mat_frobenius(X.phi, k))
    return out


def lower_hull(points):
    """Lower convex hull of points sorted by x (monotone chain)."""
    hull: list = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _hull_value(hull, x):
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return y1 + Fraction(y2 - y1, x2 - x1) * (x - x1)
    raise ValueError("abscissa outside the hull")


def polygon_from_charpoly(coeffs, m: int = 1) -> SlopeData:
    """Eigenvalue valuations (divided by m) from char-poly coefficients, constant first."""
    n = len(coeffs) - 1
    known, unknown = [], []
    for i, c in enumerate(coeffs):
        if c.is_zero():
            unknown.append((i, c.abs_precision))
        else:
            known.append((i, Fraction(c.valuation)))
    if known[0][0] != 0:
        raise PrecisionError("constant term of the characteristic polynomial is not resolved")
    hull = lower_hull(known)
    for i, N in unknown:
        if 0 < i < n and N < _hull_value(hull, i):
            raise PrecisionError(f"valuation of coefficient {i} is not resolved (precision {N})")
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        mu = Fraction(y1 - y2, x2 - x1) / m
        slopes += [mu] * (x2 - x1)
    return SlopeData.from_slopes(slopes)


# Leibniz expansion tracks precision more sharply than Berkowitz (it only
# multiplies and adds entries) but costs n! terms
LEIBNIZ_MAX_N = 4


def _sharper(a, b):
    return a if a.abs_precision >= b.abs_precision else b


def sharp_charpoly(X: Isocrystal) -> list:
    """Char-poly of phi^m, each coefficient taken from the most precise method.

    The constant term also comes from ``det(phi^m) = prod_k sigma^k(det A)``.
    """
    L = linearize(X)
    coeffs = linalg.charpoly(L)
    if X.n <= LEIBNIZ_MAX_N:
        coeffs = [_sharper(a, b) for a, b in zip(coeffs, linalg.charpoly_leibniz(L))]
    d = linalg.det(X.phi)
    norm = d
    for k in range(1, X.m):
        norm = norm * d.frobenius(k)
    coeffs[0] = _sharper(coeffs[0], norm if X.n % 2 == 0 else -norm)
    return coeffs


def newton_polygon(X: Isocrystal) -> SlopeData:
    return polygon_from_charpoly(sharp_charpoly(X), X.m)


def slope_projection_rank(X: Isocrystal, r: int, s: int) -> int:
    """Rank of the part where phi^r = p^s, i.e. the multiplicity of slope s/r."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return newton_polygon(X).multiplicity(Fraction(s, r))


# -- Kottwitz sets -----------------------------------------------------------


def kottwitz_enumerate(h: int, d: int, lo=0, hi=1) -> list[KottwitzClass]:
    """All slope data of rank h and degree d with slopes in [lo, hi], sorted."""
    if h < 1:
        raise ValueError("h must be >= 1")
    lo, hi = Fraction(lo), Fraction(hi)
    out: list[tuple] = []

    def candidates(rank_left, deg_left, after):
        # slopes a/b in lowest terms, a/b > after, within [lo, hi]
        for b in range(1, rank_left + 1):
            a_min = math.floor(max(lo, after) * b)
            a_max = math.floor(hi * b)
            for a in range(a_min, a_max + 1):
                s = Fraction(a, b)
                if s.denominator != b or s < lo or s > hi:
                    continue
                if after is not None and s <= after:
                    continue
                yield s

    def rec(rank_left, deg_left, after, acc):
        if rank_left == 0:
            if deg_left == 0:
                out.append(tuple(acc))
            return
        bound = after if after is not None else lo - 1
        for s in candidates(rank_left, deg_left, bound):
            r = s.denominator
            for k in range(r, rank_left + 1, r):
                rem_rank = rank_left - k
                rem_deg = deg_left - s * k
                # later slopes are > s and <= hi
                if rem_rank == 0 and rem_deg != 0:
                    continue
                if rem_rank and not (s * rem_rank < rem_deg <= hi * rem_rank):
                    continue
                rec(rem_rank, rem_deg, s, acc + [(s, k)])

    rec(h, Fraction(d), None, [])
    out.sort()
    return [KottwitzClass(SlopeData(pairs), h) for pairs in out]


def block_companion(p: int, slopes: SlopeData, prec: int = 20) -> Isocrystal:
    """Block-diagonal model over Q_p: each slope s/r contributes blocks for T^r - p^s."""
    blocks = []
    for s, k in slopes.pairs:
        r = s.denominator
        for _ in range(k // r):
            blocks.append((r, s.numerator))
    n = slopes.rank
    rows = [[0] * n for _ in range(n)]
    off = 0
    for r, num in blocks:
        for i in range(r - 1):
            rows[off + i + 1][off + i] = 1
        rows[off][off + r - 1] = Fraction(p) ** num
        off += r
    work = prec + max((abs(num) for _, num in blocks), default=0)
    return Isocrystal.from_matrix(p, 1, rows, work)


def dieudonne_of_onedim(h: int, p: int, prec: int = 20) -> Isocrystal:
    """Connected one-dimensional height-h model over W(F_{p^h}):
    e_i -> e_{i+1} for i < h and e_h -> p e_1."""
    if h < 1:
        raise ValueError("h must be >= 1")
    rows = [[0] * h for _ in range(h)]
    for i in range(h - 1):
        rows[i + 1][i] = 1
    rows[0][h - 1] = p
    return Isocrystal.from_matrix(p, h, rows, prec)
