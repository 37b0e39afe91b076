"""Independent reference computations used by the test-suite.

Nothing here calls the code under test except for plain arithmetic on
p-adic and Witt elements.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from perikos import linalg
from perikos.parith import WittElem


def brute_newton_slopes(A, p, m):
    """Slopes of phi with matrix A: Leibniz char-poly of the m-fold product,
    then the polygon by minimizing over all chords.

    Returns the sorted list of slopes, or None if a coefficient that could
    matter is not resolved.
    """
    L = A
    for k in range(1, m):
        L = linalg.mat_mul(L, linalg.mat_frobenius(A, k))
    coeffs = _permutation_charpoly(L)
    n = len(coeffs) - 1
    pts = {i: Fraction(c.valuation) for i, c in enumerate(coeffs) if not c.is_zero()}
    if 0 not in pts or n not in pts:
        return None

    def poly(x):
        best = None
        for i, j in itertools.combinations_with_replacement(sorted(pts), 2):
            if i <= x <= j:
                y = pts[i] if i == j else pts[i] + (pts[j] - pts[i]) * Fraction(x - i, j - i)
                best = y if best is None else min(best, y)
        return best

    for i, c in enumerate(coeffs):
        if c.is_zero() and c.abs_precision < poly(i):
            return None
    values = [poly(x) for x in range(n + 1)]
    # constant term first: eigenvalue valuations are the negated successive slopes
    return sorted(Fraction(values[x] - values[x + 1]) / m for x in range(n))


def _permutation_charpoly(L):
    """det(x I - L) by summing over permutations; constant term first."""
    n = len(L)
    big = 4 * max(x.abs_precision for row in L for x in row) + 64   # effectively exact
    zero = L[0][0].zero_like(big)
    one = L[0][0].one_like(big)
    total = [zero] * (n + 1)
    for perm in itertools.permutations(range(n)):
        sign = -1 if sum(a > b for a, b in itertools.combinations(perm, 2)) % 2 else 1
        poly = [one]
        for i in range(n):
            factor = [-L[i][perm[i]], one if perm[i] == i else zero]
            out = [zero] * (len(poly) + 1)
            for a, x in enumerate(poly):
                for b, y in enumerate(factor):
                    out[a + b] = out[a + b] + x * y
            poly = out
        total = [t + c if sign > 0 else t - c for t, c in zip(total, poly)]
    return total


def lattice_polygons(h, d):
    """All concave-up lattice paths (0,0) -> (h,d) with slopes in [0, 1].

    Brute force over subsets of lattice points; each admissible vertex set
    gives one slope datum.
    """
    inner = [(x, y) for x in range(1, h) for y in range(0, d + 1)]
    found = set()
    for r in range(len(inner) + 1):
        for subset in itertools.combinations(inner, r):
            xs = [pt[0] for pt in subset]
            if len(set(xs)) != len(xs):
                continue
            verts = [(0, 0)] + sorted(subset) + [(h, d)]
            slopes = [Fraction(y2 - y1, x2 - x1) for (x1, y1), (x2, y2) in zip(verts, verts[1:])]
            if any(not (0 <= s <= 1) for s in slopes):
                continue
            if any(a >= b for a, b in zip(slopes, slopes[1:])):
                continue
            found.add(tuple((s, x2 - x1) for s, ((x1, _), (x2, _)) in zip(slopes, zip(verts, verts[1:]))))
    return found


def random_witt(rng: random.Random, p, m, prec, max_val=2):
    v = rng.randrange(0, max_val + 1)
    coords = [rng.randrange(p**prec) for _ in range(m)]
    if all(c % p == 0 for c in coords):
        coords[0] += 1
    return WittElem.from_coords(p, m, coords, prec).scale_p(v)
