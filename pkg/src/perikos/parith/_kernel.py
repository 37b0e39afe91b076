"""Exact product kernels for truncated multivariate polynomials.

Terms are dicts mapping exponent tuples to coefficient vectors of length
``m`` (the coordinates of an element of Z[x]/(T) before reduction).  The
product returned has vectors of length ``2m - 1``; reduction modulo the
Teichmüller modulus happens in the caller.

Large dense products go through Kronecker substitution: every exponent
vector and coordinate index is packed into one slot of a big integer and
the two integers are multiplied with GMP.  Coefficients must be
nonnegative (callers reduce modulo p^N first).
"""

from __future__ import annotations

from functools import lru_cache

import gmpy2

# below this many coordinate products the naive double loop wins
KRONECKER_THRESHOLD = 4096


@lru_cache(maxsize=64)
def monomials_below(nvars: int, order: int) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of total degree < order, graded then lexicographic."""
    out = []

    def rec(prefix, remaining, k):
        if k == 1:
            for e in range(remaining):
                out.append(prefix + (e,))
            return
        for e in range(remaining):
            rec(prefix + (e,), remaining - e, k - 1)

    if nvars == 0:
        return ((),)
    rec((), order, nvars)
    return tuple(sorted(out, key=lambda e: (sum(e), e)))


def _naive(A, B, order, m):
    out: dict = {}
    w = 2 * m - 1
    for ea, va in A.items():
        da = sum(ea)
        for eb, vb in B.items():
            if da + sum(eb) >= order:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            acc = out.get(e)
            if acc is None:
                acc = out[e] = [0] * w
            if m == 1:
                acc[0] += va[0] * vb[0]
            else:
                for i, a in enumerate(va):
                    if a:
                        for j, b in enumerate(vb):
                            acc[i + j] += a * b
    return out


def _pack(terms, nvars, base, w, width, nslots, offset_of):
    buf = bytearray(nslots * width)
    for e, vec in terms.items():
        idx = offset_of(e)
        for j, c in enumerate(vec):
            if c:
                pos = (idx + j) * width
                buf[pos:pos + width] = c.to_bytes(width, "little")
    return gmpy2.mpz(int.from_bytes(buf, "little"))


def _kronecker(A, B, nvars, order, m):
    base = 2 * order - 1
    w = 2 * m - 1
    maxa = max(max(v) for v in A.values())
    maxb = max(max(v) for v in B.values())
    bound = maxa * maxb * min(len(A), len(B)) * m
    width = (bound.bit_length() + 8) // 8 + 1
    strides = [w * base**i for i in range(nvars)]

    def offset_of(e):
        return sum(x * s for x, s in zip(e, strides))

    nslots = w * base**nvars
    a = _pack(A, nvars, base, w, width, nslots, offset_of)
    b = _pack(B, nvars, base, w, width, nslots, offset_of)
    prod = int(a * b)
    raw = prod.to_bytes(max((prod.bit_length() + 7) // 8, 1), "little")
    out = {}
    for e in monomials_below(nvars, order):
        idx = offset_of(e) * width
        if idx >= len(raw):
            continue
        vec = [int.from_bytes(raw[idx + j * width: idx + (j + 1) * width], "little")
               for j in range(w)]
        if any(vec):
            out[e] = vec
    return out


def multiply(A, B, nvars: int, order: int, m: int):
    """Exact product of two term dicts, dropping total degree >= order."""
    if not A or not B:
        return {}
    work = len(A) * len(B) * m * m
    if work <= KRONECKER_THRESHOLD:
        return _naive(A, B, order, m)
    negative = any(c < 0 for v in A.values() for c in v) or any(c < 0 for v in B.values() for c in v)
    dense = len(monomials_below(nvars, order)) if nvars <= 3 else None
    if negative or dense is None or dense > 200_000:
        return _naive(A, B, order, m)
    return _kronecker(A, B, nvars, order, m)
