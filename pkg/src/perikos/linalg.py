"""Small dense matrices over Padic / WittElem entries.

Matrices are tuples of row tuples.  Everything here is division-free except
:func:`mat_inv`, so precision losses stay where the arithmetic puts them.
"""

from __future__ import annotations

from itertools import permutations

from .errors import DomainError


def shape(A) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int, like):
    one, zero = like.one_like(), like.zero_like()
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def mat_mul(A, B):
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise ValueError(f"shapes {n}x{k} and {k2}x{m} do not compose")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_add(A, B):
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(A, c):
    return tuple(tuple(a * c for a in row) for row in A)


def mat_frobenius(A, n: int = 1):
    """Entrywise Frobenius ``sigma^n``."""
    return tuple(tuple(a.frobenius(n) for a in row) for row in A)


def mat_map(A, f):
    return tuple(tuple(f(a) for a in row) for row in A)


def transpose(A):
    return tuple(zip(*A))


def mat_agrees(A, B, prec=None) -> bool:
    return shape(A) == shape(B) and all(
        a.agrees(b, prec) for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def mat_precision(A):
    return min(a.abs_precision for row in A for a in row)


def charpoly(A) -> list:
    """Coefficients of det(T*I - A), constant term first, by Berkowitz recursion."""
    n = len(A)
    if n == 0:
        raise ValueError("empty matrix")
    return list(reversed(_berkowitz(A)))


def _berkowitz(A) -> list:
    # highest-degree coefficient first; A = [[a, R], [C, B]]
    n = len(A)
    a = A[0][0]
    one = a.one_like()
    if n == 1:
        return [one, -a]
    R = [A[0][1:]]
    C = [(row[0],) for row in A[1:]]
    B = tuple(tuple(row[1:]) for row in A[1:])
    q = _berkowitz(B) + [a.zero_like()]  # q_0..q_{n-1}, padded with q_n = 0
    s = []
    v = C
    for _ in range(n - 1):
        s.append(mat_mul(R, v)[0][0])
        v = mat_mul(B, v)
    out = []
    for i in range(n + 1):
        c = q[i] if i < n else q[n - 1].zero_like()
        if i >= 1:
            c = c - a * q[i - 1]
        for j in range(i - 1):
            c = c - q[j] * s[i - 2 - j]
        out.append(c)
    return out


def det(A):
    n = len(A)
    c0 = charpoly(A)[0]
    return c0 if n % 2 == 0 else -c0


def charpoly_leibniz(A) -> list:
    """det(T*I - A) by the permutation expansion (slow; independent check)."""
    n = len(A)
    zero = A[0][0].zero_like()
    one = A[0][0].one_like()
    total = [zero] * (n + 1)
    for perm in permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if not seen[i]:
                j, length = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    length += 1
                if length % 2 == 0:
                    sign = -sign
        poly = [one]  # constant first
        for i in range(n):
            entry = [-A[i][perm[i]]] + ([one] if perm[i] == i else [])
            new = [zero] * (len(poly) + len(entry) - 1)
            for x, px in enumerate(poly):
                for y, ey in enumerate(entry):
                    new[x + y] = new[x + y] + px * ey
            poly = new
        for k, c in enumerate(poly):
            total[k] = total[k] + (c if sign > 0 else -c)
    return total


def mat_inv(A):
    """Gauss–Jordan inverse pivoting on the smallest valuation."""
    n = len(A)
    one = A[0][0].one_like()
    zero = A[0][0].zero_like()
    M = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = min(range(col, n), key=lambda r: M[r][col].valuation)
        if M[piv][col].is_zero():
            raise DomainError("matrix is singular at the working precision")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and not M[r][col].is_zero():
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)
