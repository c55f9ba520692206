"""Exact integer and rational matrix routines.

Matrices are plain lists of lists of ``int`` (or ``Fraction``); nothing here
rounds.  numpy is only used as a fast path in :func:`matmul` when the result is
guaranteed to fit in 64 bits.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

Matrix = list[list[int]]

_INT64_SAFE = 2**62


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    """Exact integer product, using int64 BLAS when overflow is impossible."""
    if not a or not b:
        return [[] for _ in a]
    inner = len(b)
    amax = max((abs(x) for row in a for x in row), default=0)
    bmax = max((abs(x) for row in b for x in row), default=0)
    if amax * bmax * max(inner, 1) < _INT64_SAFE:
        prod = np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)
        return prod.tolist()
    prod = np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)
    return [[int(x) for x in row] for row in prod]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def column_echelon(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, list[int]]:
    """Integer column echelon form.

    Returns ``(H, U, pivots)`` with ``H == A @ U``, ``U`` unimodular, and
    ``pivots[k]`` the row of the leading entry of column ``k`` of ``H``.
    Columns of ``H`` past ``len(pivots)`` are zero.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    h = [list(map(int, row)) for row in a]
    u = identity(n)

    def colop(j: int, k: int, q: int) -> None:
        # column j -= q * column k
        for row in h:
            row[j] -= q * row[k]
        for row in u:
            row[j] -= q * row[k]

    def swap(j: int, k: int) -> None:
        for row in h:
            row[j], row[k] = row[k], row[j]
        for row in u:
            row[j], row[k] = row[k], row[j]

    pivots: list[int] = []
    k = 0
    for i in range(m):
        if k == n:
            break
        while True:
            nz = [j for j in range(k, n) if h[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(h[i][j]))
            if j0 != k:
                swap(j0, k)
            done = True
            for j in range(k + 1, n):
                if h[i][j]:
                    colop(j, k, h[i][j] // h[i][k])
                    if h[i][j]:
                        done = False
            if done:
                break
        if h[i][k] != 0:
            if h[i][k] < 0:
                for row in h:
                    row[k] = -row[k]
                for row in u:
                    row[k] = -row[k]
            pivots.append(i)
            k += 1
    return h, u, pivots


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """A lattice basis (list of vectors) of ``{x in Z^n : A x = 0}``."""
    if not a:
        n = ncols or 0
        return [[int(i == j) for i in range(n)] for j in range(n)]
    _, u, pivots = column_echelon(a)
    n = len(u)
    return [[u[i][j] for i in range(n)] for j in range(len(pivots), n)]


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """Some integer ``x`` with ``A x = b``, or ``None`` when ``b`` is not in the image."""
    m = len(a)
    if m == 0:
        return []
    h, u, pivots = column_echelon(a)
    n = len(u)
    y = [0] * n
    resid = list(map(int, b))
    for k, i in enumerate(pivots):
        q, r = divmod(resid[i], h[i][k])
        if r:
            return None
        y[k] = q
        for row in range(m):
            resid[row] -= q * h[row][k]
    if any(resid):
        return None
    return matvec(u, y)


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Some rational solution of ``A x = b`` (free variables set to 0), or ``None``."""
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(m)]
    piv_cols: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][n]
    return x


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return len(column_echelon([list(map(int, row)) for row in a])[2])


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def congruence_diagonal(q: Sequence[Sequence]) -> list[Fraction]:
    """Diagonal of ``P^T Q P`` for a rational congruence diagonalizing symmetric ``Q``."""
    n = len(q)
    a = [[Fraction(x) for x in row] for row in q]
    for i in range(n):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    diag: list[Fraction] = []
    active = list(range(n))
    while active:
        p = next((i for i in active if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in active for j in active if a[i][j] != 0), None)
            if pair is None:
                diag.extend(Fraction(0) for _ in active)
                break
            i, j = pair
            # e_i -> e_i + e_j makes the (i, i) entry 2 a_ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            p = i
        piv = a[p][p]
        rest = [i for i in active if i != p]
        for i in rest:
            f = a[i][p] / piv
            if f:
                for k in rest:
                    a[i][k] -= f * a[p][k]
        for i in rest:
            a[i][p] = a[p][i] = Fraction(0)
        diag.append(piv)
        active = rest
    return diag


def inertia(q: Sequence[Sequence]) -> tuple[int, int, int]:
    """``(b_plus, b_minus, b_zero)`` of a symmetric rational matrix."""
    d = congruence_diagonal(q)
    pos = sum(1 for x in d if x > 0)
    neg = sum(1 for x in d if x < 0)
    return pos, neg, len(d) - pos - neg


def smith_diagonal(a: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix (divisibility not enforced)."""
    cur = [list(map(int, row)) for row in a]
    if not cur or not cur[0]:
        return []
    for _ in range(10_000):
        h, _, piv = column_echelon(cur)
        if not piv:
            return []
        h = [row[: len(piv)] for row in h]
        cur = transpose(h)
        if all(cur[i][j] == 0 for i in range(len(cur)) for j in range(len(cur[0])) if i != j):
            return [abs(cur[i][i]) for i in range(min(len(cur), len(cur[0]))) if cur[i][i]]
    raise RuntimeError("Smith reduction did not converge")


def cokernel(a: Sequence[Sequence[int]], nrows: int) -> tuple[int, list[int]]:
    """``Z^nrows / im(A)`` as ``(free_rank, torsion)`` with torsion factors > 1."""
    if not a or not a[0]:
        return nrows, []
    d = invariant_factors(smith_diagonal(a))
    return nrows - len(d), [x for x in d if x > 1]


def invariant_factors(diag: Sequence[int]) -> list[int]:
    """Normalize a diagonal so each entry divides the next (same abelian group)."""
    d = sorted((abs(x) for x in diag), key=lambda x: (x == 0, x))
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = math.gcd(d[i], d[j])
            if g:
                d[i], d[j] = g, d[i] * d[j] // g
    return d
