"""Exact integer and rational linear algebra.

Matrices are plain lists of rows (Python ints or ``Fraction``); nothing here
ever touches floating point.  All functions are pure and return fresh lists.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .errors import RankDeficient, SingularMatrix

Rat = Fraction
IntMat = list[list[int]]


def to_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def fmt_rat(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def identity(n: int) -> IntMat:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> IntMat:
    return [[0] * cols for _ in range(rows)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    assert all(len(row) == inner for row in a), "shape mismatch"
    return [[sum(row[t] * b[t][j] for t in range(inner)) for j in range(cols)] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def rank(m: Sequence[Sequence]) -> int:
    """Rank over Q (fraction-free elimination on integer-scaled rows)."""
    rows = []
    for row in m:
        if all(isinstance(x, int) for x in row):
            rows.append(list(row))
            continue
        row = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * den) for x in row])
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                new = [p * x - f * y for x, y in zip(rows[i], rows[r])]
                g = gcd(*new)
                rows[i] = [x // g for x in new] if g > 1 else new
        r += 1
        if r == len(rows):
            break
    return r


def det(m: Sequence[Sequence]):
    """Exact determinant.  Integer input gives an int (Bareiss); rationals give a Fraction."""
    n = len(m)
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in m for x in row):
        a = [list(row) for row in m]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]
    a = [[Fraction(x) for x in row] for row in m]
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            result = -result
        result *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def solve_rational(m: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve the square system ``m x = b`` exactly; raise :class:`SingularMatrix` otherwise."""
    n = len(m)
    if any(len(row) != n for row in m) or len(b) != n:
        raise ValueError("solve_rational expects a square system")
    a = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(m, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n] for row in a]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _combine_rows(mats, p: int, i: int, coeffs) -> None:
    x, y, u, v = coeffs
    for m in mats:
        rp, ri = m[p], m[i]
        m[p] = [x * s + y * t for s, t in zip(rp, ri)]
        m[i] = [u * s + v * t for s, t in zip(rp, ri)]


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMat, IntMat]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U m = H``, ``U`` unimodular, ``H`` in row echelon
    form with positive pivots and every entry above a pivot reduced into
    ``[0, pivot)``.  Zero rows are collected at the bottom.
    """
    h = [list(map(int, row)) for row in m]
    nrows = len(h)
    ncols = len(h[0]) if nrows else 0
    u = identity(nrows)
    p = 0
    for c in range(ncols):
        if p == nrows:
            break
        nz = [i for i in range(p, nrows) if h[i][c] != 0]
        if not nz:
            continue
        if nz[0] != p:
            h[p], h[nz[0]] = h[nz[0]], h[p]
            u[p], u[nz[0]] = u[nz[0]], u[p]
        for i in range(p + 1, nrows):
            if h[i][c] == 0:
                continue
            g, x, y = _egcd(h[p][c], h[i][c])
            a, b = h[p][c] // g, h[i][c] // g
            _combine_rows((h, u), p, i, (x, y, -b, a))
        if h[p][c] < 0:
            h[p] = [-v for v in h[p]]
            u[p] = [-v for v in u[p]]
        piv = h[p][c]
        for i in range(p):
            q = h[i][c] // piv
            if q:
                h[i] = [s - q * t for s, t in zip(h[i], h[p])]
                u[i] = [s - q * t for s, t in zip(u[i], u[p])]
        p += 1
    return h, u


def smith_decomposition(m: Sequence[Sequence[int]]) -> tuple[IntMat, IntMat, IntMat]:
    """Return ``(S, D, T)`` with ``S m T = D`` diagonal, ``S, T`` unimodular and d1 | d2 | ..."""
    d = [list(map(int, row)) for row in m]
    nr = len(d)
    nc = len(d[0]) if nr else 0
    s = identity(nr)
    t = identity(nc)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        s[i], s[j] = s[j], s[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in t:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        d[dst] = [a + q * b for a, b in zip(d[dst], d[src])]
        s[dst] = [a + q * b for a, b in zip(s[dst], s[src])]

    def add_col(dst, src, q):
        for row in d:
            row[dst] += q * row[src]
        for row in t:
            row[dst] += q * row[src]

    for k in range(min(nr, nc)):
        while True:
            entries = [(abs(d[i][j]), i, j) for i in range(k, nr) for j in range(k, nc) if d[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(k, i)
            swap_cols(k, j)
            piv = d[k][k]
            dirty = False
            for i in range(k + 1, nr):
                q = d[i][k] // piv
                if q:
                    add_row(i, k, -q)
                dirty |= d[i][k] != 0
            for j in range(k + 1, nc):
                q = d[k][j] // piv
                if q:
                    add_col(j, k, -q)
                dirty |= d[k][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(k + 1, nr) for j in range(k + 1, nc)
                        if d[i][j] % piv), None)
            if bad is None:
                break
            add_row(k, bad[0], 1)
        if k < nr and k < nc and d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            s[k] = [-x for x in s[k]]
    return s, d, t


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMat, list[int]]:
    """Return ``(D, invariant_factors)``; factors are the nonzero diagonal entries."""
    _, d, _ = smith_decomposition(m)
    factors = [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i] != 0]
    return d, factors


def left_kernel_basis(a: Sequence[Sequence[int]]) -> IntMat:
    """Rows spanning the saturated lattice ``{x in Z^rows : x a = 0}``, in HNF."""
    nrows = len(a)
    if nrows == 0:
        return []
    h, u = hermite_normal_form(a)
    ker = [u[i] for i in range(nrows) if not any(h[i])]
    if not ker:
        return []
    hk, _ = hermite_normal_form(ker)
    return [row for row in hk if any(row)]


def integer_kernel_projection(a: Sequence[Sequence[int]], r: int | None = None) -> tuple[IntMat, list[int]]:
    """Projection of ``Z^k`` onto the torsion-free part of ``Z^k / im(a)``.

    ``a`` is ``k x r`` of full column rank.  Returns ``(P, torsion)`` where
    ``P`` is ``(k - r) x k`` in Hermite normal form with ``P a = 0`` and
    ``P`` surjective, and ``torsion`` lists the invariant factors of
    ``coker(a)`` that exceed one.
    """
    k = len(a)
    if r is None:
        r = len(a[0]) if k else 0
    if rank(a) < r:
        raise RankDeficient(f"matrix has rank {rank(a)} < {r}")
    p = left_kernel_basis(a) if r else identity(k)
    if r == 0:
        p, _ = hermite_normal_form(p)
    assert len(p) == k - r
    _, factors = smith_normal_form(a) if k and r else (None, [])
    return p, [f for f in factors if f > 1]


def primitive(v: Sequence[int]) -> list[int]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return [int(x) // g for x in v] if g else [0] * len(v)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (``-1`` for the empty set)."""
    if not points:
        return -1
    base = points[0]
    return rank([[x - y for x, y in zip(p, base)] for p in points[1:]]) if len(points) > 1 else 0


def right_kernel_rational(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis (over Q) of ``{x : m x = 0}`` by reduced row echelon form."""
    if not m:
        return []
    ncols = len(m[0])
    a = [[Fraction(x) for x in row] for row in m]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis


def clear_denominators(v: Sequence[Fraction]) -> list[int]:
    """Smallest primitive integer vector on the ray through ``v``."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return primitive([int(Fraction(x) * den) for x in v])
