"""Exact dense linear algebra on row-major matrices (lists of rows).

Entries may be ``int``/``Fraction`` or any exact field element supporting
``+ - * /`` and truthiness (e.g. :class:`isolab.fields.NumberFieldElement`).
Rational matrices take a fraction-free integer path, which is several times
faster than Gaussian elimination on ``Fraction`` objects.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Matrix = list[list]


def _is_rational(rows: Sequence[Sequence]) -> bool:
    return all(type(x) in (int, Fraction) for row in rows for x in row)


def transpose(rows: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    if not bt:
        return [[] for _ in a]
    out = []
    for row in a:
        new = []
        for col in bt:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each rational row by the lcm of its denominators."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if type(x) is Fraction and x.denominator != 1:
                den = den * x.denominator // math.gcd(den, x.denominator)
        if den == 1:
            out.append([int(x) for x in row])
        else:
            out.append([int(x * den) for x in row])
    return out


def bareiss_rank(m: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination. Mutates ``m``."""
    nrows = len(m)
    if nrows == 0:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        top = m[r]
        a = top[c]
        for i in range(r + 1, nrows):
            row = m[i]
            b = row[c]
            if b:
                m[i] = [(a * x - b * y) // prev for x, y in zip(row, top)]
            elif a != prev:
                m[i] = [(a * x) // prev for x in row]
        prev = a
        r += 1
        if r == nrows:
            break
    return r


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (generic exact field)."""
    m = [[Fraction(x) if type(x) is int else x for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows or not len(rows[0]):
        return 0
    if _is_rational(rows):
        return bareiss_rank(integer_rows(rows))
    return len(rref(rows)[1])


def det(rows: Sequence[Sequence]):
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(x) if type(x) is int else x for x in row] for row in rows]
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result = result * m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of {v : rows * v = 0}, returned as a list of vectors."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][f]
        basis.append(v)
    return basis


def left_annihilator(basis: Sequence[Sequence], h: int) -> Matrix:
    """Rows P (h - k of them) whose common kernel is exactly the column span of ``basis``."""
    if not basis or not len(basis[0]):
        return identity(h)
    return nullspace(transpose(basis), h)


def solve(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix | None:
    """Some X with a X = b, or None when the system is inconsistent."""
    n = len(a)
    k = len(a[0]) if a else 0
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    r, pivots = rref(aug)
    if any(pc >= k for pc in pivots):
        return None
    width = len(b[0]) if b else 0
    x = [[Fraction(0)] * width for _ in range(k)]
    for i, pc in enumerate(pivots):
        x[pc] = list(r[i][k:])
    return x


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    x = solve(a, identity(n))
    if x is None or rank(a) < n:
        raise ZeroDivisionError("matrix is singular")
    return x
