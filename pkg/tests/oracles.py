"""Independent reference implementations used to cross-check the library.

Nothing here imports from ``isolab`` internals: ranks, determinants,
stability and slope bookkeeping are recomputed from scratch.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


# ---------------------------------------------------------------- linear algebra


def int_rank(rows):
    """Rank of an integer matrix by fraction-free elimination (column pivoting)."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        a = pr[c]
        for i in range(r + 1, len(m)):
            row = m[i]
            b = row[c]
            m[i] = [(a * row[j] - b * pr[j]) // prev for j in range(ncols)]
        prev = a
        r += 1
        if r == len(m):
            break
    return r


def frac_rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def frac_det(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def ord_p(q, p):
    q = Fraction(q)
    if q == 0:
        raise ValueError("ord of zero")
    v = 0
    n, d = q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


# ---------------------------------------------------------------- isocrystals


def frobenius(blocks, p):
    """Standard Frobenius matrix: companion blocks with p^c in the corner."""
    h = sum(d for _, d in blocks)
    F = [[Fraction(0)] * h for _ in range(h)]
    off = 0
    for c, d in blocks:
        for i in range(1, d):
            F[off + i][off + i - 1] = Fraction(1)
        F[off][off + d - 1] = Fraction(p) ** c
        off += d
    return F


def brute_stable_family(blocks, p):
    """All block sums that pass a direct phi-stability test, with their t_N.

    Returns a list of (sorted block indices, coordinate set, t_N) ordered by
    (dimension, indices).
    """
    F = frobenius(blocks, p)
    h = len(F)
    offs = list(itertools.accumulate([0] + [d for _, d in blocks]))
    out = []
    for size in range(len(blocks) + 1):
        for S in itertools.combinations(range(len(blocks)), size):
            coords = [j for b in S for j in range(offs[b], offs[b + 1])]
            # stable iff the columns F e_j lie in span(e_coords)
            stable = all(F[i][j] == 0 for j in coords for i in range(h) if i not in coords)
            if not stable:
                continue
            sub = [[F[i][j] for j in coords] for i in coords]
            tn = ord_p(frac_det(sub), p) if coords else 0
            out.append((S, coords, tn))
    out.sort(key=lambda t: (len(t[1]), t[0]))
    return out


def brute_weak_admissible(blocks, p, columns, family=None):
    """(admissible, witness block indices or None) for the column span of an integer matrix."""
    family = family if family is not None else brute_stable_family(blocks, p)
    h = len(columns)
    k = len(columns[0]) if columns else 0
    nblocks = len(blocks)
    for S, coords, tn in family:
        m = len(coords)
        # dim(L ∩ span(e_S)) = k + m - rank([L | e_S]); rank([L|e_S]) = m + rank(L off S)
        rest = [columns[i] for i in range(h) if i not in coords]
        inter = k - int_rank(rest) if k else 0
        th = inter - m
        fails = tn < th or (len(S) == nblocks and tn != th)
        if fails:
            return False, S
    return True, None


def multiplicity_free_block_sets(max_h=6, max_c=3, max_d=5):
    """Every set of coprime blocks with distinct slopes, |c| <= max_c, d <= max_d, total size <= max_h."""
    pairs = [
        (c, d)
        for d in range(1, max_d + 1)
        for c in range(-max_c, max_c + 1)
        if math.gcd(abs(c), d) == 1
    ]
    pairs.sort(key=lambda t: (Fraction(t[0], t[1]), t[1]))
    out = []

    def rec(start, h, chosen):
        if chosen:
            out.append(tuple(chosen))
        for i in range(start, len(pairs)):
            c, d = pairs[i]
            if h + d <= max_h:
                chosen.append((c, d))
                rec(i + 1, h + d, chosen)
                chosen.pop()

    rec(0, 0, [])
    return out


# ---------------------------------------------------------------- slope types


def brute_types(rank, degree, lo, hi):
    """Exhaustive partitions of ``rank`` into block sizes, then all slope choices."""
    lo, hi = Fraction(lo), Fraction(hi)
    by_d = {}
    for d in range(1, rank + 1):
        by_d[d] = [
            (c, d)
            for c in range(math.floor(lo * d) - 1, math.ceil(hi * d) + 2)
            if math.gcd(abs(c), d) == 1 and lo <= Fraction(c, d) <= hi
        ]

    def partitions(n, largest):
        if n == 0:
            yield []
            return
        for d in range(min(n, largest), 0, -1):
            for rest in partitions(n - d, d):
                yield [d] + rest

    found = set()
    for part in partitions(rank, rank):
        # equal block sizes are interchangeable: pick a multiset per size
        counts = {d: part.count(d) for d in set(part)}
        per_size = [list(itertools.combinations_with_replacement(by_d[d], n)) for d, n in sorted(counts.items())]
        for choice in itertools.product(*per_size):
            flat = [pair for group in choice for pair in group]
            if sum(c for c, _ in flat) == degree:
                found.add(tuple(sorted(flat, key=lambda t: (Fraction(t[0], t[1]), t[1]))))
    return found


# ---------------------------------------------------------------- Newton polygons


def polygon_slopes(points):
    """Root valuations (with multiplicity) from the lower hull of (x, y) points; y=None is +inf."""
    pts = sorted((x, Fraction(y)) for x, y in points if y is not None)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        # a segment of slope sigma carries roots of valuation -sigma
        out.extend([-(y2 - y1) / (x2 - x1)] * (x2 - x1))
    return sorted(out)
