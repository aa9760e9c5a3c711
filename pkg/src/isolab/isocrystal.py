"""Isocrystals built from standard slope blocks.

The standard block of type ``(c, d)`` is the ``d x d`` matrix with ones on
the subdiagonal and ``p^c`` in the upper-right corner (for ``d = 1`` it is
``(p^c)``).  An optional rational ``base_change`` matrix ``B`` expresses the
Frobenius in the basis given by the columns of ``B``, i.e. the Frobenius
matrix becomes ``B^-1 F B`` and all subspaces are written in that basis.

Entries are rational, hence fixed by the absolute Frobenius ``sigma``, so
restrictions and determinants are ordinary linear algebra.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import linalg
from ._rational import check_prime, fmt, ord_p, to_fraction
from .errors import NotStable, SingularSubspace, UnsupportedMultiplicity


def check_block(c: int, d: int) -> tuple[int, int]:
    if not isinstance(c, int) or not isinstance(d, int):
        raise TypeError(f"block entries must be integers, got ({c!r}, {d!r})")
    if d <= 0:
        raise ValueError(f"block size must be positive, got d={d}")
    if math.gcd(abs(c), d) != 1:
        raise ValueError(f"block ({c},{d}) is not coprime")
    return c, d


def standard_block_entries(c: int, d: int) -> list[tuple[int, int, int]]:
    """Nonzero entries ``(row, col, p_exponent)`` of the standard ``(c, d)`` block."""
    entries = [(i + 1, i, 0) for i in range(d - 1)]
    entries.append((0, d - 1, c))
    return entries


@dataclass(frozen=True)
class Isocrystal:
    p: int
    blocks: tuple[tuple[int, int], ...]
    base_change: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        check_prime(self.p)
        blocks = tuple(check_block(int(c), int(d)) for c, d in self.blocks)
        if not blocks:
            raise ValueError("an isocrystal needs at least one block")
        object.__setattr__(self, "blocks", blocks)
        if self.base_change is not None:
            bc = tuple(tuple(to_fraction(x) for x in row) for row in self.base_change)
            h = self.h
            if len(bc) != h or any(len(row) != h for row in bc):
                raise ValueError(f"base_change must be {h}x{h}")
            if linalg.det(bc) == 0:
                raise ValueError("base_change is singular")
            object.__setattr__(self, "base_change", bc)

    @property
    def h(self) -> int:
        return sum(d for _, d in self.blocks)

    def block_offsets(self) -> list[int]:
        offsets, pos = [], 0
        for _, d in self.blocks:
            offsets.append(pos)
            pos += d
        return offsets

    @functools.cached_property
    def _base_inverse(self):
        return None if self.base_change is None else linalg.inverse(self.base_change)

    def to_standard(self, rows: Sequence[Sequence]) -> list[list]:
        """Coordinates in the standard block basis of vectors given in this isocrystal's basis."""
        if self.base_change is None:
            return [list(r) for r in rows]
        return linalg.matmul(self.base_change, rows)

    def from_standard(self, rows: Sequence[Sequence]) -> list[list]:
        if self.base_change is None:
            return [list(r) for r in rows]
        return linalg.matmul(self._base_inverse, rows)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "h": self.h,
            "blocks": [[c, d] for c, d in self.blocks],
            "base_change": None
            if self.base_change is None
            else [[fmt(x) for x in row] for row in self.base_change],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Isocrystal":
        blocks = tuple((int(c), int(d)) for c, d in data["blocks"])
        bc = data.get("base_change")
        iso = cls(int(data["p"]), blocks, None if bc is None else tuple(tuple(row) for row in bc))
        if "h" in data and int(data["h"]) != iso.h:
            raise ValueError(f"h={data['h']} does not match the block sizes (sum {iso.h})")
        return iso


@dataclass(frozen=True)
class NewtonPolygon:
    """Slopes with multiplicities, slopes strictly increasing."""

    points: tuple[tuple[Fraction, int], ...]

    @classmethod
    def from_multiset(cls, slopes: Sequence[tuple[Fraction, int]]) -> "NewtonPolygon":
        acc: dict[Fraction, int] = {}
        for s, m in slopes:
            acc[Fraction(s)] = acc.get(Fraction(s), 0) + m
        return cls(tuple(sorted(acc.items())))

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.points)

    def to_json(self) -> list:
        return [[fmt(s), m] for s, m in self.points]


def frobenius_matrix(D: Isocrystal) -> list[list[Fraction]]:
    h = D.h
    f = [[Fraction(0)] * h for _ in range(h)]
    for off, (c, d) in zip(D.block_offsets(), D.blocks):
        for i, j, e in standard_block_entries(c, d):
            f[off + i][off + j] = Fraction(D.p) ** e
    if D.base_change is not None:
        f = linalg.matmul(D._base_inverse, linalg.matmul(f, D.base_change))
    return f


def newton_slopes(D: Isocrystal) -> NewtonPolygon:
    return NewtonPolygon.from_multiset([(Fraction(c, d), d) for c, d in D.blocks])


def polynomial_newton_polygon(coeffs: Sequence[Fraction], p: int) -> NewtonPolygon:
    """Root valuations of ``sum coeffs[i] T^i`` read off its lower convex hull.

    Zero roots (vanishing low coefficients) are not supported.
    """
    pts = [(i, ord_p(c, p)) for i, c in enumerate(coeffs) if c != 0]
    if not pts or pts[0][0] != 0:
        raise ValueError("polynomial must have nonzero constant term")
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below the chord hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.append((Fraction(y1 - y2, x2 - x1), x2 - x1))
    return NewtonPolygon.from_multiset(slopes)


def charpoly(matrix: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Characteristic polynomial, coefficients in ascending degree."""
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    dm = DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in matrix], (len(matrix),) * 2, QQ)
    desc = dm.charpoly()
    return [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(desc)]


def charpoly_slopes(D: Isocrystal) -> NewtonPolygon:
    """Newton polygon of the characteristic polynomial of the Frobenius matrix."""
    return polynomial_newton_polygon(charpoly(frobenius_matrix(D)), D.p)


def _check_basis(D: Isocrystal, basis: Sequence[Sequence]) -> list[list[Fraction]]:
    rows = [[to_fraction(x) if not isinstance(x, Fraction) else x for x in row] for row in basis]
    if len(rows) != D.h:
        raise ValueError(f"subspace basis must have {D.h} rows, got {len(rows)}")
    k = len(rows[0]) if rows else 0
    if any(len(r) != k for r in rows):
        raise ValueError("ragged subspace basis")
    if k and linalg.rank(rows) < k:
        raise SingularSubspace(f"the {k} basis columns are linearly dependent")
    return rows


def restriction(D: Isocrystal, basis: Sequence[Sequence]) -> list[list[Fraction]]:
    """Matrix R with ``F B = B R``; raises NotStable when the span is not Frobenius-stable."""
    b = _check_basis(D, basis)
    if not b or not b[0]:
        return []
    fb = linalg.matmul(frobenius_matrix(D), b)
    r = linalg.solve(b, fb)
    if r is None:
        raise NotStable("Frobenius image leaves the span of the given basis")
    return r


def t_N(D: Isocrystal, subspace: Sequence[Sequence] | None = None) -> int:
    """ord_p of the Frobenius determinant on D or on a stable subspace."""
    if subspace is None:
        return ord_p(linalg.det(frobenius_matrix(D)), D.p)
    r = restriction(D, subspace)
    if not r:
        return 0
    return ord_p(linalg.det(r), D.p)


def is_simple(D: Isocrystal) -> bool:
    return len(D.blocks) == 1


def is_multiplicity_free(D: Isocrystal) -> bool:
    slopes = [Fraction(c, d) for c, d in D.blocks]
    return len(set(slopes)) == len(slopes)


@dataclass(frozen=True)
class StableSubspace:
    """Sum of the standard blocks listed in ``blocks``, as a basis in D's coordinates."""

    blocks: tuple[int, ...]
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    def label(self) -> str:
        return "{" + ",".join(map(str, self.blocks)) + "}"


def block_sum(D: Isocrystal, indices: Sequence[int]) -> StableSubspace:
    offsets = D.block_offsets()
    cols = []
    for b in sorted(indices):
        cols.extend(range(offsets[b], offsets[b] + D.blocks[b][1]))
    h = D.h
    std = [[Fraction(int(i == c)) for c in cols] for i in range(h)]
    basis = D.from_standard(std) if cols else std
    return StableSubspace(tuple(sorted(indices)), tuple(tuple(r) for r in basis))


def all_block_sums(D: Isocrystal) -> list[StableSubspace]:
    """All 2^s block sums, ordered by (dimension, block index set)."""
    s = len(D.blocks)
    subs = [block_sum(D, idx) for k in range(s + 1) for idx in combinations(range(s), k)]
    subs.sort(key=lambda sub: (sub.dim, sub.blocks))
    return subs


@functools.lru_cache(maxsize=4096)
def stable_subspaces(D: Isocrystal) -> tuple[StableSubspace, ...]:
    """Every Frobenius-stable subspace of a multiplicity-free isocrystal."""
    if not is_multiplicity_free(D):
        raise UnsupportedMultiplicity(
            "some slope occurs in more than one block; stable subspaces form positive-dimensional families"
        )
    return tuple(all_block_sums(D))
