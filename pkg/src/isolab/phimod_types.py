"""Slope types of phi-modules over the extended Robba ring.

A phi-module is recorded only through its isomorphism class, the multiset of
coprime pairs ``(c, d)`` of its standard summands ``M_{c,d}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from ._rational import RationalLike, fmt, to_fraction
from .filtered import GrassmannianPoint, t_H
from .isocrystal import Isocrystal, check_block, newton_slopes, t_N


def _key(pair: tuple[int, int]) -> tuple[Fraction, int]:
    return Fraction(pair[0], pair[1]), pair[1]


@dataclass(frozen=True)
class SlopeType:
    pairs: tuple[tuple[int, int], ...]

    def __init__(self, pairs: Iterable[tuple[int, int]] = ()):
        checked = [check_block(int(c), int(d)) for c, d in pairs]
        object.__setattr__(self, "pairs", tuple(sorted(checked, key=_key)))

    @property
    def degree(self) -> int:
        return sum(c for c, _ in self.pairs)

    @property
    def rank(self) -> int:
        return sum(d for _, d in self.pairs)

    def slopes(self) -> list[Fraction]:
        return [Fraction(c, d) for c, d in self.pairs]

    def to_json(self) -> list[list[int]]:
        return [[c, d] for c, d in self.pairs]

    def __str__(self) -> str:
        return " + ".join(f"M({c},{d})" for c, d in self.pairs) or "0"


def degree(t: SlopeType) -> int:
    return t.degree


def rank(t: SlopeType) -> int:
    return t.rank


def _pairs_in_window(max_d: int, lo: Fraction, hi: Fraction) -> list[tuple[int, int]]:
    out = []
    for d in range(1, max_d + 1):
        for c in range(math.ceil(lo * d), math.floor(hi * d) + 1):
            if math.gcd(abs(c), d) == 1:
                out.append((c, d))
    out.sort(key=_key)
    return out


def iter_types(rank: int, degree: int, lo: RationalLike, hi: RationalLike) -> Iterator[SlopeType]:
    lo, hi = to_fraction(lo), to_fraction(hi)
    if lo > hi:
        raise ValueError(f"empty slope window [{lo}, {hi}]")
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    cands = _pairs_in_window(rank, lo, hi)

    def rec(start: int, r: int, deg: int, chosen: list) -> Iterator[SlopeType]:
        if r == 0:
            if deg == 0:
                yield SlopeType(chosen)
            return
        # every remaining summand has slope in [lo, hi]
        if deg < lo * r or deg > hi * r:
            return
        for i in range(start, len(cands)):
            c, d = cands[i]
            if d <= r:
                chosen.append((c, d))
                yield from rec(i, r - d, deg - c, chosen)
                chosen.pop()

    yield from rec(0, rank, degree, [])


def enumerate_types(rank: int, degree: int, lo: RationalLike, hi: RationalLike) -> list[SlopeType]:
    """All slope types of the given rank and degree with every slope in ``[lo, hi]``."""
    return sorted(iter_types(rank, degree, lo, hi), key=lambda t: [_key(p) for p in t.pairs])


def degree_from_filtration(D: Isocrystal, L: GrassmannianPoint) -> int:
    """Degree of the phi-module attached to ``(D, L)``: ``t_N(D) - t_H(D, L)``."""
    return t_N(D) - t_H(D, L)


@dataclass(frozen=True)
class HNBounds:
    lo: Fraction
    hi: Fraction
    rank: int
    degree: int

    def to_json(self) -> dict:
        return {"min": fmt(self.lo), "max": fmt(self.hi), "rank": self.rank, "degree": self.degree}


def hn_bounds_for_ML(D: Isocrystal, L: GrassmannianPoint | None = None) -> HNBounds:
    """Slope window for the phi-module of ``(D, L)``, sandwiched between ``D`` and ``t D``.

    ``t D`` has every slope of ``D`` shifted by +1, so the window runs from the
    least slope of ``D`` to the greatest slope of ``D`` plus one.  Without
    ``L`` the degree is taken to be 0.
    """
    slopes = [s for s, _ in newton_slopes(D).points]
    deg = 0 if L is None else degree_from_filtration(D, L)
    return HNBounds(min(slopes), max(slopes) + 1, D.h, deg)


def candidate_types(D: Isocrystal, L: GrassmannianPoint | None = None) -> list[SlopeType]:
    b = hn_bounds_for_ML(D, L)
    return enumerate_types(b.rank, b.degree, b.lo, b.hi)
