"""Twisted phi-series for the rank-5 example with slopes -3/5 and -1/2.

A :class:`PhiSeries` is a combination ``sum q * p^m * phi^j(x)`` of Frobenius
twists of one element ``x`` subject to ``phi^N(x) = p^a * x``.  The prime is
kept symbolic, so an identity verified here holds for every ``p``.  For
``x = sum_nu p^nu phi^(-10 nu)([u])`` the relation is ``phi^10(x) = p * x``.

Evaluation under theta is exact: with ``u`` the canonical tower of valuation
``s``, ``theta(phi^k(x)) = sum_nu p^(a*nu + s * p^(k - N*nu))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ._rational import RationalLike, fmt, to_fraction
from .errors import RankUncertain, RelationMismatch
from .fields import PPowerSumField
from .filtered import GrassmannianPoint, certified_minor, ppowersum_det
from .isocrystal import Isocrystal, standard_block_entries
from .padic_core import PPowerSum

# (column 1 k, column 2 k) per row of the 5x2 Hom matrix
EXAMPLE_PATTERN: tuple[tuple[int, int], ...] = ((5, 0), (11, 6), (17, 12), (23, 18), (29, 24))
EXAMPLE_RELATION = (10, 1)
EXAMPLE_SOURCE = (-1, 2)
EXAMPLE_TARGET_BLOCKS = ((-3, 5),)

# rank certificates need one digit of headroom below the minor's cutoff
RANK_MARGIN = Fraction(1)

Laurent = dict  # {p_exponent: Fraction}


@dataclass(frozen=True)
class PhiSeries:
    N: int
    a: int
    terms: tuple[tuple[tuple[int, int], Fraction], ...]  # ((j, m), q), 0 <= j < N

    @classmethod
    def build(cls, N: int, a: int, raw: Iterable[tuple[int, int, RationalLike]]) -> "PhiSeries":
        """Normal form of ``sum q p^m phi^k(x)`` over raw triples ``(k, m, q)``."""
        if N <= 0:
            raise ValueError("relation period must be positive")
        acc: dict[tuple[int, int], Fraction] = {}
        for k, m, q in raw:
            q = to_fraction(q)
            if not q:
                continue
            t, j = divmod(k, N)
            key = (j, m + t * a)
            acc[key] = acc.get(key, Fraction(0)) + q
        terms = tuple(sorted((key, q) for key, q in acc.items() if q))
        return cls(N, a, terms)

    @classmethod
    def phi_power(cls, k: int, N: int = 10, a: int = 1) -> "PhiSeries":
        return cls.build(N, a, [(k, 0, 1)])

    @property
    def relation(self) -> tuple[int, int]:
        return self.N, self.a

    def _raw(self):
        return [(j, m, q) for (j, m), q in self.terms]

    def _check(self, other: "PhiSeries") -> None:
        if other.relation != self.relation:
            raise RelationMismatch(f"relations {self.relation} and {other.relation} differ")

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PhiSeries") -> "PhiSeries":
        self._check(other)
        return PhiSeries.build(self.N, self.a, self._raw() + other._raw())

    def __neg__(self) -> "PhiSeries":
        return PhiSeries.build(self.N, self.a, [(j, m, -q) for j, m, q in self._raw()])

    def __sub__(self, other: "PhiSeries") -> "PhiSeries":
        return self + (-other)

    def times(self, coeff: Laurent) -> "PhiSeries":
        """Multiply by a Laurent polynomial in p (rational coefficients)."""
        raw = [(j, m + e, q * c) for j, m, q in self._raw() for e, c in coeff.items()]
        return PhiSeries.build(self.N, self.a, raw)

    def to_json(self) -> list:
        return [[j, m, fmt(q)] for (j, m), q in self.terms]

    def __str__(self) -> str:
        parts = []
        for (j, m), q in self.terms:
            c = "" if q == 1 else f"{q}*"
            pm = "" if m == 0 else f"p^{m}*"
            parts.append(f"{c}{pm}phi^{j}(x)")
        return " + ".join(parts) or "0"


def phi_apply(x: PhiSeries, k: int) -> PhiSeries:
    """``phi^k`` applied to a series; coefficients are Frobenius-fixed."""
    return PhiSeries.build(x.N, x.a, [(j + k, m, q) for j, m, q in x._raw()])


def _laurent_add(a: Laurent, b: Laurent) -> Laurent:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def _laurent_scale(a: Laurent, q: Fraction) -> Laurent:
    return {e: c * q for e, c in a.items()} if q else {}


def block_laurent(c: int, d: int) -> list[list[Laurent]]:
    m = [[{} for _ in range(d)] for _ in range(d)]
    for i, j, e in standard_block_entries(c, d):
        m[i][j] = {e: Fraction(1)}
    return m


def frobenius_laurent(D: Isocrystal) -> list[list[Laurent]]:
    """Frobenius matrix of D with p kept symbolic."""
    h = D.h
    f: list[list[Laurent]] = [[{} for _ in range(h)] for _ in range(h)]
    for off, (c, d) in zip(D.block_offsets(), D.blocks):
        blk = block_laurent(c, d)
        for i in range(d):
            for j in range(d):
                f[off + i][off + j] = blk[i][j]
    if D.base_change is None:
        return f
    from . import linalg

    b = D.base_change
    binv = linalg.inverse(b)
    # B^-1 F B with rational B
    fb = [[{} for _ in range(h)] for _ in range(h)]
    for i in range(h):
        for j in range(h):
            acc: Laurent = {}
            for k in range(h):
                if f[i][k] and b[k][j]:
                    acc = _laurent_add(acc, _laurent_scale(f[i][k], b[k][j]))
            fb[i][j] = acc
    out = [[{} for _ in range(h)] for _ in range(h)]
    for i in range(h):
        for j in range(h):
            acc = {}
            for k in range(h):
                if binv[i][k] and fb[k][j]:
                    acc = _laurent_add(acc, _laurent_scale(fb[k][j], binv[i][k]))
            out[i][j] = acc
    return out


@dataclass(frozen=True)
class HomCandidate:
    """A matrix of phi-series proposed as a map ``M_{c,d} -> D``."""

    entries: tuple[tuple[PhiSeries, ...], ...]
    source: tuple[int, int]
    target: Isocrystal

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        rel = {e.relation for r in rows for e in r}
        if len(rel) > 1:
            raise RelationMismatch(f"entries use several relations: {sorted(rel)}")

    def to_json(self) -> dict:
        return {
            "source": list(self.source),
            "target": self.target.to_json(),
            "relation": list(self.entries[0][0].relation) if self.entries and self.entries[0] else None,
            "entries": [[e.to_json() for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "HomCandidate":
        N, a = (int(v) for v in data["relation"])
        target = Isocrystal.from_json(data["target"])

        def dec(e):
            if isinstance(e, int):
                return PhiSeries.phi_power(e, N, a)
            return PhiSeries.build(N, a, [(int(k), int(m), q) for k, m, q in e])

        entries = tuple(tuple(dec(e) for e in row) for row in data["entries"])
        c, d = (int(v) for v in data["source"])
        return cls(entries, (c, d), target)


def example_candidate(p: int = 2, pattern: Sequence[tuple[int, int]] = EXAMPLE_PATTERN) -> HomCandidate:
    N, a = EXAMPLE_RELATION
    entries = tuple(tuple(PhiSeries.phi_power(k, N, a) for k in row) for row in pattern)
    return HomCandidate(entries, EXAMPLE_SOURCE, Isocrystal(p, EXAMPLE_TARGET_BLOCKS))


@dataclass(frozen=True)
class HomCheck:
    ok: bool
    discrepancy: tuple[tuple[PhiSeries, ...], ...]

    def nonzero_positions(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.discrepancy) for j, e in enumerate(row) if not e.is_zero()]

    def to_json(self) -> dict:
        return {"ok": self.ok, "discrepancy": [[e.to_json() for e in row] for row in self.discrepancy]}


def verify_hom(A: HomCandidate) -> HomCheck:
    """Check ``A * Phi_source = Phi_target * phi(A)`` exactly."""
    c, d = A.source
    h = A.target.h
    if len(A.entries) != h or any(len(r) != d for r in A.entries):
        raise ValueError(f"candidate must be {h}x{d}")
    N, a = A.entries[0][0].relation
    zero = PhiSeries(N, a, ())
    src = block_laurent(c, d)
    tgt = frobenius_laurent(A.target)
    phiA = [[phi_apply(e, 1) for e in row] for row in A.entries]
    disc = []
    for i in range(h):
        row = []
        for j in range(d):
            lhs = zero
            for k in range(d):
                if src[k][j]:
                    lhs = lhs + A.entries[i][k].times(src[k][j])
            rhs = zero
            for k in range(h):
                if tgt[i][k]:
                    rhs = rhs + phiA[k][j].times(tgt[i][k])
            row.append(lhs - rhs)
        disc.append(tuple(row))
    disc = tuple(disc)
    return HomCheck(all(e.is_zero() for r in disc for e in r), disc)


def theta_exponents(k: int, s: Fraction, cutoff: Fraction, p: int, N: int = 10, a: int = 1) -> list[tuple[int, Fraction]]:
    """Pairs ``(nu, a*nu + s*p^(k - N nu))`` with exponent below ``cutoff``."""
    if s <= 0:
        raise ValueError("tower valuation must be positive")
    if N <= 0 or a <= 0:
        raise ValueError("need N > 0 and a > 0 for a convergent series")

    def f(nu: int) -> Fraction:
        return a * nu + s * Fraction(p) ** (k - N * nu)

    # f(nu) > a*nu, so nothing at or above cutoff/a contributes; f is convex,
    # so once it is >= cutoff and increasing as nu decreases we can stop.
    nu = cutoff.numerator // (cutoff.denominator * a) + 1
    out = []
    prev = f(nu)
    while True:
        cur = f(nu)
        if cur < cutoff:
            out.append((nu, cur))
        elif cur > prev:
            break
        prev = cur
        nu -= 1
    out.sort()
    return out


def theta_of_phi_power(k: int, s: RationalLike, cutoff: RationalLike, p: int, N: int = 10, a: int = 1) -> PPowerSum:
    """``theta(phi^k(x))`` for ``x = sum_nu p^(a nu) phi^(-N nu)([u])``, ``v_E(u) = s``."""
    s, cutoff = to_fraction(s), to_fraction(cutoff)
    return PPowerSum.build(p, [(e, 1) for _, e in theta_exponents(k, s, cutoff, p, N, a)], cutoff)


def theta_matrix(
    s: RationalLike,
    cutoff: RationalLike,
    p: int,
    pattern: Sequence[Sequence[int]] = EXAMPLE_PATTERN,
    relation: tuple[int, int] = EXAMPLE_RELATION,
) -> list[list[PPowerSum]]:
    N, a = relation
    return [[theta_of_phi_power(k, s, cutoff, p, N, a) for k in row] for row in pattern]


def bad_locus_point(
    s: RationalLike,
    cutoff: RationalLike,
    p: int,
    pattern: Sequence[Sequence[int]] = EXAMPLE_PATTERN,
    relation: tuple[int, int] = EXAMPLE_RELATION,
) -> GrassmannianPoint:
    """Column span of ``theta(A)`` for the tower of valuation ``s``, with certified rank."""
    m = theta_matrix(s, cutoff, p, pattern, relation)
    width = len(m[0])
    if certified_minor(m, width, RANK_MARGIN) is None:
        raise RankUncertain(f"no {width}x{width} minor is certified below cutoff {cutoff}; raise the cutoff")
    return GrassmannianPoint(PPowerSumField(p), tuple(tuple(r) for r in m))


def plucker(point: GrassmannianPoint) -> dict[tuple[int, ...], PPowerSum]:
    """Maximal minors of the column matrix, keyed by row index tuple."""
    from itertools import combinations

    cols = point.columns
    k = point.dim
    return {rows: ppowersum_det([list(cols[i]) for i in rows]) for rows in combinations(range(point.h), k)}


def proportional_by(p1: dict, p2: dict, shift: RationalLike) -> bool:
    """Whether ``p2 = p^shift * p1`` coordinatewise below the common cutoff."""
    shift = to_fraction(shift)
    return p1.keys() == p2.keys() and all(p1[key].shift(shift).equal_to_cutoff(p2[key]) for key in p1)
