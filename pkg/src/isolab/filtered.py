"""Filtered isocrystals and the weak-admissibility test.

A point ``L`` of the Grassmannian is stored as an ``h x k`` matrix whose
columns span ``L``.  Coordinates live either in an :class:`ExactField` (exact
ranks) or in truncated :class:`PPowerSum` values, where a rank is only
reported when a nonvanishing minor certifies it.

For a rational subspace ``D'`` with left annihilator ``P`` (rows cutting out
``D'``), ``rank[L | D'] = dim D' + rank(P L)``; this is how every intersection
dimension is computed.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import linalg
from ._rational import fmt, to_fraction
from .errors import RankUncertain, SingularSubspace, UnsupportedMultiplicity
from .fields import ExactField, NumberFieldElement, PPowerSumField
from .isocrystal import (
    Isocrystal,
    StableSubspace,
    all_block_sums,
    is_multiplicity_free,
    stable_subspaces,
    t_N,
)
from .padic_core import PPowerSum


def ppowersum_det(m: Sequence[Sequence[PPowerSum]]) -> PPowerSum:
    """Division-free determinant (only small minors are ever needed)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return PPowerSum.sum_of_products([(1, m[0][0], m[1][1]), (-1, m[0][1], m[1][0])])
    # Laplace expansion along the first row
    products = []
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in m[1:]]
        products.append((-1 if j % 2 else 1, m[0][j], ppowersum_det(sub)))
    return PPowerSum.sum_of_products(products)


def certified_minor(m: Sequence[Sequence[PPowerSum]], size: int, margin: Fraction = Fraction(0)):
    """First ``size x size`` minor whose valuation is below its cutoff minus ``margin``.

    Returns ``(rows, cols, value)`` or ``None``.
    """
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    for rows in combinations(range(nrows), size):
        for cols in combinations(range(ncols), size):
            minor = ppowersum_det([[m[i][j] for j in cols] for i in rows])
            if minor.terms and minor.valuation() < minor.cutoff - margin:
                return rows, cols, minor
    return None


def certified_rank(m: Sequence[Sequence[PPowerSum]]) -> int:
    """Rank of a p-power-sum matrix, or RankUncertain if not maximal-and-certified.

    A nonzero minor proves a lower bound; an upper bound below the matrix size
    can never be proven from truncated data.
    """
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    full = min(nrows, ncols)
    if full == 0:
        return 0
    if certified_minor(m, full) is not None:
        return full
    best = 0
    for size in range(full - 1, 0, -1):
        if certified_minor(m, size) is not None:
            best = size
            break
    raise RankUncertain(f"certified rank >= {best} of {full} possible; increase the cutoff")


@dataclass(frozen=True)
class GrassmannianPoint:
    """Column span of an ``h x k`` matrix over an exact field or over p-power sums."""

    field: ExactField | PPowerSumField
    columns: tuple[tuple, ...]

    def __post_init__(self):
        cols = tuple(tuple(row) for row in self.columns)
        object.__setattr__(self, "columns", cols)
        if not cols:
            raise ValueError("a Grassmannian point needs h >= 1 rows")
        k = len(cols[0])
        if any(len(r) != k for r in cols):
            raise ValueError("ragged column matrix")
        if k > len(cols):
            raise ValueError(f"{k} columns exceed ambient dimension {len(cols)}")
        if k and _rank(self.field, cols) < k:
            raise ValueError(f"columns do not have full rank {k}")

    @property
    def h(self) -> int:
        return len(self.columns)

    @property
    def is_rational(self) -> bool:
        return isinstance(self.field, ExactField) and self.field.degree == 1

    @functools.cached_property
    def integer_columns(self) -> tuple[tuple[int, ...], ...]:
        """Rational coordinates with each column cleared of denominators (same span)."""
        if not self.is_rational:
            raise TypeError("integer_columns needs rational coordinates")
        cols = linalg.integer_rows(linalg.transpose(self.columns)) if self.dim else []
        return tuple(tuple(r) for r in linalg.transpose(cols)) if cols else tuple(() for _ in range(self.h))

    @property
    def dim(self) -> int:
        return len(self.columns[0])

    @classmethod
    def rational(cls, columns: Sequence[Sequence]) -> "GrassmannianPoint":
        return cls(ExactField.rationals(), tuple(tuple(to_fraction(x) for x in row) for row in columns))

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, PPowerSum):
                return x.to_json()
            if isinstance(x, NumberFieldElement):
                return x.to_json()
            return fmt(x)

        return {"field": self.field.to_json(), "columns": [[enc(x) for x in row] for row in self.columns]}

    @classmethod
    def from_json(cls, data: Mapping) -> "GrassmannianPoint":
        fdata = data.get("field") or {"minpoly": ["0", "1"]}
        if "ppowersum" in fdata:
            fld = PPowerSumField(int(fdata["ppowersum"]["p"]))
            rows = tuple(tuple(PPowerSum.from_json(x) for x in row) for row in data["columns"])
            for row in rows:
                for x in row:
                    if x.p != fld.p:
                        raise ValueError("p-power sum entry over a different prime")
        else:
            fld = ExactField(tuple(fdata["minpoly"]), fdata.get("name", "a"))
            rows = tuple(tuple(fld.element(x) for x in row) for row in data["columns"])
        return cls(fld, rows)


def _rank(fld, rows: Sequence[Sequence]) -> int:
    if isinstance(fld, PPowerSumField):
        return certified_rank(rows)
    return linalg.rank(rows)


def _project(fld, annihilator: Sequence[Sequence[Fraction]], columns: Sequence[Sequence]) -> list[list]:
    """Rational matrix times coordinate matrix, staying inside the point's field."""
    if not isinstance(fld, PPowerSumField):
        return linalg.matmul(annihilator, columns)
    k = len(columns[0])
    out = []
    for prow in annihilator:
        row = []
        for j in range(k):
            acc = None
            for q, entry in zip(prow, columns):
                if q:
                    term = entry[j].scale(q)
                    acc = term if acc is None else acc + term
            if acc is None:
                acc = PPowerSum.zero(fld.p, max(e[j].cutoff for e in columns))
            row.append(acc)
        out.append(row)
    return out


def _subspace_rows(subspace: Sequence[Sequence] | StableSubspace) -> list[list[Fraction]]:
    basis = subspace.basis if isinstance(subspace, StableSubspace) else subspace
    return [[to_fraction(x) if not isinstance(x, Fraction) else x for x in row] for row in basis]


def _annihilator(basis: Sequence[Sequence[Fraction]], h: int) -> list[list[Fraction]]:
    return linalg.left_annihilator(basis, h)


def intersection_dim(L: GrassmannianPoint, subspace) -> int:
    """``dim(L ∩ D')`` for a rational subspace ``D'`` given by a basis (columns)."""
    basis = _subspace_rows(subspace)
    h = L.h
    if len(basis) != h:
        raise ValueError(f"subspace basis must have {h} rows")
    m = len(basis[0]) if basis and basis[0] else 0
    if m and linalg.rank(basis) < m:
        raise SingularSubspace("subspace basis columns are dependent")
    return _intersection_dim(L, _annihilator(basis, h))


def _intersection_dim(L: GrassmannianPoint, annihilator, int_annihilator=None) -> int:
    # dim(L ∩ D') = dim L - rank(P L) where P cuts out D'
    if not annihilator or not L.dim:
        return L.dim
    if L.is_rational:
        # scaling rows of P and columns of L changes neither rank
        P = int_annihilator if int_annihilator is not None else linalg.integer_rows(annihilator)
        return L.dim - linalg.bareiss_rank(linalg.matmul(P, L.integer_columns))
    return L.dim - _rank(L.field, _project(L.field, annihilator, L.columns))


def t_H(D: Isocrystal, L: GrassmannianPoint, subspace=None) -> int:
    """``dim(L ∩ D') - dim D'`` (whole space when ``subspace`` is omitted)."""
    if L.h != D.h:
        raise ValueError(f"point lives in dimension {L.h}, isocrystal has h={D.h}")
    if subspace is None:
        return L.dim - D.h
    basis = _subspace_rows(subspace)
    m = len(basis[0]) if basis and basis[0] else 0
    return intersection_dim(L, basis) - m


@dataclass(frozen=True)
class LedgerEntry:
    label: str
    basis: tuple[tuple[Fraction, ...], ...]
    t_N: int
    t_H: int

    @property
    def ok(self) -> bool:
        return self.t_N >= self.t_H

    def to_json(self) -> dict:
        return {
            "subspace": self.label,
            "basis": [[fmt(x) for x in row] for row in self.basis],
            "t_N": self.t_N,
            "t_H": self.t_H,
        }


@dataclass(frozen=True)
class WeakAdmissibilityReport:
    admissible: bool
    witness: LedgerEntry | None
    ledger: tuple[LedgerEntry, ...]
    whole_space: tuple[int, int]
    relative: bool = False
    expected_tH: int | None = None
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "admissible": self.admissible,
            "witness": None if self.witness is None else self.witness.to_json(),
            "whole_space": {"t_N": self.whole_space[0], "t_H": self.whole_space[1]},
            "expected_tH": self.expected_tH,
            "relative": self.relative,
            "ledger": [e.to_json() for e in self.ledger],
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class _Candidate:
    sort_key: tuple
    label: str
    basis: tuple[tuple[Fraction, ...], ...]
    t_N: int
    annihilator: tuple[tuple[Fraction, ...], ...]
    int_annihilator: tuple[tuple[int, ...], ...]


def _canonical_key(basis: Sequence[Sequence[Fraction]]) -> tuple:
    r, _ = linalg.rref(linalg.transpose(basis)) if basis and basis[0] else ([], [])
    return tuple(tuple(row) for row in r if any(row))


_FAMILY_CACHE: dict = {}


def _block_family(D: Isocrystal) -> list[_Candidate]:
    cached = _FAMILY_CACHE.get(D)
    if cached is not None:
        return cached
    subs = stable_subspaces(D) if is_multiplicity_free(D) else tuple(all_block_sums(D))
    fam = []
    for sub in subs:
        rows = _subspace_rows(sub)
        P = _annihilator(rows, D.h)
        fam.append(
            _Candidate(
                (sub.dim, 0, sub.blocks),
                sub.label(),
                sub.basis,
                t_N(D, rows),
                tuple(tuple(r) for r in P),
                tuple(tuple(r) for r in linalg.integer_rows(P)),
            )
        )
    if len(_FAMILY_CACHE) > 4096:
        _FAMILY_CACHE.clear()
    _FAMILY_CACHE[D] = fam
    return fam


@functools.lru_cache(maxsize=4096)
def _whole_t_N(D: Isocrystal) -> int:
    return t_N(D)


def weak_admissible(
    D: Isocrystal,
    L: GrassmannianPoint,
    extra_subspaces: Sequence[Sequence[Sequence]] | None = None,
    expected_tH: int | None = None,
) -> WeakAdmissibilityReport:
    """Check ``t_N(D) = t_H(D)`` and ``t_N(D') >= t_H(D')`` over the stable family.

    Without multiplicities the family is every stable subspace (all block sums).
    Otherwise the caller must pass ``extra_subspaces``; they are checked together
    with the block sums and the report is flagged ``relative``.
    """
    if L.h != D.h:
        raise ValueError(f"point lives in dimension {L.h}, isocrystal has h={D.h}")
    relative = False
    if not is_multiplicity_free(D):
        if not extra_subspaces:
            raise UnsupportedMultiplicity(
                "isocrystal has a repeated slope; pass extra_subspaces for a relative test"
            )
        relative = True
    family = list(_block_family(D))
    if extra_subspaces:
        seen = {_canonical_key(c.basis) for c in family}
        for basis in extra_subspaces:
            rows = _subspace_rows(basis)
            key = _canonical_key(rows)
            if key in seen:
                continue
            seen.add(key)
            tn = t_N(D, rows)  # raises NotStable / SingularSubspace
            m = len(rows[0]) if rows and rows[0] else 0
            P = _annihilator(rows, D.h)
            family.append(
                _Candidate((m, 1, key), "extra", tuple(tuple(r) for r in rows), tn,
                           tuple(tuple(r) for r in P), tuple(tuple(r) for r in linalg.integer_rows(P)))
            )
        family.sort(key=lambda c: c.sort_key)

    tn_whole = _whole_t_N(D)
    th_whole = L.dim - D.h
    notes = []
    whole_ok = tn_whole == th_whole
    if not whole_ok:
        notes.append(f"whole-space equality fails: t_N={tn_whole}, t_H={th_whole}")
    if expected_tH is not None and th_whole != expected_tH:
        whole_ok = False
        notes.append(f"t_H(D)={th_whole} differs from the expected value {expected_tH}")

    ledger = []
    witness = None
    for cand in family:
        m = len(cand.basis[0]) if cand.basis and cand.basis[0] else 0
        th = _intersection_dim(L, cand.annihilator, cand.int_annihilator) - m
        entry = LedgerEntry(cand.label, cand.basis, cand.t_N, th)
        ledger.append(entry)
        if witness is None and not entry.ok:
            witness = entry
    if witness is None and not whole_ok:
        witness = next((e for e in ledger if e.label == "{" + ",".join(map(str, range(len(D.blocks)))) + "}"), None)
    return WeakAdmissibilityReport(
        admissible=whole_ok and all(e.ok for e in ledger),
        witness=witness,
        ledger=tuple(ledger),
        whole_space=(tn_whole, th_whole),
        relative=relative,
        expected_tH=expected_tH,
        notes=tuple(notes),
    )
