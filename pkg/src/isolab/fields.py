"""Exact coefficient fields for Grassmannian points.

``ExactField`` is ``Q[a]/(f)`` for a monic irreducible ``f``; ``Q`` itself is
the degree-one field and its elements are plain ``Fraction`` objects.
``PPowerSumField`` marks points whose coordinates are truncated p-power sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from ._rational import RationalLike, fmt, to_fraction


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    # coefficient lists in ascending degree; b has nonzero leading coefficient
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


@dataclass(frozen=True)
class ExactField:
    """``Q[name]/(minpoly)``; ``minpoly`` is monic, coefficients in ascending degree."""

    minpoly: tuple[Fraction, ...]
    name: str = "a"

    def __post_init__(self):
        coeffs = tuple(to_fraction(c) for c in self.minpoly)
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic of degree >= 1")
        object.__setattr__(self, "minpoly", coeffs)
        if len(coeffs) > 2:
            x = sympy.Symbol("x")
            poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])), x, domain="QQ")
            if not poly.is_irreducible:
                raise ValueError(f"minimal polynomial {poly.as_expr()} is reducible over Q")

    @classmethod
    def rationals(cls) -> "ExactField":
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    def element(self, value: RationalLike | Sequence[RationalLike]):
        """Coerce a rational (or a coefficient list in powers of the generator) into the field."""
        if isinstance(value, (list, tuple)):
            coeffs = [to_fraction(c) for c in value]
            if len(coeffs) > self.degree:
                raise ValueError(f"element has {len(coeffs)} coefficients, field degree is {self.degree}")
            if self.degree == 1:
                return coeffs[0] if coeffs else Fraction(0)
            return NumberFieldElement(self, tuple(coeffs) + (Fraction(0),) * (self.degree - len(coeffs)))
        q = to_fraction(value)
        if self.degree == 1:
            return q
        return NumberFieldElement(self, (q,) + (Fraction(0),) * (self.degree - 1))

    def to_json(self) -> dict:
        return {"minpoly": [fmt(c) for c in self.minpoly], "name": self.name}


@dataclass(frozen=True)
class PPowerSumField:
    """Marker for coordinates in :class:`isolab.padic_core.PPowerSum`."""

    p: int

    def to_json(self) -> dict:
        return {"ppowersum": {"p": self.p}}


class NumberFieldElement:
    """Element of an :class:`ExactField` of degree >= 2."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: ExactField, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, NumberFieldElement):
            if other.field != self.field:
                raise ValueError("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    def _reduce(self, poly: list[Fraction]) -> "NumberFieldElement":
        _, r = _poly_divmod(poly, list(self.field.minpoly))
        r = list(r) + [Fraction(0)] * (self.field.degree - len(r))
        return NumberFieldElement(self.field, tuple(r))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NumberFieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NumberFieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement(self.field, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._reduce(_poly_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero in number field")
        # extended Euclid: track s with s*self = r (mod minpoly)
        r0, r1 = list(self.field.minpoly), list(self.coeffs)
        while r1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r1 is a nonzero constant since minpoly is irreducible
        return self._reduce([c / r1[0] for c in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement(self.field, tuple(a / other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def to_json(self) -> list[str]:
        return [fmt(c) for c in self.coeffs]

    def __repr__(self) -> str:
        parts = [f"{c}*{self.field.name}^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) or "0"
