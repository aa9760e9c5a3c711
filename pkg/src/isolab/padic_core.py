"""Teichmüller towers, finite Teichmüller series and exact p-power sums.

Only the canonical p-power tower is representable: the element ``u`` with
``u^(n) = p^(s / p^n)``.  Its valuation ``v_E(u)`` is ``s`` and the Frobenius
acts by ``s -> s * p``.  A :class:`TeichmullerPolynomial` is a finite sum
``sum_i p^i [x_i]`` of such towers, and :func:`theta` sends it to the exact
element ``sum_i p^(i + v_E(x_i))`` of :class:`PPowerSum`.

:class:`PPowerSum` is a finite integer combination of rational powers of ``p``
known modulo everything of valuation ``>= cutoff``.  Powers of ``p`` whose
exponents differ by a non-integer are linearly independent, so each residue
class of exponents mod 1 is an ordinary truncated p-adic integer and gets its
own digit expansion.  Within a class the digits are sign-magnitude: the
class value is reduced into the symmetric range modulo ``p^m`` and written
as ``±`` (base-``p`` digits), which keeps every coefficient in
``1 <= |c| <= p - 1`` and makes the normal form unique.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from ._rational import RationalLike, check_prime, fmt, ord_int, to_fraction

INF = math.inf


@dataclass(frozen=True, order=True)
class TowerElement:
    """The tower ``u^(n) = p^(s/p^n)`` in the tilt of ``O_C``."""

    s: Fraction
    p: int

    def __init__(self, s: RationalLike, p: int):
        s = to_fraction(s)
        if s <= 0:
            raise ValueError(f"tower parameter must be positive and finite, got {s}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "p", check_prime(p))

    def component_exponent(self, n: int) -> Fraction:
        """Exponent e with ``u^(n) = p^e``."""
        if n < 0:
            raise ValueError("tower components are indexed by n >= 0")
        return self.s / self.p**n

    def __mul__(self, other: "TowerElement") -> "TowerElement":
        if other.p != self.p:
            raise ValueError("towers over different primes")
        return TowerElement(self.s + other.s, self.p)


def v_E(u: TowerElement) -> Fraction:
    return u.s


def frobenius_power(u: TowerElement, j: int) -> TowerElement:
    """``u^(p^j)``; negative ``j`` takes p-power roots."""
    return TowerElement(u.s * Fraction(u.p) ** j, u.p)


@dataclass(frozen=True)
class TeichmullerPolynomial:
    """Finite sum ``sum_i p^i [x_i]`` with at most one term per index ``i``."""

    p: int
    terms: tuple[tuple[int, TowerElement], ...]

    def __init__(self, p: int, terms: Mapping[int, TowerElement] | Iterable[tuple[int, TowerElement]] = ()):
        check_prime(p)
        items = list(terms.items()) if isinstance(terms, Mapping) else list(terms)
        seen = set()
        for i, u in items:
            if not isinstance(i, int):
                raise TypeError("Teichmüller indices must be integers")
            if i in seen:
                raise ValueError(f"duplicate Teichmüller index {i}")
            if u.p != p:
                raise ValueError("tower element over a different prime")
            seen.add(i)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "terms", tuple(sorted(items)))

    @classmethod
    def monomial(cls, p: int, i: int, s: RationalLike) -> "TeichmullerPolynomial":
        return cls(p, [(i, TowerElement(s, p))])

    def support(self) -> list[int]:
        return [i for i, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TeichmullerPolynomial") -> "TeichmullerPolynomial":
        # Overlapping indices would need Witt-vector carries, which are not modeled.
        if other.p != self.p:
            raise ValueError("different primes")
        if set(self.support()) & set(other.support()):
            raise ValueError("sum of Teichmüller series with overlapping support is not representable")
        return TeichmullerPolynomial(self.p, self.terms + other.terms)

    def shift(self, j: int) -> "TeichmullerPolynomial":
        """Multiply by ``p^j``."""
        return TeichmullerPolynomial(self.p, [(i + j, u) for i, u in self.terms])

    def scale(self, i: int, u: TowerElement) -> "TeichmullerPolynomial":
        """Multiply by the monomial ``p^i [u]``."""
        return TeichmullerPolynomial(self.p, [(k + i, x * u) for k, x in self.terms])

    def to_json(self) -> dict:
        return {"p": self.p, "terms": [[i, fmt(u.s)] for i, u in self.terms]}

    @classmethod
    def from_json(cls, data: Mapping) -> "TeichmullerPolynomial":
        p = int(data["p"])
        return cls(p, [(int(i), TowerElement(s, p)) for i, s in data["terms"]])


def w_k(x: TeichmullerPolynomial, k: int):
    vals = [u.s for i, u in x.terms if i <= k]
    return min(vals) if vals else INF


def _check_radius(r) -> Fraction:
    r = to_fraction(r)
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    return r


def v_0r(x: TeichmullerPolynomial, r: RationalLike):
    """``min_i v_E(x_i) + i/r``; cross-checked against ``min_k w_k(x) + k/r``."""
    r = _check_radius(r)
    if x.is_zero():
        return INF
    direct = min(u.s + Fraction(i) / r for i, u in x.terms)
    # w_k is constant between support indices while k/r increases,
    # so the minimum over all integers k is attained on the support.
    via_w = min(w_k(x, k) + Fraction(k) / r for k in x.support())
    assert direct == via_w, (direct, via_w)
    return direct


def v_sr(x: TeichmullerPolynomial, s: RationalLike, r: RationalLike):
    s, r = _check_radius(s), _check_radius(r)
    if s > r:
        raise ValueError(f"need s <= r, got s={s}, r={r}")
    return min(v_0r(x, s), v_0r(x, r))


def theta(x: TeichmullerPolynomial, cutoff: RationalLike) -> "PPowerSum":
    """Image ``sum_i p^(i + v_E(x_i))`` truncated below ``cutoff``."""
    return PPowerSum.build(x.p, [(i + u.s, 1) for i, u in x.terms], cutoff)


def _symmetric_mod(n: int, modulus: int) -> int:
    n %= modulus
    if 2 * n > modulus:
        n -= modulus
    return n


@dataclass(frozen=True)
class PPowerSum:
    """Normalized ``sum_e c_e p^e`` (rational ``e``), exact below ``cutoff``."""

    p: int
    cutoff: Fraction
    terms: tuple[tuple[Fraction, int], ...]

    @classmethod
    def build(cls, p: int, raw: Iterable[tuple[RationalLike, int]], cutoff: RationalLike) -> "PPowerSum":
        """Normalize arbitrary integer-coefficient terms (any sign, any size)."""
        items = []
        for e, c in raw:
            e = e if type(e) is Fraction else to_fraction(e)
            items.append((e.numerator, e.denominator, c))
        return cls._from_items(p, items, to_fraction(cutoff))

    @classmethod
    def _from_items(cls, p: int, items: Iterable[tuple[int, int, int]], cutoff: Fraction) -> "PPowerSum":
        # items are (num, den, coeff) with den > 0, not necessarily reduced
        cn, cd = cutoff.numerator, cutoff.denominator
        gcd = math.gcd
        classes: dict[tuple[int, int], dict[int, int]] = {}
        for num, den, c in items:
            if not c or num * cd >= cn * den:
                continue
            g = gcd(num, den)
            if g != 1:
                num //= g
                den //= g
            n, rem = divmod(num, den)
            digits = classes.get((rem, den))
            if digits is None:
                classes[(rem, den)] = {n: c}
            else:
                digits[n] = digits.get(n, 0) + c
        out: list[tuple[int, int, Fraction, int]] = []
        for (rem, den), digits in classes.items():
            n0 = min(digits)
            value = 0
            for n, c in digits.items():
                value += c * p ** (n - n0)
            if not value:
                continue
            # number of digit positions n0, n0+1, ... with rem/den + n < cutoff
            m = -((rem * cd - cn * den) // (den * cd)) - n0
            value = _symmetric_mod(value, p**m)
            sign = -1 if value < 0 else 1
            value = abs(value)
            n = n0
            while value:
                value, d = divmod(value, p)
                if d:
                    # integer key orders by value; exact Fraction breaks the rare ties
                    out.append((n, (rem << 64) // den, Fraction(rem + n * den, den), sign * d))
                n += 1
        out.sort()
        obj = cls.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "cutoff", cutoff)
        object.__setattr__(obj, "terms", tuple((e, c) for _, _, e, c in out))
        return obj

    @classmethod
    def zero(cls, p: int, cutoff: RationalLike) -> "PPowerSum":
        return cls.build(p, (), cutoff)

    @classmethod
    def monomial(cls, p: int, e: RationalLike, cutoff: RationalLike, c: int = 1) -> "PPowerSum":
        return cls.build(p, [(e, c)], cutoff)

    @classmethod
    def from_rational(cls, q: RationalLike, p: int, cutoff: RationalLike) -> "PPowerSum":
        """p-adic expansion of a rational, truncated below ``cutoff``."""
        q = to_fraction(q)
        cutoff = to_fraction(cutoff)
        if q == 0:
            return cls.zero(p, cutoff)
        v = ord_int(q.numerator, p) - ord_int(q.denominator, p)
        if v >= cutoff:
            return cls.zero(p, cutoff)
        a = q.numerator // p ** max(v, 0)
        b = q.denominator // p ** max(-v, 0)
        m = math.ceil(cutoff - v)
        return cls.build(p, [(v, a * pow(b, -1, p**m))], cutoff)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def valuation(self) -> Fraction:
        """Least exponent present; for a zero value this is only the lower bound ``cutoff``."""
        return self.terms[0][0] if self.terms else self.cutoff

    def _check(self, other: "PPowerSum") -> None:
        if not isinstance(other, PPowerSum):
            raise TypeError(f"expected PPowerSum, got {type(other).__name__}")
        if other.p != self.p:
            raise ValueError("p-power sums over different primes")

    def __add__(self, other: "PPowerSum") -> "PPowerSum":
        self._check(other)
        return PPowerSum.build(self.p, self.terms + other.terms, min(self.cutoff, other.cutoff))

    def __neg__(self) -> "PPowerSum":
        return PPowerSum.build(self.p, [(e, -c) for e, c in self.terms], self.cutoff)

    def __sub__(self, other: "PPowerSum") -> "PPowerSum":
        self._check(other)
        return PPowerSum.build(
            self.p, self.terms + tuple((e, -c) for e, c in other.terms), min(self.cutoff, other.cutoff)
        )

    def __mul__(self, other: "PPowerSum") -> "PPowerSum":
        return PPowerSum.sum_of_products([(1, self, other)])

    @staticmethod
    def _product_cutoff(a: "PPowerSum", b: "PPowerSum") -> Fraction:
        return min(a.cutoff + b.valuation(), b.cutoff + a.valuation())

    @classmethod
    def sum_of_products(cls, products: Iterable[tuple[int, "PPowerSum", "PPowerSum"]]) -> "PPowerSum":
        """``sum sign * a * b`` with a single normalization pass."""
        products = list(products)
        if not products:
            raise ValueError("empty sum of products has no prime or cutoff")
        p = products[0][1].p
        for _, a, b in products:
            a._check(b)
            if a.p != p:
                raise ValueError("p-power sums over different primes")
        cutoff = min(cls._product_cutoff(a, b) for _, a, b in products)
        cn, cd = cutoff.numerator, cutoff.denominator
        items = []
        for sign, a, b in products:
            b_terms = [(e.numerator, e.denominator, c) for e, c in b.terms]
            for ea, ca in a.terms:
                na, da = ea.numerator, ea.denominator
                ca *= sign
                for nb, db, cb in b_terms:
                    num = na * db + nb * da
                    den = da * db
                    # b_terms ascend, so every later product is past the cutoff too
                    if num * cd >= cn * den:
                        break
                    items.append((num, den, ca * cb))
        return cls._from_items(p, items, cutoff)

    def shift(self, j: RationalLike) -> "PPowerSum":
        """Multiply by ``p^j`` (exact; the cutoff moves with the value)."""
        j = to_fraction(j)
        # a uniform shift preserves the normal form
        return self._raw(self.p, self.cutoff + j, tuple((e + j, c) for e, c in self.terms))

    @classmethod
    def _raw(cls, p: int, cutoff: Fraction, terms: tuple) -> "PPowerSum":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "cutoff", cutoff)
        object.__setattr__(obj, "terms", terms)
        return obj

    def scale(self, q: RationalLike) -> "PPowerSum":
        """Multiply by a rational constant."""
        q = to_fraction(q)
        if q == 0:
            return PPowerSum.zero(self.p, self.cutoff)
        p = self.p
        v = ord_int(q.numerator, p) - ord_int(q.denominator, p)
        num = q.numerator // p ** max(v, 0)
        den = q.denominator // p ** max(-v, 0)
        cutoff = self.cutoff + v
        if not self.terms:
            return PPowerSum.zero(p, cutoff)
        digits = math.ceil(cutoff - (self.valuation() + v)) + 1
        inv = pow(den, -1, p ** max(digits, 1))
        return PPowerSum.build(p, [(e + v, c * num * inv) for e, c in self.terms], cutoff)

    def truncate(self, cutoff: RationalLike) -> "PPowerSum":
        cutoff = to_fraction(cutoff)
        if cutoff > self.cutoff:
            raise ValueError(f"cannot raise precision from {self.cutoff} to {cutoff}")
        if cutoff == self.cutoff:
            return self
        return PPowerSum.build(self.p, self.terms, cutoff)

    def equal_to_cutoff(self, other: "PPowerSum") -> bool:
        """Equality of normalized forms below the common cutoff."""
        self._check(other)
        c = min(self.cutoff, other.cutoff)
        return self.truncate(c).terms == other.truncate(c).terms

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "cutoff": fmt(self.cutoff),
            "terms": [[fmt(e), c] for e, c in self.terms],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PPowerSum":
        return cls.build(
            int(data["p"]),
            [(to_fraction(e), int(c)) for e, c in data["terms"]],
            to_fraction(data["cutoff"]),
        )

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*p^({e})" for e, c in self.terms) or "0"
        return f"PPowerSum({body} + O(p^{self.cutoff}), p={self.p})"
