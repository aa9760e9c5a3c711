"""Helpers for exact rationals: parsing, "num/den" serialization, p-adic order."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

RationalLike = Union[int, str, Fraction]

_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def to_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError(f"floats are not accepted as exact rationals: {value!r}")
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        if not _RATIONAL.fullmatch(text):
            raise ValueError(f"expected an integer or num/den rational, got {value!r}")
        return Fraction(text)
    return Fraction(value)


def fmt(q: Fraction | int) -> str:
    """Serialize a rational as a "num/den" string (denominator always present)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def fmt_value(v) -> object:
    """Serialize a rational or +infinity."""
    if v == math.inf:
        return "inf"
    return fmt(v)


def ord_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("ord_p(0) is infinite")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def ord_p(q: Fraction | int, p: int) -> int:
    """p-adic order of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("ord_p(0) is infinite")
    return ord_int(q.numerator, p) - ord_int(q.denominator, p)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be a prime, got {p!r}")
    return p
