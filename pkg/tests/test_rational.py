from fractions import Fraction

import pytest

from isolab._rational import check_prime, fmt, fmt_value, ord_p, to_fraction


def test_parsing():
    assert to_fraction("-3/5") == Fraction(-3, 5)
    assert to_fraction("−3/5") == Fraction(-3, 5)
    assert to_fraction(" 7 ") == 7
    for bad in ("0.5", "1e3", "1/0x", "a"):
        with pytest.raises(ValueError):
            to_fraction(bad)
    with pytest.raises(TypeError):
        to_fraction(0.5)
    with pytest.raises(TypeError):
        to_fraction(True)


def test_serialization():
    assert fmt(3) == "3/1"
    assert fmt(Fraction(-6, 4)) == "-3/2"
    assert fmt_value(float("inf")) == "inf"


def test_ord_and_primes():
    assert ord_p(Fraction(12, 5), 2) == 2
    assert ord_p(Fraction(5, 8), 2) == -3
    with pytest.raises(ValueError):
        ord_p(0, 2)
    with pytest.raises(ValueError):
        check_prime(9)
    assert check_prime(7) == 7
