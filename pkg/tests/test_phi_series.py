from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from isolab.errors import RankUncertain, RelationMismatch
from isolab.isocrystal import Isocrystal
from isolab.phi_series import (
    EXAMPLE_PATTERN,
    HomCandidate,
    PhiSeries,
    bad_locus_point,
    example_candidate,
    phi_apply,
    plucker,
    proportional_by,
    theta_exponents,
    theta_of_phi_power,
    verify_hom,
)

F = Fraction
x = PhiSeries.phi_power(0)


def test_phi_apply_examples():
    assert phi_apply(x, 10) == PhiSeries.build(10, 1, [(0, 1, 1)])
    assert phi_apply(x, 0) == x
    assert phi_apply(x, 25) == PhiSeries.build(10, 1, [(5, 2, 1)])
    assert phi_apply(x, -3) == PhiSeries.build(10, 1, [(7, -1, 1)])
    assert str(phi_apply(x, 25)) == "p^2*phi^5(x)"


def test_normal_form():
    s = PhiSeries.build(10, 1, [(3, 0, 1), (13, -1, 1), (3, 0, F(-2))])
    assert s.is_zero()
    assert PhiSeries.build(4, -2, [(9, 0, 3)]).terms == (((1, -4), F(3)),)
    with pytest.raises(ValueError):
        PhiSeries.build(0, 1, [])


def test_relation_mismatch():
    with pytest.raises(RelationMismatch):
        PhiSeries.phi_power(1, 10, 1) + PhiSeries.phi_power(1, 5, 1)
    with pytest.raises(RelationMismatch):
        HomCandidate(((PhiSeries.phi_power(0, 10, 1),), (PhiSeries.phi_power(0, 3, 1),)), (0, 1), Isocrystal(2, [(0, 1), (1, 1)]))


series = st.builds(
    lambda raw: PhiSeries.build(10, 1, raw),
    st.lists(st.tuples(st.integers(-30, 30), st.integers(-3, 3), st.integers(-3, 3)), max_size=5),
)


@given(series, st.integers(-40, 40), st.integers(-40, 40))
def test_phi_apply_composes(s, k, m):
    assert phi_apply(phi_apply(s, k), m) == phi_apply(s, k + m)


@given(series, series, st.integers(-15, 15))
def test_phi_apply_is_additive(a, b, k):
    assert phi_apply(a + b, k) == phi_apply(a, k) + phi_apply(b, k)
    assert (a - a).is_zero()


def test_verify_hom_examples():
    assert verify_hom(example_candidate()).ok
    assert verify_hom(example_candidate(3)).ok
    swapped = list(EXAMPLE_PATTERN)
    swapped[0], swapped[1] = swapped[1], swapped[0]
    check = verify_hom(example_candidate(pattern=swapped))
    assert not check.ok
    assert any(i == 0 for i, _ in check.nonzero_positions())
    trivial = HomCandidate(((PhiSeries.phi_power(0, 1, 0),),), (0, 1), Isocrystal(2, [(0, 1)]))
    assert verify_hom(trivial).ok


@pytest.mark.parametrize("m", [-3, -1, 1, 4])
def test_verify_hom_invariant_under_p_power(m):
    cand = example_candidate()
    scaled = HomCandidate(
        tuple(tuple(e.times({m: F(1)}) for e in row) for row in cand.entries), cand.source, cand.target
    )
    assert verify_hom(scaled).ok
    halved = HomCandidate(
        tuple(tuple(e.times({0: F(1, 2)}) for e in row) for row in cand.entries), cand.source, cand.target
    )
    assert verify_hom(halved).ok


def test_verify_hom_shape_error():
    cand = example_candidate()
    with pytest.raises(ValueError):
        verify_hom(HomCandidate(cand.entries[:4], cand.source, cand.target))


def test_candidate_json_round_trip():
    cand = example_candidate()
    data = cand.to_json()
    assert data["relation"] == [10, 1]
    again = HomCandidate.from_json(data)
    assert again == cand
    compact = dict(data, entries=[list(row) for row in EXAMPLE_PATTERN])
    assert HomCandidate.from_json(compact) == cand


def test_theta_examples():
    t = theta_of_phi_power(0, 1, 2, 2)
    assert t.terms == ((F(1), 1), (1 + F(1, 2**10), 1))
    assert theta_of_phi_power(3, 5, F(1, 2), 2).is_zero()


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("s", [F(1), F(3, 2), F(7, 5)])
def test_theta_index_shift(p, s):
    for k in (0, 4, 11):
        lo = theta_of_phi_power(k, s, 20, p)
        hi = theta_of_phi_power(k + 10, s, 21, p)
        assert lo.shift(1).equal_to_cutoff(hi)


def test_theta_exponents_are_exact():
    # a brute-force window of nu reproduces the enumerated exponents
    p, k, s, cutoff = 3, 7, F(5, 2), F(18)
    brute = sorted(
        (nu, nu + s * F(p) ** (k - 10 * nu)) for nu in range(-5, 40) if nu + s * F(p) ** (k - 10 * nu) < cutoff
    )
    assert theta_exponents(k, s, cutoff, p) == brute
    with pytest.raises(ValueError):
        theta_exponents(0, F(0), cutoff, p)


def test_bad_locus_point_is_certified_and_admissible():
    from isolab.filtered import weak_admissible

    L = bad_locus_point(1, 40, 2)
    assert (L.h, L.dim) == (5, 2)
    assert weak_admissible(Isocrystal(2, [(-3, 5)]), L).admissible
    L2 = bad_locus_point(2**10, 40, 2)
    assert proportional_by(plucker(L), plucker(L2), 2)
    assert not proportional_by(plucker(L), plucker(L2), 1)


def test_bad_locus_needs_precision():
    with pytest.raises(RankUncertain):
        bad_locus_point(1, 2, 2)
