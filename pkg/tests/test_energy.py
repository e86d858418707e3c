from fractions import Fraction

import mpmath
import pytest
from conftest import (
    brute_additive_energy,
    brute_moment,
    brute_multiplicative_energy,
    brute_shifted,
    brute_third_energy,
    random_set,
)
from hypothesis import given, settings
from hypothesis import strategies as st

from sumprodlab import errors
from sumprodlab.energy import (
    additive_energy,
    energy_moment,
    energy_moment_exact,
    energy_moment_interval,
    level_set_count,
    log_additive_energy,
    multiplicative_energy,
    ratio_intersection,
    ratio_intersection_size,
    rep_histogram,
    shifted_energy_sum,
    shifted_energy_sum_bruteforce,
)
from sumprodlab.setcore import make_set

sets = st.lists(st.integers(-15, 15), min_size=1, max_size=7).map(make_set)


def S(*xs):
    return make_set(xs)


def test_histograms():
    A = S(1, 2, 3)
    h = rep_histogram(A, A, "difference")
    assert dict(h.entries) == {-2: 1, -1: 2, 0: 3, 1: 2, 2: 1}
    assert h.total == 9 and h.support_size == 5
    r = rep_histogram(S(1, 2, 4), S(1, 2, 4), "ratio")
    assert dict(r.entries) == {Fraction(1, 4): 1, Fraction(1, 2): 2, 1: 3, 2: 2, 4: 1}
    assert r.to_csv().splitlines()[0] == "value_num,value_den,count"
    with pytest.raises(errors.DivisionByZeroError):
        rep_histogram(S(1), S(0, 1), "ratio")
    with pytest.raises(errors.InvalidParameterError):
        rep_histogram(A, A, "sum")


def test_energy_desk_values():
    A = S(1, 2, 3)
    assert additive_energy(A) == 19
    assert multiplicative_energy(A) == 15
    assert energy_moment(A, 3) == 45
    assert multiplicative_energy(S(1, 2, 4)) == 19


def test_fractional_moment():
    v = energy_moment(S(0, 1), "3/2")
    with mpmath.workdps(50):
        assert abs(v - (2 * mpmath.sqrt(2) + 2)) < mpmath.mpf(10) ** -45
    iv = energy_moment_interval(S(0, 1), "3/2")
    assert 0 < iv.delta < 1e-40
    with mpmath.workdps(70):
        exact = 2 * mpmath.sqrt(2) + 2
        assert mpmath.mpf(iv.a) <= exact <= mpmath.mpf(iv.b)
    assert str(energy_moment_exact(S(0, 1), "3/2")) == "2 + 2*sqrt(2)"
    with pytest.raises(errors.InvalidParameterError):
        energy_moment(S(1), "1/2")


def test_level_sets():
    h = rep_histogram(S(1, 2, 3), S(1, 2, 3))
    assert level_set_count(h, 2) == 3
    assert level_set_count(h, 3) == 1
    with pytest.raises(errors.InvalidParameterError):
        level_set_count(h, 0)


def test_shifted_energy_desk_values():
    A = S(1, 2)
    assert shifted_energy_sum(A, A, A, "-") == 8
    assert shifted_energy_sum(A, A, A, "-", method="brute") == 8
    assert shifted_energy_sum(A, A, A, "+") == 12
    assert brute_shifted(A, A, A, "+") == 12


def test_shifted_nonzero_only():
    A = S(0, 1, 2)
    full = shifted_energy_sum(A, A, A, "+")
    nz = shifted_energy_sum(A, A, A, "+", nonzero_only=True)
    assert nz < full
    assert nz == shifted_energy_sum_bruteforce(A, A, A, "+", nonzero_only=True)


def test_ratio_intersection():
    A = S(1, 2, 4)
    assert ratio_intersection(A, 2) == S(1, 2)
    assert ratio_intersection(A, 3) is None
    assert ratio_intersection_size(A, 3) == 0
    with pytest.raises(errors.ZeroElementError):
        ratio_intersection(S(0, 1), 2)


def test_log_energy_bridge():
    A = S(1, 2, 4)
    assert log_additive_energy(A) == 19 == multiplicative_energy(A)
    B = S(2, 3, 6, "9/4", "4/3")
    assert log_additive_energy(B) == multiplicative_energy(B)
    with pytest.raises(errors.NonPositiveElementError):
        log_additive_energy(S(-1, 2))


@settings(max_examples=60, deadline=None)
@given(sets, sets)
def test_energies_match_brute_force(A, B):
    assert additive_energy(A, B) == brute_additive_energy(A, B)
    assert energy_moment(A, 2) == brute_moment(A, 2) == additive_energy(A)
    if not (A.has_zero or B.has_zero):
        assert multiplicative_energy(A, B) == brute_multiplicative_energy(A, B)


@settings(max_examples=30, deadline=None)
@given(sets)
def test_third_moment_counts_triple_solutions(A):
    assert energy_moment(A, 3) == brute_third_energy(A)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4).map(make_set),
       st.lists(st.integers(-6, 6), min_size=1, max_size=4).map(make_set),
       st.sampled_from("+-"))
def test_shifted_matches_quintuple_count(A, B, sign):
    expected = brute_shifted(A, B, A, sign)
    assert shifted_energy_sum(A, B, A, sign) == expected
    assert shifted_energy_sum(A, B, A, sign, method="brute") == expected


def test_rational_sets(rng):
    for _ in range(20):
        A = random_set(rng, 6, rational=True, nonzero=True)
        B = random_set(rng, 5, rational=True, nonzero=True)
        assert multiplicative_energy(A, B) == brute_multiplicative_energy(A, B)
        assert additive_energy(A, B) == brute_additive_energy(A, B)
