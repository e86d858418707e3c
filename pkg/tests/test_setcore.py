import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumprodlab import errors
from sumprodlab.setcore import (
    GroundSet,
    best_pinned,
    composite_expander,
    composite_expander_size,
    difference_set,
    dilate,
    five_var_expander_size,
    five_var_float_check,
    inverse,
    iterated_sumset,
    make_set,
    pinned_product,
    pinned_product_size,
    product_set,
    ratio_set,
    read_set_file,
    sumset,
    to_rational,
    translate,
    write_set_file,
)

small_sets = st.lists(
    st.fractions(min_value=-20, max_value=20, max_denominator=5), min_size=1, max_size=8
).map(make_set)


def S(*xs):
    return make_set(xs)


def test_to_rational_forms():
    assert to_rational(3) == 3
    assert to_rational("3/6") == Fraction(1, 2)
    assert to_rational(" -4 ") == -4
    for bad in (0.5, True, "1/0", "x", "1/-2"):
        with pytest.raises(errors.InvalidParameterError):
            to_rational(bad)


def test_groundset_dedup_and_order():
    A = make_set([3, 1, "2/2", 2])
    assert A.elements == (1, 2, 3)
    assert A.duplicates_removed == 1
    with pytest.raises(errors.EmptySetError):
        make_set([])


def test_basic_operations():
    A = S(1, 2, 3)
    assert sumset(A, A) == S(2, 3, 4, 5, 6)
    assert product_set(A, A) == S(1, 2, 3, 4, 6, 9)
    assert difference_set(S(1, 2), S(1, 2)) == S(-1, 0, 1)
    assert ratio_set(S(1, 2), S(1, 2)) == S("1/2", 1, 2)
    assert translate(A, "1/2") == S("3/2", "5/2", "7/2")
    assert dilate(A, -2) == S(-6, -4, -2)
    assert inverse(S(1, 2, 4)) == S("1/4", "1/2", 1)


def test_errors_on_zero():
    with pytest.raises(errors.DivisionByZeroError):
        ratio_set(S(1), S(0, 1))
    with pytest.raises(errors.ZeroDilationError):
        dilate(S(1), 0)
    with pytest.raises(ZeroDivisionError):
        inverse(S(0, 1))


def test_pinned_products():
    A = S(1, 2, 3)
    r = pinned_product(A, 1)
    assert r.cardinality == 7
    assert r.set == S(2, 3, 4, 6, 8, 9, 12)
    assert pinned_product_size(A, 2) == 9
    assert best_pinned(A) == (2, 9)
    assert pinned_product(S(1, 2), 1, "-").set == S(0, 1, 2)


def test_composite_expanders():
    assert composite_expander(S(1, 2), "difference").set == S(-2, -1, 0, 1, 2)
    A = S(1, 2, 3)
    assert composite_expander_size(A, "sum") == len({a * (b + c) for a in A for b in A for c in A})


def test_five_var_desk_values():
    assert five_var_expander_size(S(1, 2)) == 10
    assert five_var_expander_size(S(1, 2, 3)) == 27
    chk = five_var_float_check(S(1, 2, 3))
    assert chk.distinct == 27 and not chk.flagged
    assert five_var_float_check(S(1, 2)).distinct == 10
    with pytest.raises(errors.NonPositiveElementError):
        five_var_expander_size(S(0, 1))


def test_five_var_interval_closed_form():
    for n in (4, 9, 17):
        assert five_var_expander_size(make_set(range(1, n + 1))) == (4 * n - 3) * n


def test_iterated_sumset():
    A = S(0, 1, 5)
    brute = {sum(t) for t in itertools.product(A, repeat=3)}
    assert iterated_sumset(A, 3) == make_set(brute)


def test_set_file_roundtrip(tmp_path):
    p = tmp_path / "a.txt"
    p.write_text("# header\n1\n\n3/4\n-2\n")
    A = read_set_file(p)
    assert A == S(-2, "3/4", 1)
    write_set_file(A, tmp_path / "b.txt", "copy")
    assert read_set_file(tmp_path / "b.txt") == A
    (tmp_path / "bad.txt").write_text("1\n0.5\n")
    with pytest.raises(errors.InvalidParameterError, match="bad.txt:2"):
        read_set_file(tmp_path / "bad.txt")


@settings(max_examples=60, deadline=None)
@given(small_sets, small_sets)
def test_pairwise_ops_match_definitions(A, B):
    assert set(sumset(A, B)) == {a + b for a in A for b in B}
    assert set(difference_set(A, B)) == {a - b for a in A for b in B}
    assert set(product_set(A, B)) == {a * b for a in A for b in B}
    if not B.has_zero:
        assert set(ratio_set(A, B)) == {a / b for a in A for b in B}


@settings(max_examples=40, deadline=None)
@given(small_sets, st.fractions(min_value=-5, max_value=5, max_denominator=3))
def test_pinned_size_matches_materialized(A, a):
    for sign in "+-":
        assert pinned_product_size(A, a, sign) == pinned_product(A, a, sign).cardinality


def test_large_values_use_python_path():
    A = S(2**40, 2**41 + 1, 3)
    assert set(product_set(A, A)) == {a * b for a in A for b in A}
    assert GroundSet([1]).is_positive
