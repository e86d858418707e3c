from fractions import Fraction

from conftest import brute_collinear, brute_gk
from hypothesis import given, settings
from hypothesis import strategies as st

from sumprodlab.geometry import (
    PlanarPointSet,
    _anchor_pairs_python,
    collinear_triples,
    gk_distance_quadruples,
    gk_literal_count,
    gk_pair_sum_counts,
    grid_collinear_triples,
)
from sumprodlab.setcore import make_set


def test_grid_desk_values():
    assert grid_collinear_triples(make_set([0, 1, 2])) == 48
    assert grid_collinear_triples(make_set([0, 1])) == 0


def test_gk_desk_values():
    assert gk_distance_quadruples(make_set([0, 1])) == 96
    assert gk_distance_quadruples(make_set([0, 1, 2])) == 1329
    assert gk_distance_quadruples(make_set([5])) == 1
    assert gk_literal_count(make_set([0, 1])) == 96


def test_gk_mass_and_scale_invariance():
    A = make_set([0, 1, 3, 7])
    assert sum(gk_pair_sum_counts(A).values()) == 4**4
    halves = make_set([Fraction(x, 2) for x in A])
    assert gk_distance_quadruples(halves) == gk_distance_quadruples(A)


def test_gk_matches_eight_tuple_count():
    for vals in ([0, 1, 3], [1, 2, 4, 7], [0, 2, 3, 5, 6]):
        A = make_set(vals)
        assert gk_distance_quadruples(A) == brute_gk(A)


def test_collinear_vertical_and_rational_points():
    P = PlanarPointSet.from_points([(0, 0), (0, 1), (0, 2), ("1/2", "1/2"), (1, 1)])
    assert collinear_triples(P) == brute_collinear(P.points)


def test_python_fallback_agrees():
    P = PlanarPointSet.grid(make_set([0, 1, 2, 4]))
    xs = [int(p[0]) for p in P.points]
    ys = [int(p[1]) for p in P.points]
    assert _anchor_pairs_python(xs, ys) == collinear_triples(P)
    big = PlanarPointSet.from_points([(0, 0), (2**40, 2**40), (2**41, 2**41), (1, 5)])
    assert collinear_triples(big) == brute_collinear(big.points) == 6


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=12))
def test_collinear_matches_triple_enumeration(pts):
    P = PlanarPointSet.from_points(pts)
    assert collinear_triples(P) == brute_collinear(P.points)
