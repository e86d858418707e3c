import json
from fractions import Fraction

import pytest
from conftest import random_set

from sumprodlab import errors
from sumprodlab.refine import (
    best_dilation,
    d_recipe_witness,
    dilation_candidates,
    double_pigeonhole,
    dstar_upper_bound,
    popular_ratio_class,
    recheck,
    refine_energy_subset,
    witness_value,
)
from sumprodlab.setcore import inverse, make_set, product_set


def S(*xs):
    return make_set(xs)


def test_witness_value_and_constraints():
    A = S(1, 2, 4)
    w = witness_value(A, product_set(A, A), inverse(A), 3)
    assert w.value == Fraction(25, 9)
    assert w.is_valid()
    cases = [
        ((A, A, inverse(A), 0), "positive-t"),
        ((A, S(0, 1, 2), A, 1), "nonzero"),
        ((A, S(1), S(1), 1), "size"),
        ((A, A, inverse(A), 2), "pointwise-t"),
    ]
    for args, constraint in cases:
        with pytest.raises(errors.InvalidWitnessError) as exc:
            witness_value(*args)
        assert exc.value.constraint == constraint


def test_d_recipe_matches_formula():
    A, C = S(1, 2, 3, 5), S(1, 3)
    w = d_recipe_witness(A, C)
    assert w.value == Fraction(len(product_set(A, C)) ** 2, len(A) * len(C))


def test_dstar_upper_bound_portfolio():
    w = dstar_upper_bound(S(1, 2, 4))
    assert w.label == "C=A" and w.value == Fraction(25, 9)
    assert dstar_upper_bound(S(7)).value == 1
    with pytest.raises(errors.ZeroElementError):
        dstar_upper_bound(S(0, 1))


def test_popular_ratio_class_example():
    cert = popular_ratio_class(S(1, 2, 4))
    assert cert.P == S("1/2", 1, 2)
    assert cert.delta == 2
    assert cert.energy == 19
    assert cert.satisfied and recheck(cert) == []
    gp = popular_ratio_class(S(1, 2, 4, 8))
    assert gp.delta == Fraction(11, 4)
    assert gp.assertion("class-energy").lhs == 34


def test_refine_and_double_pigeonhole_example():
    A = S(1, 2, 4)
    cert = refine_energy_subset(A)
    assert cert.A_prime == A
    assert cert.witness.value == 216
    assert recheck(cert) == []
    dp, w = double_pigeonhole(A)
    assert dp.t == 2 and w.value == Fraction(27, 8)
    assert recheck(dp) == []
    d = json.loads(dp.to_json())
    assert d["procedure"] == "double-pigeonhole" and d["satisfied"] is True


def test_refine_preconditions():
    with pytest.raises(errors.ZeroElementError):
        popular_ratio_class(S(0, 1, 2))
    with pytest.raises(errors.PreconditionViolated):
        popular_ratio_class(S(3))


def test_tampered_certificate_is_caught():
    cert = refine_energy_subset(S(1, 2, 3, 4, 6, 8))
    cert.delta = cert.delta * 4
    assert "band" in recheck(cert)


def test_certificates_recheck_on_random_sets(rng):
    for i in range(25):
        A = random_set(rng, rng.randint(2, 20), nonzero=True, rational=i % 2 == 0)
        for cert in (popular_ratio_class(A), refine_energy_subset(A), double_pigeonhole(A)[0]):
            assert cert.satisfied, cert.to_json()
            assert recheck(cert) == [], (cert.procedure, A)


def test_best_dilation():
    ch = best_dilation(S(1, 2, 4))
    assert ch.z == Fraction(1, 2) and ch.overlap == 7
    assert ch.bound_satisfied is True
    assert dilation_candidates(S(1, 2), "inverse-elements") == [Fraction(1, 2), 1]
    wide = best_dilation(S(1, 2, 4), "ratio-times-inverse")
    assert wide.overlap >= ch.overlap
    with pytest.raises(errors.InvalidParameterError):
        dilation_candidates(S(1, 2), [0, 1])
