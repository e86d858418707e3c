"""Brute-force oracles shared by the tests.

These enumerate tuples directly with Fractions and never touch the
package's kernels, so agreement is evidence of correctness.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from fractions import Fraction

import pytest

from sumprodlab.setcore import GroundSet, make_set


def brute_additive_energy(A, B):
    return sum(1 for a1, b1, a2, b2 in itertools.product(A, B, A, B) if a1 - b1 == a2 - b2)


def brute_multiplicative_energy(A, B):
    return sum(1 for a1, b1, a2, b2 in itertools.product(A, B, A, B) if a1 * b2 == a2 * b1)


def brute_moment(A, k: int):
    r = Counter(a - b for a in A for b in A)
    return sum(v**k for v in r.values())


def brute_third_energy(A):
    # solutions of a1-b1 = a2-b2 = a3-b3
    diffs = [a - b for a in A for b in A]
    return sum(1 for x, y, z in itertools.product(diffs, repeat=3) if x == y == z)


def brute_shifted(A, B, C, sign="+"):
    """Quintuples (a,b,b',c,c') with b(c∓a) = b'(c'∓a)."""
    s = -1 if sign == "+" else 1
    return sum(
        1
        for a, b, bp, c, cp in itertools.product(A, B, B, C, C)
        if b * (c + s * a) == bp * (cp + s * a)
    )


def brute_gk(A):
    A = list(A)
    return sum(
        1
        for t in itertools.product(A, repeat=8)
        if (t[0] - t[1]) ** 2 + (t[2] - t[3]) ** 2 == (t[4] - t[5]) ** 2 + (t[6] - t[7]) ** 2
    )


def brute_collinear(points):
    pts = list(points)
    count = 0
    for p, q, r in itertools.permutations(pts, 3):
        if (q[0] - p[0]) * (r[1] - p[1]) == (q[1] - p[1]) * (r[0] - p[0]):
            count += 1
    return count


def random_set(rng: random.Random, size: int, lo=-30, hi=30, nonzero=False, rational=False) -> GroundSet:
    vals = set()
    while len(vals) < size:
        v = Fraction(rng.randint(lo, hi), rng.randint(1, 4) if rational else 1)
        if nonzero and v == 0:
            continue
        vals.add(v)
    return make_set(vals)


@pytest.fixture
def rng():
    return random.Random(12345)
