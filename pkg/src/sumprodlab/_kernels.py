"""Pairwise counting kernels on integer-scaled data.

Every finite set of rationals becomes a set of integers after multiplying by
the lcm of its denominators.  All the counting we do (sums, differences,
products, ratios) is homogeneous under that scaling, so the kernels below
work on Python ints and switch to int64 numpy arrays whenever the values are
small enough that no intermediate can overflow.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

# |x| <= SMALL keeps x*y and x+y-z-w inside int64
SMALL = 2**30
# cap on the size of a single broadcast block
BLOCK = 1 << 22


def common_scale(*groups: Iterable[Fraction]) -> tuple[list[list[int]], int]:
    """Scale several rational collections by one common denominator."""
    groups = [list(g) for g in groups]
    den = 1
    for g in groups:
        for x in g:
            d = x.denominator
            if den % d:
                den = den * d // math.gcd(den, d)
    scaled = [[x.numerator * (den // x.denominator) for x in g] for g in groups]
    return scaled, den


def small_array(values: Sequence[int], bound: int = SMALL) -> np.ndarray | None:
    if not values:
        return np.zeros(0, dtype=np.int64)
    if max(abs(min(values)), abs(max(values))) > bound:
        return None
    return np.asarray(values, dtype=np.int64)


def _unique_counts(flat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.unique(flat, return_counts=True)


def outer_values(xs: Sequence[int], ys: Sequence[int], op: str) -> np.ndarray | None:
    """All x op y over xs × ys as a flat int64 array, or None on overflow risk."""
    x = small_array(xs)
    y = small_array(ys)
    if x is None or y is None:
        return None
    if op == "add":
        return np.add.outer(x, y).ravel()
    if op == "sub":
        return np.subtract.outer(x, y).ravel()
    if op == "mul":
        return np.multiply.outer(x, y).ravel()
    raise ValueError(op)


def _py_op(op: str):
    return {
        "add": lambda a, b: a + b,
        "sub": lambda a, b: a - b,
        "mul": lambda a, b: a * b,
    }[op]


def pair_counter(xs: Sequence[int], ys: Sequence[int], op: str) -> dict[int, int]:
    """Multiplicity map of x op y for op in add/sub/mul."""
    flat = outer_values(xs, ys, op)
    if flat is not None:
        vals, counts = _unique_counts(flat)
        return dict(zip(vals.tolist(), counts.tolist()))
    f = _py_op(op)
    return dict(Counter(f(a, b) for a in xs for b in ys))


def pair_distinct(xs: Sequence[int], ys: Sequence[int], op: str) -> list[int]:
    flat = outer_values(xs, ys, op)
    if flat is not None:
        return np.unique(flat).tolist()
    f = _py_op(op)
    return sorted({f(a, b) for a in xs for b in ys})


def pair_count_values(xs: Sequence[int], ys: Sequence[int], op: str) -> np.ndarray:
    """Only the multiplicities (no keys); cheapest route to energies."""
    flat = outer_values(xs, ys, op)
    if flat is not None:
        return _unique_counts(flat)[1]
    return np.asarray(list(pair_counter(xs, ys, op).values()), dtype=np.int64)


def _reduced_pairs(nums: np.ndarray, dens: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g = np.gcd(nums, dens)
    g[g == 0] = 1
    n = nums // g
    d = dens // g
    neg = d < 0
    n[neg] = -n[neg]
    d[neg] = -d[neg]
    return n, d


def ratio_counter(xs: Sequence[int], ys: Sequence[int]) -> dict[Fraction, int]:
    """Multiplicity map of x/y (ys must be nonzero); keys are Fractions."""
    x = small_array(xs, 2**62)
    y = small_array(ys, 2**62)
    if x is not None and y is not None and len(xs) and len(ys):
        nums = np.repeat(x, len(ys))
        dens = np.tile(y, len(xs))
        n, d = _reduced_pairs(nums, dens)
        rows, counts = np.unique(np.stack([n, d], axis=1), axis=0, return_counts=True)
        return {Fraction(int(a), int(b)): int(c) for (a, b), c in zip(rows.tolist(), counts.tolist())}
    return dict(Counter(Fraction(a, b) for a in xs for b in ys))


def ratio_count_values(xs: Sequence[int], ys: Sequence[int]) -> np.ndarray:
    x = small_array(xs, 2**62)
    y = small_array(ys, 2**62)
    if x is not None and y is not None and len(xs) and len(ys):
        nums = np.repeat(x, len(ys))
        dens = np.tile(y, len(xs))
        n, d = _reduced_pairs(nums, dens)
        # n, d are coprime with d > 0, so the pair is a canonical key
        _, counts = np.unique(np.stack([n, d], axis=1), axis=0, return_counts=True)
        return counts
    return np.asarray(list(Counter(Fraction(a, b) for a in xs for b in ys).values()), dtype=np.int64)


def sum_of_squares(counts: np.ndarray | Iterable[int]) -> int:
    return sum(int(c) * int(c) for c in np.asarray(counts).tolist())


def rational_product_count(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> int:
    """|XY| for arbitrary rational collections, without a common denominator."""
    xn = small_array([x.numerator for x in xs], SMALL)
    xd = small_array([x.denominator for x in xs], SMALL)
    yn = small_array([y.numerator for y in ys], SMALL)
    yd = small_array([y.denominator for y in ys], SMALL)
    if any(v is None for v in (xn, xd, yn, yd)):
        return len({x * y for x in xs for y in ys})
    n, d = _reduced_pairs(np.multiply.outer(xn, yn).ravel(), np.multiply.outer(xd, yd).ravel())
    return len(np.unique(np.stack([n, d], axis=1), axis=0))
