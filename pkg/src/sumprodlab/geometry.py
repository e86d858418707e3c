"""Collinear triples in planar point sets and distance-quadruple counts."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels as K
from .setcore import GroundSet, Number, to_rational


@dataclass(frozen=True)
class PlanarPointSet:
    points: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def from_points(cls, pts: Iterable[tuple[Number, Number]]) -> "PlanarPointSet":
        seen = dict.fromkeys((to_rational(x), to_rational(y)) for x, y in pts)
        return cls(tuple(seen))

    @classmethod
    def grid(cls, A: GroundSet, B: GroundSet | None = None) -> "PlanarPointSet":
        B = A if B is None else B
        return cls(tuple((x, y) for x in A for y in B))

    def __len__(self) -> int:
        return len(self.points)


def _scaled_coords(P: PlanarPointSet) -> tuple[list[int], list[int]]:
    (xs, ys), _ = K.common_scale([p[0] for p in P.points], [p[1] for p in P.points])
    return xs, ys


def _anchor_pairs_python(xs: list[int], ys: list[int]) -> int:
    total = 0
    n = len(xs)
    for i in range(n):
        dirs: Counter = Counter()
        for j in range(n):
            if i == j:
                continue
            dx, dy = xs[j] - xs[i], ys[j] - ys[i]
            g = math.gcd(dx, dy)
            dx, dy = dx // g, dy // g
            if dx < 0 or (dx == 0 and dy < 0):
                dx, dy = -dx, -dy
            dirs[(dx, dy)] += 1
        total += sum(m * (m - 1) for m in dirs.values())
    return total


def collinear_triples(P: PlanarPointSet) -> int:
    """Ordered triples of pairwise-distinct collinear points.

    For every anchor p the other points are grouped by primitive direction
    (vertical lines are the dx = 0 class); a class of size m contributes the
    m(m-1) ordered pairs (q, r) that complete a triple starting at p.
    """
    n = len(P)
    if n < 3:
        return 0
    xs, ys = _scaled_coords(P)
    span = max(max(xs) - min(xs), max(ys) - min(ys))
    if span >= 2**30:
        return _anchor_pairs_python(xs, ys)
    x = np.asarray(xs, dtype=np.int64)
    y = np.asarray(ys, dtype=np.int64)
    width = 2 * span + 1
    total = 0
    for i in range(n):
        dx = np.delete(x - x[i], i)
        dy = np.delete(y - y[i], i)
        g = np.gcd(dx, dy)
        dx //= g
        dy //= g
        flip = (dx < 0) | ((dx == 0) & (dy < 0))
        dx[flip] = -dx[flip]
        dy[flip] = -dy[flip]
        keys = dx * width + (dy + span)
        _, m = np.unique(keys, return_counts=True)
        total += int(np.dot(m, m - 1))
    return total


def grid_collinear_triples(A: GroundSet) -> int:
    """Collinear triples in A × A."""
    return collinear_triples(PlanarPointSet.grid(A))


def squared_difference_histogram(A: GroundSet) -> dict[int, int]:
    """(a - b)^2 over ordered pairs, in units of 1/D^2 for the set's scale D."""
    ints, _ = A.scaled
    raw = K.pair_counter(ints, ints, "sub")
    out: Counter = Counter()
    for d, c in raw.items():
        out[d * d] += c
    return dict(sorted(out.items()))


def gk_pair_sum_counts(A: GroundSet) -> dict[int, int]:
    """s -> #{(a1,a2,a3,a4) : (a1-a2)^2 + (a3-a4)^2 = s} (scaled units)."""
    hist = squared_difference_histogram(A)
    vals = list(hist)
    counts = list(hist.values())
    v = K.small_array(vals, 2**60)
    if v is not None:
        c = np.asarray(counts, dtype=np.int64)
        sums = np.add.outer(v, v).ravel()
        weights = np.multiply.outer(c, c).ravel()
        order = np.argsort(sums, kind="stable")
        sums, weights = sums[order], weights[order]
        starts = np.flatnonzero(np.r_[True, sums[1:] != sums[:-1]])
        totals = np.add.reduceat(weights, starts)
        out = dict(zip(sums[starts].tolist(), totals.tolist()))
    else:
        acc: Counter = Counter()
        for s, cs in hist.items():
            for t, ct in hist.items():
                acc[s + t] += cs * ct
        out = dict(sorted(acc.items()))
    n = len(A)
    if sum(out.values()) != n**4:
        raise AssertionError("pair-sum histogram lost mass")
    return out


def gk_distance_quadruples(A: GroundSet) -> int:
    """Solutions of (a1-a2)^2 + (a3-a4)^2 = (a5-a6)^2 + (a7-a8)^2 over A^8."""
    return sum(c * c for c in gk_pair_sum_counts(A).values())


def gk_literal_count(A: GroundSet) -> int:
    """Solutions of (a1-a2)^2 + (a2-a4)^4 = (a5-a6)^2 + (a7-a8)^2 over A^8.

    This is the equation exactly as displayed in the source; a3 does not
    occur, so it contributes a free factor |A|.
    """
    # mixed powers: rescaling is not homogeneous, so work with exact rationals
    elems = list(A)
    right = Counter()
    sq = [(p - q) ** 2 for p in elems for q in elems]
    for s in sq:
        for t in sq:
            right[s + t] += 1
    total = 0
    for a1 in elems:
        for a2 in elems:
            for a4 in elems:
                total += right.get((a1 - a2) ** 2 + (a2 - a4) ** 4, 0)
    return total * len(elems)
