"""Representation functions and energies.

All integer energies are exact Python ints.  Fractional moments are returned
as 50-digit mpmath numbers; :func:`energy_moment_interval` gives a rigorous
enclosure for use in inequality checks.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import mpmath
import numpy as np
import sympy

from . import _kernels as K
from .errors import DivisionByZeroError, InvalidParameterError, NonPositiveElementError, ZeroDilationError, ZeroElementError
from .setcore import GroundSet, Number, to_rational

MOMENT_DPS = 50


@dataclass(frozen=True)
class RepHistogram:
    """x -> r(x) for r_{A-B} ("difference") or r_{A/B} ("ratio")."""

    kind: str
    entries: Mapping[Fraction, int]
    size_a: int
    size_b: int

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    @property
    def support_size(self) -> int:
        return len(self.entries)

    def __getitem__(self, x: Number) -> int:
        return self.entries.get(to_rational(x), 0)

    def profile(self) -> Counter:
        """multiplicity -> number of x with that multiplicity."""
        return Counter(self.entries.values())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value_num", "value_den", "count"])
        for x, c in self.entries.items():
            w.writerow([x.numerator, x.denominator, c])
        return buf.getvalue()


def rep_histogram(A: GroundSet, B: GroundSet, kind: str = "difference") -> RepHistogram:
    (a, b), den = K.common_scale(A.elements, B.elements)
    if kind == "difference":
        raw = K.pair_counter(a, b, "sub")
        entries = {Fraction(v, den): c for v, c in sorted(raw.items())}
    elif kind == "ratio":
        if B.has_zero:
            raise DivisionByZeroError("ratio histogram: 0 in the denominator set")
        raw = K.ratio_counter(a, b)
        # float rounding is monotone, so the exact Fraction only breaks float ties
        entries = dict(sorted(raw.items(), key=lambda kv: (float(kv[0]), kv[0])))
    else:
        raise InvalidParameterError(f"kind must be 'difference' or 'ratio', got {kind!r}")
    return RepHistogram(kind, entries, len(A), len(B))


def _difference_counts(A: GroundSet, B: GroundSet) -> np.ndarray:
    (a, b), _ = K.common_scale(A.elements, B.elements)
    return K.pair_count_values(a, b, "sub")


def _ratio_counts(A: GroundSet, B: GroundSet) -> np.ndarray:
    (a, b), _ = K.common_scale(A.elements, B.elements)
    return K.ratio_count_values(a, b)


def additive_energy(A: GroundSet, B: GroundSet | None = None) -> int:
    """E+(A,B): solutions of a1 - b1 = a2 - b2."""
    return K.sum_of_squares(_difference_counts(A, A if B is None else B))


def multiplicative_energy(A: GroundSet, B: GroundSet | None = None) -> int:
    """E×(A,B): solutions of a1/b1 = a2/b2; needs 0 outside A and B."""
    B = A if B is None else B
    if A.has_zero or B.has_zero:
        raise DivisionByZeroError("multiplicative energy needs 0 outside A ∪ B")
    return K.sum_of_squares(_ratio_counts(A, B))


def _moment_from_profile(profile: Mapping[int, int], k: Fraction):
    if k.denominator == 1:
        p = int(k)
        return sum(mult * r**p for r, mult in profile.items())
    with mpmath.workdps(MOMENT_DPS):
        kk = mpmath.mpf(k.numerator) / k.denominator
        return mpmath.fsum(mult * mpmath.power(r, kk) for r, mult in sorted(profile.items()))


def _check_moment(k) -> Fraction:
    k = to_rational(k) if not isinstance(k, float) else Fraction(k).limit_denominator(1000)
    if k < 1:
        raise InvalidParameterError("energy moments need k >= 1")
    return k


def energy_moment(A: GroundSet, k: Number | float):
    """E_k+(A) = sum_x r_{A-A}(x)^k; an int for integral k, else a 50-digit mpf."""
    k = _check_moment(k)
    profile = Counter(_difference_counts(A, A).tolist())
    return _moment_from_profile(profile, k)


def energy_moment_interval(A: GroundSet, k: Number | float, dps: int = MOMENT_DPS):
    """Rigorous mpmath.iv enclosure of E_k+(A)."""
    k = _check_moment(k)
    profile = Counter(_difference_counts(A, A).tolist())
    return profile_moment_interval(profile, k, dps)


def profile_moment_interval(profile: Mapping[int, int], k: Fraction, dps: int = MOMENT_DPS):
    from .bounds import iv_dps

    with iv_dps(dps) as iv:
        kk = iv.mpf(k.numerator) / k.denominator
        total = iv.mpf(0)
        for r, mult in sorted(profile.items()):
            total += mult * iv.mpf(r) ** kk
        return total


def energy_moment_exact(A: GroundSet, k: Number) -> sympy.Expr:
    """Closed-form algebraic value of E_k+(A) (used to settle exact ties)."""
    k = _check_moment(k)
    profile = Counter(_difference_counts(A, A).tolist())
    kk = sympy.Rational(k.numerator, k.denominator)
    return sympy.Add(*[mult * sympy.Integer(r) ** kk for r, mult in sorted(profile.items())])


def level_set_count(h: RepHistogram, tau) -> int:
    """|{x : r(x) >= tau}|."""
    if tau < 1:
        raise InvalidParameterError("level_set_count needs tau >= 1")
    return sum(1 for c in h.entries.values() if c >= tau)


def _shift_values(C: GroundSet, a: Fraction, sign: str) -> list[Fraction]:
    # sign follows b(c ∓ a): '+' subtracts a, '-' adds it
    if sign == "+":
        return [c - a for c in C]
    if sign == "-":
        return [c + a for c in C]
    raise InvalidParameterError(f"sign must be '+' or '-', got {sign!r}")


def shifted_energy_sum(
    A: GroundSet,
    B: GroundSet,
    C: GroundSet,
    sign: str = "+",
    *,
    nonzero_only: bool = False,
    method: str = "histogram",
) -> int:
    """Sum over a in A of the solutions of b(c ∓ a) = b'(c' ∓ a).

    ``sign='+'`` gives the C - a shifts, ``sign='-'`` the C + a shifts.  Zero
    products are counted unless ``nonzero_only`` is set.  ``method='brute'``
    runs the 5-tuple enumeration instead of the product histogram.
    """
    if method == "brute":
        return shifted_energy_sum_bruteforce(A, B, C, sign, nonzero_only=nonzero_only)
    if method != "histogram":
        raise InvalidParameterError(f"unknown method {method!r}")
    total = 0
    for a in A:
        (bs, cs), den = K.common_scale(B.elements, _shift_values(C, a, sign))
        counts = K.pair_counter(bs, cs, "mul")
        if nonzero_only:
            counts.pop(0, None)
        total += K.sum_of_squares(list(counts.values()))
    return total


def shifted_energy_sum_bruteforce(
    A: GroundSet, B: GroundSet, C: GroundSet, sign: str = "+", *, nonzero_only: bool = False
) -> int:
    """Direct count over A × B × B × C × C.

    For each (a, b, b', c) the equation is solved for c' and membership is
    checked, so every quintuple is counted without any histogram.
    """
    total = 0
    for a in A:
        (bs, cs), _ = K.common_scale(B.elements, _shift_values(C, a, sign))
        b = K.small_array(bs)
        c = K.small_array(cs)
        if b is None or c is None:
            total += _shifted_python(bs, cs, nonzero_only)
            continue
        lhs = (b[:, None] * c[None, :]).ravel()  # b*(c∓a) over (b, c)
        csorted = np.sort(c)
        nz = b[b != 0]
        if len(nz) < len(b) and not nonzero_only:
            # b' = 0 matches every c' exactly when the product is 0
            total += int(np.count_nonzero(lhs == 0)) * len(cs)
        if len(nz):
            grid = lhs[:, None]
            divisible = grid % nz[None, :] == 0
            quot = np.where(divisible, grid // nz[None, :], csorted[0])
            pos = np.minimum(np.searchsorted(csorted, quot), len(csorted) - 1)
            found = divisible & (csorted[pos] == quot)
            if nonzero_only:
                found &= grid != 0
            total += int(np.count_nonzero(found))
    return total


def _shifted_python(bs: list[int], cs: list[int], nonzero_only: bool) -> int:
    cset = set(cs)
    total = 0
    for b in bs:
        for c in cs:
            v = b * c
            if nonzero_only and v == 0:
                continue
            for bp in bs:
                if bp == 0:
                    total += len(cs) if v == 0 else 0
                elif v % bp == 0 and v // bp in cset:
                    total += 1
    return total


def ratio_intersection(A: GroundSet, x: Number) -> GroundSet | None:
    """A_x = A ∩ x^{-1}A; returns None when empty (|A_x| = 0)."""
    x = to_rational(x)
    if x == 0:
        raise ZeroDilationError("ratio_intersection needs x != 0")
    if A.has_zero:
        raise ZeroElementError("ratio_intersection needs 0 outside A")
    keep = [a for a in A if a * x in A.members]
    return GroundSet(keep, _trusted=True) if keep else None


def ratio_intersection_size(A: GroundSet, x: Number) -> int:
    s = ratio_intersection(A, x)
    return 0 if s is None else len(s)


def _exponent_vector(q: Fraction, primes: list[int]) -> tuple[int, ...]:
    num = sympy.factorint(q.numerator)
    den = sympy.factorint(q.denominator)
    return tuple(num.get(p, 0) - den.get(p, 0) for p in primes)


def log_additive_energy(A: GroundSet) -> int:
    """Additive energy of the formal logarithms of a positive set.

    Each a is mapped to its prime exponent vector, so log a1 - log b1 =
    log a2 - log b2 becomes an exact vector identity.  Equals E×(A).
    """
    if not A.is_positive:
        raise NonPositiveElementError("formal logarithms need positive elements")
    primes: set[int] = set()
    for a in A:
        primes.update(sympy.factorint(a.numerator))
        primes.update(sympy.factorint(a.denominator))
    plist = sorted(primes)
    vecs = [_exponent_vector(a, plist) for a in A]
    diffs = Counter(tuple(x - y for x, y in zip(u, v)) for u in vecs for v in vecs)
    return sum(c * c for c in diffs.values())
