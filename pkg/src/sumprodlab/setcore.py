"""Finite sets of rationals and the set algebra built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Union

from . import _kernels as K
from .errors import (
    DivisionByZeroError,
    EmptySetError,
    InvalidParameterError,
    NonPositiveElementError,
    ZeroDilationError,
)

Number = Union[int, Fraction, str]


def to_rational(value: Number) -> Fraction:
    """Parse an int, Fraction or "p/q" string into a normalized Fraction.

    Floats are rejected: a binary float is rarely the rational the caller meant.
    """
    if isinstance(value, bool):
        raise InvalidParameterError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                p, q = text.split("/")
                p, q = int(p), int(q)
                if q <= 0:
                    raise InvalidParameterError(f"denominator must be positive: {value!r}")
                return Fraction(p, q)
            return Fraction(int(text))
        except ValueError as exc:
            raise InvalidParameterError(f"not a rational: {value!r}") from exc
    raise InvalidParameterError(f"not a rational: {value!r}")


class GroundSet:
    """Immutable, sorted, duplicate-free finite set of rationals."""

    __slots__ = ("elements", "duplicates_removed", "__dict__")

    def __init__(self, values: Iterable[Number], *, _trusted: bool = False):
        if _trusted:
            elems = tuple(values)
            removed = 0
        else:
            raw = [to_rational(v) for v in values]
            elems = tuple(sorted(set(raw)))
            removed = len(raw) - len(elems)
        if not elems:
            raise EmptySetError("a GroundSet needs at least one element")
        self.elements: tuple[Fraction, ...] = elems
        self.duplicates_removed: int = removed

    @classmethod
    def _from_scaled(cls, ints: Iterable[int], den: int) -> "GroundSet":
        vals = sorted(set(ints))
        if den == 1:
            return cls((Fraction(v) for v in vals), _trusted=True)
        return cls((Fraction(v, den) for v in vals), _trusted=True)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.members

    def __eq__(self, other) -> bool:
        if isinstance(other, GroundSet):
            return self.elements == other.elements
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        inner = ", ".join(str(x) for x in self.elements[:12])
        if len(self) > 12:
            inner += f", ... ({len(self)} total)"
        return f"GroundSet({{{inner}}})"

    @cached_property
    def members(self) -> frozenset[Fraction]:
        return frozenset(self.elements)

    @cached_property
    def scaled(self) -> tuple[list[int], int]:
        """(integers, D) with elements == integers / D and D minimal."""
        (ints,), den = K.common_scale(self.elements)
        return ints, den

    @property
    def has_zero(self) -> bool:
        return self.elements[0] <= 0 <= self.elements[-1] and Fraction(0) in self.members

    @property
    def is_positive(self) -> bool:
        return self.elements[0] > 0

    def to_strings(self) -> list[str]:
        return [str(x) for x in self.elements]


def make_set(values: Iterable[Number]) -> GroundSet:
    """Build a GroundSet; ``duplicates_removed`` reports the collisions."""
    return GroundSet(values)


def singleton(x: Number) -> GroundSet:
    return GroundSet([x])


def _pairwise(A: GroundSet, B: GroundSet, op: str) -> GroundSet:
    (a, b), den = K.common_scale(A.elements, B.elements)
    vals = K.pair_distinct(a, b, op)
    # a*b carries den**2
    return GroundSet._from_scaled(vals, den * den if op == "mul" else den)


def sumset(A: GroundSet, B: GroundSet) -> GroundSet:
    return _pairwise(A, B, "add")


def difference_set(A: GroundSet, B: GroundSet) -> GroundSet:
    return _pairwise(A, B, "sub")


def product_set(A: GroundSet, B: GroundSet) -> GroundSet:
    return _pairwise(A, B, "mul")


def ratio_set(A: GroundSet, B: GroundSet) -> GroundSet:
    if B.has_zero:
        raise DivisionByZeroError("ratio_set: 0 is in the denominator set")
    (a, b), _ = K.common_scale(A.elements, B.elements)
    return GroundSet(sorted(K.ratio_counter(a, b)), _trusted=True)


def translate(A: GroundSet, c: Number) -> GroundSet:
    c = to_rational(c)
    return GroundSet((x + c for x in A), _trusted=True)


def dilate(A: GroundSet, z: Number) -> GroundSet:
    z = to_rational(z)
    if z == 0:
        raise ZeroDilationError("dilate: z must be nonzero")
    out = (x * z for x in A)
    if z > 0:
        return GroundSet(out, _trusted=True)
    return GroundSet(reversed(list(out)), _trusted=True)


def inverse(A: GroundSet) -> GroundSet:
    """A^{-1} = {1/a}."""
    if A.has_zero:
        raise DivisionByZeroError("inverse: 0 in set")
    return GroundSet(sorted(1 / x for x in A), _trusted=True)


def intersection(A: GroundSet, B: GroundSet) -> frozenset[Fraction]:
    small, big = (A, B) if len(A) <= len(B) else (B, A)
    return frozenset(x for x in small if x in big.members)


def iterated_sumset(A: GroundSet, k: int) -> GroundSet:
    """k-fold sumset A+...+A, deduplicating after every step."""
    if k < 1:
        raise InvalidParameterError("iterated_sumset needs k >= 1")
    ints, den = A.scaled
    acc = ints
    for _ in range(k - 1):
        acc = K.pair_distinct(acc, ints, "add")
    return GroundSet._from_scaled(acc, den)


@dataclass(frozen=True)
class ExpanderResult:
    """Cardinality of an expander, with the set itself when materialized."""

    descriptor: str
    cardinality: int
    set: GroundSet | None = None

    def __post_init__(self):
        if self.set is not None and len(self.set) != self.cardinality:
            raise ValueError("cardinality disagrees with the stored set")


def pinned_product(A: GroundSet, a: Number, sign: str = "+") -> ExpanderResult:
    """A(A+a) for sign '+', A(A-a) for sign '-'."""
    a = to_rational(a)
    if sign not in "+-" or len(sign) != 1:
        raise InvalidParameterError(f"sign must be '+' or '-', got {sign!r}")
    shifted = translate(A, a if sign == "+" else -a)
    s = product_set(A, shifted)
    return ExpanderResult(f"pinned-product({sign}{a})", len(s), s)


def pinned_product_size(A: GroundSet, a: Number, sign: str = "+") -> int:
    """|A(A±a)| without materializing Fractions."""
    a = to_rational(a)
    shift = a if sign == "+" else -a
    (xs, ys), den = K.common_scale(A.elements, [x + shift for x in A])
    return len(K.pair_distinct(xs, ys, "mul"))


def best_pinned(A: GroundSet, sign: str = "+") -> tuple[Fraction, int]:
    """The a in A maximizing |A(A±a)|; ties go to the smallest a."""
    best = None
    for a in A:
        size = pinned_product_size(A, a, sign)
        if best is None or size > best[1]:
            best = (a, size)
    return best


def composite_expander(A: GroundSet, inner: str = "sum") -> ExpanderResult:
    """A(A+A) or A(A-A)."""
    if inner == "sum":
        s = product_set(A, sumset(A, A))
        return ExpanderResult("A(A+A)", len(s), s)
    if inner == "difference":
        s = product_set(A, difference_set(A, A))
        return ExpanderResult("A(A-A)", len(s), s)
    raise InvalidParameterError(f"inner must be 'sum' or 'difference', got {inner!r}")


def composite_expander_size(A: GroundSet, inner: str = "sum") -> int:
    ints, den = A.scaled
    op = "add" if inner == "sum" else "sub"
    if inner not in ("sum", "difference"):
        raise InvalidParameterError(f"inner must be 'sum' or 'difference', got {inner!r}")
    inner_vals = K.pair_distinct(ints, ints, op)
    return len(K.pair_distinct(ints, inner_vals, "mul"))


def five_var_expander_size(A: GroundSet) -> int:
    """|{(a1+a2+a3+a4)^2 + log a5}| for a set of positive rationals.

    log a and log a' differ by a rational only when a = a' (log of a rational
    other than 1 is transcendental), so the set splits as a product of the
    distinct squares of 4A with A.
    """
    if not A.is_positive:
        raise NonPositiveElementError("five_var_expander_size needs A ⊂ (0, ∞)")
    fourfold = iterated_sumset(A, 4)
    # positive sums have distinct squares
    squares = {s * s for s in fourfold}
    return len(squares) * len(A)


@dataclass(frozen=True)
class FloatCrossCheck:
    distinct: int
    min_gap: float
    flagged: tuple[tuple[tuple, tuple], ...]


def five_var_float_check(A: GroundSet, tol: float = 1e-9) -> FloatCrossCheck:
    """Enumerate every 5-tuple in floating point and cluster at ``tol``.

    Values closer than ``tol`` whose exact keys (s^2, a5) differ are returned
    in ``flagged``; they are never merged silently.
    """
    if not A.is_positive:
        raise NonPositiveElementError("five_var_float_check needs positive elements")
    if len(A) > 12:
        raise InvalidParameterError("float cross-check is limited to |A| <= 12")
    fourfold = iterated_sumset(A, 4)
    entries = []
    for s in fourfold:
        sq = s * s
        for a in A:
            entries.append((float(sq) + math.log(a), (sq, a)))
    entries.sort(key=lambda e: e[0])
    distinct = 1
    flagged = []
    min_gap = math.inf
    for (v0, k0), (v1, k1) in zip(entries, entries[1:]):
        gap = v1 - v0
        min_gap = min(min_gap, gap)
        if gap < tol * max(1.0, abs(v1)):
            if k0 != k1:
                flagged.append((k0, k1))
        else:
            distinct += 1
    return FloatCrossCheck(distinct, min_gap, tuple(flagged))


def read_set_file(path: str | Path) -> GroundSet:
    """One integer or p/q per line; '#' lines and blank lines are skipped."""
    values = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            values.append(to_rational(text))
        except InvalidParameterError as exc:
            raise InvalidParameterError(f"{path}:{lineno}: {exc}") from exc
    return make_set(values)


def write_set_file(A: GroundSet, path: str | Path, header: str | None = None) -> None:
    lines = [f"# {h}" for h in (header or "").splitlines() if h]
    lines += A.to_strings()
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
