"""Crossover exponents and empirical log-log slopes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .. import quantities
from ..errors import InvalidParameterError, NonpositiveDenominatorError
from ..families import FamilySpec, generate, parse_family
from ..setcore import Number, to_rational


def crossover(pinned: tuple[Number, Number], alternative: tuple[Number, Number]) -> Fraction:
    """Exponent e with max_K min(K^q n^p, n^r / K^s) = n^e.

    The first bound increases in K and the second decreases, so the minimum
    peaks where they meet: K^{q+s} = n^{r-p}, giving e = p + q(r - p)/(q + s).
    With p = 3/2, q = 1/2 this is 3/2 + (r - 3/2)/(2s + 1).
    """
    p, q = (to_rational(x) for x in pinned)
    r, s = (to_rational(x) for x in alternative)
    if q + s <= 0:
        raise NonpositiveDenominatorError(f"q + s = {q + s} must be positive")
    return p + q * (r - p) / (q + s)


@dataclass(frozen=True)
class ExponentFit:
    family: str
    quantity: str
    sizes: tuple[int, ...]
    values: tuple[float, ...]
    slope: float
    intercept: float
    residual: float

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "quantity": self.quantity,
            "sizes": list(self.sizes),
            "values": list(self.values),
            "slope": round(self.slope, 12),
            "intercept": round(self.intercept, 12),
            "residual": round(self.residual, 12),
        }


def fit_loglog(sizes: Sequence[int], values: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares line through (log₂ n, log₂ v); returns slope, intercept, SSR."""
    x = np.log2(np.asarray(sizes, dtype=float))
    y = np.log2(np.asarray(values, dtype=float))
    (slope, intercept), ssr, *_ = np.polyfit(x, y, 1, full=True)
    return float(slope), float(intercept), float(ssr[0]) if len(ssr) else 0.0


def _check_sizes(sizes: Sequence[int]) -> tuple[int, ...]:
    sizes = tuple(int(n) for n in sizes)
    if len(sizes) < 4:
        raise InvalidParameterError("an exponent fit needs at least 4 sizes")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InvalidParameterError("sizes must be strictly increasing")
    return sizes


def exponent_fit(
    family: str | FamilySpec,
    sizes: Sequence[int],
    quantity: str,
    seed: int = 0,
    budget_ms: float = quantities.DEFAULT_BUDGET_MS,
    **opts,
) -> ExponentFit:
    """Slope of log₂|quantity| against log₂|A| over the family at ``sizes``."""
    sizes = _check_sizes(sizes)
    spec = parse_family(family) if isinstance(family, str) else family
    q = quantities.get(quantity)
    for n in sizes:
        quantities.check_budget(q, n, budget_ms)
    base = spec.with_size(None).with_seed(seed or spec.seed)
    values = []
    for n in sizes:
        A = generate(base.with_size(n))
        v = quantities.scalar_value(q, A, **opts)
        fv = float(v)
        if not fv > 0:
            raise InvalidParameterError(f"{quantity} is not positive at n={n}; cannot take logs")
        values.append(fv)
    slope, intercept, ssr = fit_loglog(sizes, values)
    if not all(math.isfinite(t) for t in (slope, intercept)):
        raise ArithmeticError("degenerate fit")
    return ExponentFit(base.descriptor, quantity, sizes, tuple(values), slope, intercept, ssr)
