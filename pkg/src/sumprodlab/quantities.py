"""Named quantities, shared by the CLI and the exponent fits.

Each entry maps a set (plus keyword options) to an exact result.  ``scalar``
entries return an int or Fraction and can be fitted; the rest return sets,
histograms or certificates and are only printed.  ``cost`` is the exponent
k in the n^k operation-count estimate used by the budget check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from . import energy, geometry, refine, setcore
from .errors import BudgetExceeded, InvalidParameterError
from .setcore import GroundSet

# rough throughput of the counting kernels, in elementary operations per ms
OPS_PER_MS = 20_000
DEFAULT_BUDGET_MS = 60_000


@dataclass(frozen=True)
class Quantity:
    name: str
    fn: Callable[..., Any]
    cost: float
    scalar: bool = True
    help: str = ""

    def estimate_ms(self, n: int) -> float:
        return max(n, 1) ** self.cost / OPS_PER_MS

    def __call__(self, A: GroundSet, **opts) -> Any:
        return self.fn(A, **opts)


def _k(opts: dict, name: str, default=None):
    v = opts.get(name, default)
    if v is None:
        raise InvalidParameterError(f"this quantity needs --{name}")
    return v


_REGISTRY: list[Quantity] = [
    Quantity("size", lambda A, **o: len(A), 1, help="|A|"),
    Quantity("size-squared", lambda A, **o: len(A) ** 2, 1, help="|A|^2"),
    Quantity("sumset", lambda A, **o: setcore.sumset(A, A), 2, False, "A+A"),
    Quantity("sumset-size", lambda A, **o: len(setcore.sumset(A, A)), 2, help="|A+A|"),
    Quantity("difference-set", lambda A, **o: setcore.difference_set(A, A), 2, False, "A-A"),
    Quantity("difference-size", lambda A, **o: len(setcore.difference_set(A, A)), 2, help="|A-A|"),
    Quantity("product-set", lambda A, **o: setcore.product_set(A, A), 2, False, "AA"),
    Quantity("product-size", lambda A, **o: len(setcore.product_set(A, A)), 2, help="|AA|"),
    Quantity("ratio-set", lambda A, **o: setcore.ratio_set(A, A), 2, False, "A/A"),
    Quantity("ratio-size", lambda A, **o: len(setcore.ratio_set(A, A)), 2, help="|A/A|"),
    Quantity(
        "pinned-product",
        lambda A, **o: setcore.pinned_product_size(A, _k(o, "pin"), o.get("sign") or "+"),
        2,
        help="|A(A+a)| for --pin a (--sign - for A(A-a))",
    ),
    Quantity("best-pinned", lambda A, **o: setcore.best_pinned(A, o.get("sign") or "+")[1], 3, help="max_a |A(A±a)|"),
    Quantity("aaplus", lambda A, **o: setcore.composite_expander_size(A, "sum"), 3, help="|A(A+A)|"),
    Quantity("aaminus", lambda A, **o: setcore.composite_expander_size(A, "difference"), 3, help="|A(A-A)|"),
    Quantity("five-var", lambda A, **o: setcore.five_var_expander_size(A), 2, help="|(a1+a2+a3+a4)^2 + log a5|"),
    Quantity("add-energy", lambda A, **o: energy.additive_energy(A), 2, help="E+(A)"),
    Quantity("mult-energy", lambda A, **o: energy.multiplicative_energy(A), 2, help="E×(A)"),
    Quantity("log-energy", lambda A, **o: energy.log_additive_energy(A), 2, help="E+ of formal logs (= E×)"),
    Quantity(
        "energy-moment",
        lambda A, **o: energy.energy_moment(A, _k(o, "k")),
        2,
        help="E_k+(A) for --k (int, or 50-digit decimal for fractional k)",
    ),
    Quantity(
        "difference-histogram",
        lambda A, **o: energy.rep_histogram(A, A, "difference"),
        2,
        False,
        "r_{A-A} as CSV",
    ),
    Quantity("ratio-histogram", lambda A, **o: energy.rep_histogram(A, A, "ratio"), 2, False, "r_{A/A} as CSV"),
    Quantity(
        "shifted-energy-sum",
        lambda A, **o: energy.shifted_energy_sum(A, A, A, o.get("sign") or "+"),
        3,
        help="sum_a E×(A, A∓a)",
    ),
    Quantity("collinear-triples", lambda A, **o: geometry.grid_collinear_triples(A), 4, help="collinear triples in A×A"),
    Quantity("gk-quadruples", lambda A, **o: geometry.gk_distance_quadruples(A), 4, help="distance-quadruple count"),
    Quantity("gk-literal", lambda A, **o: geometry.gk_literal_count(A), 5, help="literal-reading variant"),
    Quantity("dstar-witness", lambda A, **o: refine.dstar_upper_bound(A), 3, False, "best d_* witness"),
    Quantity("dstar-upper", lambda A, **o: refine.dstar_upper_bound(A).value, 3, help="best d_* witness value"),
    Quantity("popular-ratio-class", lambda A, **o: refine.popular_ratio_class(A), 2, False, "stage-1 certificate"),
    Quantity("refine-energy-subset", lambda A, **o: refine.refine_energy_subset(A), 3, False, "refinement certificate"),
    Quantity("double-pigeonhole", lambda A, **o: refine.double_pigeonhole(A)[0], 3, False, "refinement certificate"),
    Quantity(
        "best-dilation",
        lambda A, **o: refine.best_dilation(A, o.get("candidates") or "inverse-elements"),
        3,
        False,
        "dilation maximizing the ratio overlap",
    ),
]

QUANTITIES: dict[str, Quantity] = {q.name: q for q in _REGISTRY}


def get(name: str) -> Quantity:
    try:
        return QUANTITIES[name]
    except KeyError:
        raise InvalidParameterError(f"unknown quantity {name!r}; try one of {', '.join(QUANTITIES)}") from None


def check_budget(q: Quantity, n: int, budget_ms: float) -> None:
    est = q.estimate_ms(n)
    if est > budget_ms:
        raise BudgetExceeded(f"{q.name} at n={n}: estimated {est:.0f} ms exceeds budget {budget_ms:.0f} ms")


def scalar_value(q: Quantity, A: GroundSet, **opts):
    """An int, Fraction or mpf; raises for non-scalar quantities."""
    if not q.scalar:
        raise InvalidParameterError(f"{q.name} is not a scalar quantity")
    return q(A, **opts)
