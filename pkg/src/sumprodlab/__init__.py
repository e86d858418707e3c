"""Exact-arithmetic laboratory for sum-product expander estimates."""

from .energy import (
    additive_energy,
    energy_moment,
    multiplicative_energy,
    rep_histogram,
    shifted_energy_sum,
)
from .errors import (
    BudgetExceeded,
    ExactInequalityViolated,
    InvalidWitnessError,
    PreconditionViolated,
    SumProdError,
)
from .families import FamilySpec, generate, local_search, parse_family
from .geometry import PlanarPointSet, collinear_triples, gk_distance_quadruples
from .refine import (
    best_dilation,
    double_pigeonhole,
    dstar_upper_bound,
    popular_ratio_class,
    recheck,
    refine_energy_subset,
    witness_value,
)
from .setcore import (
    GroundSet,
    five_var_expander_size,
    make_set,
    pinned_product_size,
    product_set,
    sumset,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ExactInequalityViolated",
    "FamilySpec",
    "GroundSet",
    "InvalidWitnessError",
    "PlanarPointSet",
    "PreconditionViolated",
    "SumProdError",
    "additive_energy",
    "best_dilation",
    "collinear_triples",
    "double_pigeonhole",
    "dstar_upper_bound",
    "energy_moment",
    "five_var_expander_size",
    "generate",
    "gk_distance_quadruples",
    "local_search",
    "make_set",
    "multiplicative_energy",
    "parse_family",
    "pinned_product_size",
    "popular_ratio_class",
    "product_set",
    "recheck",
    "refine_energy_subset",
    "rep_histogram",
    "shifted_energy_sum",
    "sumset",
    "witness_value",
]
