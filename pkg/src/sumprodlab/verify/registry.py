"""The inequality registry.

Every entry names an inequality between two computable expressions over a
ground set.  Kinds:

* ``exact``     constant-free statements, asserted with constant 1;
* ``identity``  two independent computations of the same count;
* ``ratio``     implicit-constant statements; the ratio LHS/RHS is the result;
* ``growth``    O(...) upper bounds whose ratio is tracked across sizes.

Right-hand sides set every implicit constant to 1 and evaluate log factors
as log₂ of the written argument with the written power.  Statements that
involve d_*(A) use a certified witness value W >= d_*(A) instead and are
flagged ``weakened``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fnmatch import fnmatchcase
from fractions import Fraction
from functools import cached_property
from typing import Callable

import sympy

from .. import energy, geometry, refine, setcore
from ..bounds import Value, log2, power, rat
from ..errors import InvalidParameterError, NonPositiveElementError, TooSmallError, ZeroElementError
from ..setcore import GroundSet, Number, to_rational
from .fit import crossover

HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)

# headline exponents, derived rather than typed in
EXP_T1 = crossover((THREE_HALVES, HALF), (Fraction(20, 13), Fraction(40, 13)))
EXP_T2 = crossover((THREE_HALVES, HALF), (Fraction(58, 37), Fraction(42, 37)))
EXP_T3 = crossover((THREE_HALVES, HALF), (Fraction(8, 5), Fraction(6, 5)))


@dataclass(frozen=True)
class Aux:
    """Optional parameters: a second set B, a shift α, a level τ."""

    B: GroundSet | None = None
    alpha: Fraction = Fraction(1)
    tau: Fraction | None = None

    @classmethod
    def make(cls, B: GroundSet | None = None, alpha: Number = 1, tau: Number | None = None) -> "Aux":
        alpha = to_rational(alpha)
        if alpha == 0:
            raise InvalidParameterError("alpha must be nonzero")
        return cls(B, alpha, None if tau is None else to_rational(tau))


class Instance:
    """A ground set plus lazily cached quantities shared between specs."""

    def __init__(self, A: GroundSet, aux: Aux | None = None):
        self.A = A
        self.aux = aux or Aux()
        self.B = self.aux.B if self.aux.B is not None else A
        self._pinned: dict[str, tuple[Fraction, int]] = {}

    @cached_property
    def n(self) -> int:
        return len(self.A)

    @cached_property
    def emult(self) -> int:
        return energy.multiplicative_energy(self.A)

    @cached_property
    def eadd(self) -> int:
        return energy.additive_energy(self.A)

    @cached_property
    def K(self) -> Fraction:
        return Fraction(self.n**3, self.emult)

    @cached_property
    def sum_size(self) -> int:
        return len(setcore.sumset(self.A, self.A))

    @cached_property
    def diff_set(self) -> GroundSet:
        return setcore.difference_set(self.A, self.A)

    @cached_property
    def witness(self) -> refine.DStarWitness:
        return refine.dstar_upper_bound(self.A)

    @property
    def W(self) -> Fraction:
        return self.witness.value

    @cached_property
    def alpha_product(self) -> int:
        return setcore.pinned_product_size(self.A, self.aux.alpha, "+")

    @cached_property
    def e15(self) -> sympy.Expr:
        return energy.energy_moment_exact(self.A, THREE_HALVES)

    @cached_property
    def e3(self) -> int:
        return energy.energy_moment(self.A, 3)

    @cached_property
    def double_pigeonhole(self):
        return refine.double_pigeonhole(self.A)

    def pinned(self, sign: str) -> tuple[Fraction, int]:
        if sign not in self._pinned:
            self._pinned[sign] = setcore.best_pinned(self.A, sign)
        return self._pinned[sign]


@dataclass(frozen=True)
class Evaluation:
    lhs: Value
    rhs: Value
    note: str = ""


@dataclass(frozen=True)
class InequalitySpec:
    id: str
    kind: str
    relation: str
    statement: str
    evaluate: Callable[[Instance], Evaluation] = field(repr=False)
    needs: frozenset = frozenset()
    min_size: int = 1
    cost: float = 2.0
    weakened: bool = False
    uses_b: bool = False
    log_note: str = ""

    def precondition_error(self, inst: Instance) -> Exception | None:
        """The violated precondition as an exception, or None."""
        sets = [inst.A, inst.B] if self.uses_b else [inst.A]
        if "nonzero" in self.needs and any(S.has_zero for S in sets):
            return ZeroElementError(f"{self.id} needs 0 outside the set")
        if "positive" in self.needs and not all(S.is_positive for S in sets):
            return NonPositiveElementError(f"{self.id} needs a set of positive elements")
        return None

    def too_small(self, inst: Instance) -> Exception | None:
        if inst.n < self.min_size or (self.uses_b and len(inst.B) < self.min_size):
            return TooSmallError(f"{self.id} degenerates below size {self.min_size}")
        return None


def _n(inst: Instance) -> sympy.Expr:
    return rat(inst.n)


def _lg(x) -> sympy.Expr:
    return log2(x)


# --------------------------------------------------------------------------
# evaluations


def _cauchy_schwarz(inst: Instance) -> Evaluation:
    A, B = inst.A, inst.B
    ab = len(setcore.product_set(A, B))
    return Evaluation(energy.multiplicative_energy(A, B), Fraction(len(A) ** 2 * len(B) ** 2, ab), f"|AB|={ab}")


def _holder(inst: Instance) -> Evaluation:
    return Evaluation(inst.n**6, len(inst.diff_set) * inst.e15**2)


def _three_energy(inst: Instance) -> Evaluation:
    # taken with B = A, where E_3(A)^{2/3} E_3(B)^{1/3} collapses to E_3(A)
    mixed = energy.additive_energy(inst.A, inst.diff_set)
    return Evaluation(inst.n**2 * inst.e15**2, inst.e3 * mixed, "B=A")


def dilation_identity_counts(A: GroundSet, alpha: Fraction, z: Fraction) -> tuple[int, int]:
    """Both sides of S = Σ_t n(t)² for B = zA.

    S counts (b1, b1', b2, b2') with b_i in B, b_i' in B ∩ b_i^{-1}B and
    b1(b1' + αz) = b2(b2' + αz).  The first count solves for b2' directly;
    the second squares the histogram n(t) of t = b(b' + αz).
    """
    B = setcore.dilate(A, z)
    members = B.members
    w = alpha * z
    pairs = [(b, bp) for b in B for bp in B if b * bp in members]
    direct = 0
    for b1, b1p in pairs:
        t = b1 * (b1p + w)
        for b2 in B:
            b2p = t / b2 - w
            if b2p in members and b2 * b2p in members:
                direct += 1
    hist = Counter(b * (bp + w) for b, bp in pairs)
    return direct, sum(c * c for c in hist.values())


def _dilation_identity(inst: Instance) -> Evaluation:
    z = refine.best_dilation(inst.A).z
    direct, squared = dilation_identity_counts(inst.A, inst.aux.alpha, z)
    return Evaluation(direct, squared, f"z={z}, alpha={inst.aux.alpha}")


def _shifted_identity(inst: Instance) -> Evaluation:
    A, B = inst.A, inst.B
    hist = energy.shifted_energy_sum(A, B, A, "+")
    brute = energy.shifted_energy_sum_bruteforce(A, B, A, "+")
    return Evaluation(hist, brute, "C=A")


def _pinned(sign: str):
    def ev(inst: Instance) -> Evaluation:
        a, size = inst.pinned(sign)
        n = _n(inst)
        return Evaluation(inst.emult * size**2, n**6 / _lg(inst.n), f"a={a}")

    return ev


def _shifted_sum(inst: Instance) -> Evaluation:
    A, B = inst.A, inst.B
    n, nb = _n(inst), rat(len(B))
    lhs = energy.shifted_energy_sum(A, B, A, "+")
    eb = rat(energy.multiplicative_energy(B))
    rhs = sympy.sqrt(eb) * n**2 * sympy.sqrt(_lg(inst.n)) + n**3 + n * nb**2
    return Evaluation(lhs, rhs, "C=A")


def _composite_energy(inst: Instance) -> Evaluation:
    A, B = inst.A, inst.B
    size = len(setcore.product_set(A, setcore.sumset(B, B)))
    n, nb = _n(inst), rat(len(B))
    return Evaluation(inst.emult * size**2, n**4 * nb**2 / _lg(inst.n), "C=B")


def _dilated_expander(inst: Instance) -> Evaluation:
    n = _n(inst)
    rhs = rat(inst.emult) ** 2 / (power(n, Fraction(58, 13)) * power(inst.W, Fraction(7, 13)))
    return Evaluation(inst.alpha_product, rhs, f"alpha={inst.aux.alpha}")


def _energy_dstar(inst: Instance) -> Evaluation:
    n = _n(inst)
    rhs = power(inst.W, Fraction(7, 13)) * power(n, Fraction(32, 13)) * power(_lg(inst.n), Fraction(71, 65))
    return Evaluation(inst.eadd, rhs)


def _energy_chain(inst: Instance) -> Evaluation:
    return Evaluation(inst.n**2 * inst.alpha_product * inst.eadd, inst.emult**2, f"alpha={inst.aux.alpha}")


def _dilation_overlap(inst: Instance) -> Evaluation:
    choice = refine.best_dilation(inst.A)
    return Evaluation(choice.overlap, rat(inst.emult) / (_n(inst) * _lg(inst.n)), f"z={choice.z}")


def _large_energy(size_attr: str, r: Fraction, s: Fraction):
    def ev(inst: Instance) -> Evaluation:
        size = inst.alpha_product if size_attr == "alpha" else (
            len(inst.diff_set) if size_attr == "diff" else inst.sum_size
        )
        rhs = power(_n(inst), r) / power(inst.K, s)
        return Evaluation(size, rhs, f"K={inst.K}")

    return ev


def _difference_dstar(inst: Instance) -> Evaluation:
    n = _n(inst)
    rhs = power(n, Fraction(8, 5)) / (power(inst.W, Fraction(3, 5)) * power(_lg(inst.n), Fraction(2, 5)))
    return Evaluation(len(inst.diff_set), rhs)


def _sum_dstar(inst: Instance) -> Evaluation:
    rhs = power(_n(inst), Fraction(58, 37)) / power(inst.W, Fraction(21, 37))
    return Evaluation(inst.sum_size, rhs)


def _sum_dstar_weak(inst: Instance) -> Evaluation:
    n = _n(inst)
    rhs = power(n, Fraction(14, 9)) / (power(inst.W, Fraction(5, 9)) * power(_lg(inst.n), Fraction(2, 9)))
    return Evaluation(inst.sum_size, rhs)


def _dp_size(inst: Instance) -> Evaluation:
    cert, _ = inst.double_pigeonhole
    return Evaluation(len(cert.A_prime), Fraction(inst.n**2) / (inst.K * cert.delta), f"delta={cert.delta}")


def _dp_dstar(inst: Instance) -> Evaluation:
    cert, w = inst.double_pigeonhole
    rhs = inst.K * len(cert.A_prime) ** 2 / (inst.n * cert.delta)
    return Evaluation(w.value, rhs, f"t={cert.t}")


def _level_sets(inst: Instance) -> Evaluation:
    A, B = inst.A, inst.B
    h = energy.rep_histogram(A, B, "difference")
    scale = Fraction(len(A) * len(B) ** 2) * inst.W
    if inst.aux.tau is not None:
        taus = [inst.aux.tau]
    else:
        top = max(h.entries.values())
        taus = [Fraction(2) ** j for j in range(top.bit_length())]
    best = None
    for tau in taus:
        count = energy.level_set_count(h, tau)
        rhs = scale / tau**3
        key = Fraction(count) / rhs
        if best is None or key > best[0]:
            best = (key, count, rhs, tau)
    _, count, rhs, tau = best
    return Evaluation(count, rhs, f"tau={tau}")


def _third_energy(inst: Instance) -> Evaluation:
    return Evaluation(inst.e3, rat(inst.n**3) * rat(inst.W) * _lg(inst.n))


def _mixed_energy(inst: Instance) -> Evaluation:
    F = inst.diff_set
    lhs = energy.additive_energy(inst.A, F)
    rhs = _n(inst) * power(len(F), THREE_HALVES) * power(inst.W, HALF)
    return Evaluation(lhs, rhs, "F=A-A")


def squares_shift_size(A: GroundSet, B: GroundSet) -> int:
    """|{a + (b1 + b2)^2 : a in A, b1, b2 in B}|."""
    squares = setcore.GroundSet({s * s for s in setcore.sumset(B, B)}, _trusted=False)
    return len(setcore.sumset(A, squares))


def _gk_expander(inst: Instance) -> Evaluation:
    A, B = inst.A, inst.B
    size = squares_shift_size(A, B)
    nb = len(B)
    return Evaluation(inst.eadd * size**2, rat(inst.n**4 * nb**2) / _lg(nb))


def _five_var_chain(inst: Instance) -> Evaluation:
    size = setcore.five_var_expander_size(inst.A)
    s = inst.sum_size
    return Evaluation(inst.emult * size**2, rat(inst.n**4 * s**2) / _lg(s), "B=A+A, E+(log A)=E×(A)")


def _solymosi(inst: Instance) -> Evaluation:
    return Evaluation(inst.emult, rat(inst.sum_size**2) * _lg(inst.n))


def _collinear(inst: Instance) -> Evaluation:
    return Evaluation(geometry.grid_collinear_triples(inst.A), rat(inst.n**4) * _lg(inst.n))


def _gk_quadruples(inst: Instance) -> Evaluation:
    return Evaluation(geometry.gk_distance_quadruples(inst.A), rat(inst.n**6) * _lg(inst.n))


def _t1(inst: Instance) -> Evaluation:
    a, size = inst.pinned("+")
    return Evaluation(size, power(_n(inst), EXP_T1), f"a={a}")


def _t2(inst: Instance) -> Evaluation:
    return Evaluation(setcore.composite_expander_size(inst.A, "sum"), power(_n(inst), EXP_T2))


def _t3(inst: Instance) -> Evaluation:
    return Evaluation(setcore.composite_expander_size(inst.A, "difference"), power(_n(inst), EXP_T3))


def _t4(inst: Instance) -> Evaluation:
    return Evaluation(setcore.five_var_expander_size(inst.A), rat(inst.n**2) / _lg(inst.n))


NZ = frozenset({"nonzero"})
POS = frozenset({"positive"})
_W = "witness-weakened"

SPECS: list[InequalitySpec] = [
    InequalitySpec("exact.cauchy-schwarz", "exact", ">=", "E×(A,B) >= |A|²|B|²/|AB|", _cauchy_schwarz, NZ, uses_b=True),
    InequalitySpec("exact.holder", "exact", "<=", "|A|⁶ <= |A-A| E_{3/2}(A)²", _holder),
    InequalitySpec(
        "exact.three-energy", "exact", "<=", "|A|² E_{3/2}(A)² <= E_3(A) E+(A, A-A)", _three_energy, cost=3
    ),
    InequalitySpec(
        "exact.double-count-dilation",
        "identity",
        "==",
        "#{b1(b1'+αz) = b2(b2'+αz)} = Σ_t n(t)²",
        _dilation_identity,
        NZ,
        cost=3,
    ),
    InequalitySpec(
        "exact.double-count-shifted",
        "identity",
        "==",
        "Σ_a E×(B, A-a) by histogram = quintuple count",
        _shifted_identity,
        uses_b=True,
        cost=4,
    ),
    InequalitySpec("ratio.pinned-plus", "ratio", ">=", "E×(A)|A(A+a)|² >= |A|⁶/log|A|", _pinned("+"), NZ, 3, 3),
    InequalitySpec("ratio.pinned-minus", "ratio", ">=", "E×(A)|A(A-b)|² >= |A|⁶/log|A|", _pinned("-"), NZ, 3, 3),
    InequalitySpec(
        "ratio.shifted-energy-sum",
        "ratio",
        "<=",
        "Σ_a E×(B, A-a) <= E×(B)^{1/2}|A|² log^{1/2}|A| + |A|³ + |A||B|²",
        _shifted_sum,
        NZ,
        3,
        3,
        uses_b=True,
    ),
    InequalitySpec(
        "ratio.composite-energy",
        "ratio",
        ">=",
        "E×(A)|A(B+B)|² >= |A|⁴|B|²/log|A|",
        _composite_energy,
        NZ,
        3,
        3,
        uses_b=True,
    ),
    InequalitySpec(
        "ratio.dilated-expander",
        "ratio",
        ">=",
        "|A(A+α)| >= E×(A)²/(|A|^{58/13} d_*^{7/13})",
        _dilated_expander,
        NZ,
        2,
        3,
        True,
    ),
    InequalitySpec(
        "ratio.energy-dstar",
        "ratio",
        "<=",
        "E+(A) <= d_*^{7/13}|A|^{32/13} log^{71/65}|A|",
        _energy_dstar,
        NZ,
        3,
        3,
        True,
    ),
    InequalitySpec("ratio.energy-chain", "ratio", ">=", "|A|²|A(A+α)|E+(A) >= E×(A)²", _energy_chain, NZ),
    InequalitySpec(
        "ratio.dilation-overlap", "ratio", ">=", "Σ_{x∈zA}|A∩xA| >= E×(A)/(|A| log|A|)", _dilation_overlap, NZ, 3
    ),
    InequalitySpec(
        "ratio.large-energy-pinned",
        "ratio",
        ">=",
        "|A(A+α)| >= |A|^{20/13}/K^{40/13}",
        _large_energy("alpha", Fraction(20, 13), Fraction(40, 13)),
        NZ,
        log_note="≳ hides log factors; none applied",
    ),
    InequalitySpec(
        "ratio.large-energy-difference",
        "ratio",
        ">=",
        "|A-A| >= |A|^{8/5}/K^{6/5}",
        _large_energy("diff", Fraction(8, 5), Fraction(6, 5)),
        NZ,
        log_note="≳ hides log factors; none applied",
    ),
    InequalitySpec(
        "ratio.large-energy-sum",
        "ratio",
        ">=",
        "|A+A| >= |A|^{58/37}/K^{42/37}",
        _large_energy("sum", Fraction(58, 37), Fraction(42, 37)),
        NZ,
        log_note="≳ hides log factors; none applied",
    ),
    InequalitySpec(
        "ratio.difference-dstar",
        "ratio",
        ">=",
        "|A-A| >= |A|^{8/5}/(d_*^{3/5} log^{2/5}|A|)",
        _difference_dstar,
        NZ,
        3,
        3,
        True,
    ),
    InequalitySpec(
        "ratio.sum-dstar", "ratio", ">=", "|A+A| >= |A|^{58/37}/d_*^{21/37}", _sum_dstar, NZ, 2, 3, True
    ),
    InequalitySpec(
        "ratio.sum-dstar-weak",
        "ratio",
        ">=",
        "|A+A| >= |A|^{14/9}/(d_*^{5/9} log^{2/9}|A|)",
        _sum_dstar_weak,
        NZ,
        3,
        3,
        True,
    ),
    InequalitySpec("ratio.double-pigeonhole-size", "ratio", ">=", "|A'| >= |A|²/(KΔ)", _dp_size, NZ, 2, 3),
    InequalitySpec(
        "ratio.double-pigeonhole-dstar", "ratio", "<=", "W(A') <= K|A'|²/(|A|Δ)", _dp_dstar, NZ, 2, 3
    ),
    InequalitySpec(
        "ratio.level-sets",
        "ratio",
        "<=",
        "#{x : r_{A-B}(x) >= τ} <= |A||B|² d_*(A)/τ³ (worst dyadic τ)",
        _level_sets,
        NZ,
        2,
        3,
        True,
        uses_b=True,
    ),
    InequalitySpec(
        "ratio.third-energy-dstar", "ratio", "<=", "E_3(A) <= |A|³ d_* log|A|", _third_energy, NZ, 3, 3, True
    ),
    InequalitySpec(
        "ratio.mixed-energy-dstar",
        "ratio",
        "<=",
        "E+(A, F) <= |A||F|^{3/2} d_*^{1/2}, F = A-A",
        _mixed_energy,
        NZ,
        2,
        3,
        True,
    ),
    InequalitySpec(
        "ratio.gk-expander",
        "ratio",
        ">=",
        "E+(A)|A+(B+B)²|² >= |A|⁴|B|²/log|B|",
        _gk_expander,
        min_size=3,
        cost=3,
        uses_b=True,
    ),
    InequalitySpec(
        "ratio.five-var-chain",
        "ratio",
        ">=",
        "E×(A)|(4A)²+log A|² >= |A|⁴|A+A|²/log|A+A|",
        _five_var_chain,
        POS,
        3,
    ),
    InequalitySpec("growth.energy-sumset", "growth", "<=", "E×(A) <= |A+A|² log|A|", _solymosi, NZ, 3),
    InequalitySpec(
        "growth.collinear-triples", "growth", "<=", "T(A×A) <= |A|⁴ log|A|", _collinear, min_size=3, cost=4
    ),
    InequalitySpec(
        "growth.gk-quadruples", "growth", "<=", "Q(A) <= |A|⁶ log|A|", _gk_quadruples, min_size=3, cost=4
    ),
    InequalitySpec("T1", "ratio", ">=", f"max_a |A(A+a)| >= |A|^{EXP_T1}", _t1, cost=3, log_note="≳ hides logs"),
    InequalitySpec("T2", "ratio", ">=", f"|A(A+A)| >= |A|^{EXP_T2}", _t2, cost=3, log_note="≳ hides logs"),
    InequalitySpec("T3", "ratio", ">=", f"|A(A-A)| >= |A|^{EXP_T3}", _t3, cost=3, log_note="≳ hides logs"),
    InequalitySpec("T4", "ratio", ">=", "|(4A)²+log A| >= |A|²/log|A|", _t4, POS, 3),
]

REGISTRY: dict[str, InequalitySpec] = {s.id: s for s in SPECS}


def get_spec(spec_id: str) -> InequalitySpec:
    try:
        return REGISTRY[spec_id]
    except KeyError:
        raise InvalidParameterError(f"unknown spec {spec_id!r}") from None


def select(patterns: str | list[str] | None) -> list[InequalitySpec]:
    """Specs matching any of the comma-separated id globs, in registry order."""
    if patterns is None:
        return list(SPECS)
    if isinstance(patterns, str):
        patterns = [p for p in patterns.split(",") if p]
    return [s for s in SPECS if any(fnmatchcase(s.id, p) for p in patterns)]
