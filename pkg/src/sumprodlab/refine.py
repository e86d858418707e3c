"""Dyadic pigeonholing refinements with checkable certificates.

Nothing here computes d_*(A) itself (the minimum runs over all nonempty
Q, R of nonzero reals).  Instead every procedure returns a
:class:`DStarWitness`, whose value is an upper bound for d_* of its target,
and every implicit-constant step is replaced by an explicit constant.  The
derivation of each constant sits next to the assertion that uses it.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from . import _kernels as K
from .bounds import Value, decide, is_rational, log2, rat, to_text
from .energy import multiplicative_energy, rep_histogram
from .errors import InvalidParameterError, InvalidWitnessError, TooSmallError, ZeroElementError
from .setcore import GroundSet, Number, inverse, make_set, product_set, to_rational


def _require_nonzero(A: GroundSet, what: str) -> None:
    if A.has_zero:
        raise ZeroElementError(f"{what} needs 0 outside A")


def _require_two(A: GroundSet, what: str) -> None:
    if len(A) < 2:
        raise TooSmallError(f"{what} needs |A| >= 2")


# --------------------------------------------------------------------------
# d_* witnesses


def pointwise_count(Q: GroundSet, R: GroundSet, a: Fraction) -> int:
    """|Q ∩ aR^{-1}|, iterating over whichever of Q, R is smaller."""
    if len(Q) <= len(R):
        return sum(1 for q in Q if a / q in R.members)
    return sum(1 for r in R if a / r in Q.members)


@dataclass(frozen=True)
class DStarWitness:
    """(t, Q, R) certifying d_*(target) <= |Q|²|R|² / (|target| t³)."""

    t: Fraction
    Q: GroundSet
    R: GroundSet
    target: GroundSet
    value: Fraction
    label: str = ""

    def violations(self) -> list[str]:
        bad = []
        if self.t <= 0:
            bad.append("positive-t")
        if self.Q.has_zero or self.R.has_zero:
            bad.append("nonzero")
        if max(len(self.Q), len(self.R)) < len(self.target):
            bad.append("size")
        if "nonzero" not in bad and any(pointwise_count(self.Q, self.R, a) < self.t for a in self.target):
            bad.append("pointwise-t")
        expected = Fraction(len(self.Q) ** 2 * len(self.R) ** 2) / (len(self.target) * self.t**3) if self.t > 0 else None
        if expected is not None and expected != self.value:
            bad.append("value")
        return bad

    def is_valid(self) -> bool:
        return not self.violations()

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "t": str(self.t),
            "Q_size": len(self.Q),
            "R_size": len(self.R),
            "target_size": len(self.target),
            "value": {"num": str(self.value.numerator), "den": str(self.value.denominator)},
        }


def witness_value(target: GroundSet, Q: GroundSet, R: GroundSet, t: Number, label: str = "") -> DStarWitness:
    """Validate (t, Q, R) against the d_* constraints and return the witness."""
    t = to_rational(t)
    if t <= 0:
        raise InvalidWitnessError("positive-t", f"t = {t}")
    value = Fraction(len(Q) ** 2 * len(R) ** 2) / (len(target) * t**3)
    w = DStarWitness(t, Q, R, target, value, label)
    bad = w.violations()
    if bad:
        raise InvalidWitnessError(bad[0])
    return w


def d_recipe_witness(A: GroundSet, C: GroundSet, label: str = "") -> DStarWitness:
    """t = |C|, Q = AC, R = C^{-1}; value |AC|²/(|A||C|)."""
    return witness_value(A, product_set(A, C), inverse(C), len(C), label)


def dstar_upper_bound(A: GroundSet) -> DStarWitness:
    """Smallest witness value over a small portfolio of constructions.

    Candidates: the d(A) recipe with C = {1}, C = A and C = P (the popular
    ratio class), and (t, Q = A, R = P^{-1}) with t = min_a |A ∩ aP|.
    Values are compared before any witness set is materialized.
    """
    _require_nonzero(A, "dstar_upper_bound")
    n = len(A)
    one = make_set([1])
    candidates: list[tuple[Fraction, str, object]] = [(Fraction(n), "C={1}", one)]
    if n >= 2:
        aa = K.rational_product_count(A.elements, A.elements)
        candidates.append((Fraction(aa * aa, n * n), "C=A", A))
        cert = popular_ratio_class(A)
        P = cert.P
        ap = K.rational_product_count(A.elements, P.elements)
        candidates.append((Fraction(ap * ap, n * len(P)), "C=P", P))
        t = min(_overlap_with_dilate(A, a, P) for a in A)
        if t > 0:
            candidates.append((Fraction(n * n * len(P) ** 2, n * t**3), "Q=A,R=P^-1", (P, t)))
    value, label, data = min(candidates, key=lambda c: c[0])
    if label == "Q=A,R=P^-1":
        P, t = data
        w = witness_value(A, A, inverse(P), t, label)
    else:
        w = d_recipe_witness(A, data, label)
    assert w.value == value
    return w


def _overlap_with_dilate(A: GroundSet, a: Fraction, P: GroundSet) -> int:
    """|A ∩ aP| = #{a' in A : a'/a in P}."""
    return sum(1 for x in A if x / a in P.members)


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Assertion:
    name: str
    lhs: Value
    relation: str
    rhs: Value
    satisfied: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "relation": self.relation,
            "lhs": _value_json(self.lhs),
            "rhs": _value_json(self.rhs),
            "satisfied": self.satisfied,
            "note": self.note,
        }


def _value_json(v: Value) -> dict:
    if is_rational(v):
        f = Fraction(v) if not isinstance(v, sympy.Basic) else Fraction(int(v.p), int(v.q))
        return {"num": str(f.numerator), "den": str(f.denominator)}
    return {"expr": str(v), "decimal": to_text(v)}


def _assert(name: str, lhs: Value, relation: str, rhs: Value, note: str = "") -> Assertion:
    return Assertion(name, lhs, relation, rhs, decide(lhs, relation, rhs), note)


@dataclass
class RefinementCertificate:
    procedure: str
    A: GroundSet
    energy: int
    K: Fraction
    P: GroundSet
    delta: Fraction
    A_prime: GroundSet | None = None
    t: Fraction | None = None
    witness: DStarWitness | None = None
    assertions: list[Assertion] = field(default_factory=list)

    @property
    def satisfied(self) -> bool:
        return all(a.satisfied for a in self.assertions) and (self.witness is None or self.witness.is_valid())

    def assertion(self, name: str) -> Assertion:
        for a in self.assertions:
            if a.name == name:
                return a
        raise KeyError(name)

    def to_dict(self) -> dict:
        out = {
            "procedure": self.procedure,
            "A_size": len(self.A),
            "energy": str(self.energy),
            "K": str(self.K),
            "P": self.P.to_strings(),
            "delta": str(self.delta),
            "assertions": [a.to_dict() for a in self.assertions],
            "satisfied": self.satisfied,
        }
        if self.A_prime is not None:
            out["A_prime"] = self.A_prime.to_strings()
        if self.t is not None:
            out["t"] = str(self.t)
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _dyadic_candidates(values: Iterable[int], floor: Fraction) -> list[Fraction]:
    """Bottom edges Δ of dyadic bands [Δ, 2Δ) that can hold a value >= floor.

    Two families: the bands anchored at ``floor`` (Δ = floor·2^j), which
    partition [floor, ∞) into at most log₂(max/floor) + 1 classes, and the
    power-of-two bands clipped below at ``floor``.
    """
    vals = sorted(set(v for v in values if v >= floor))
    if not vals:
        return []
    top = vals[-1]
    edges = set()
    d = floor
    while d <= top:
        edges.add(d)
        d *= 2
    j = 0 if floor <= 1 else math.floor(math.log2(floor))
    while Fraction(2) ** j <= top:
        edges.add(max(Fraction(2) ** j, floor))
        j += 1
    return sorted(edges)


def _best_band(weights: dict, floor: Fraction, score) -> tuple[Fraction, list]:
    """The band [Δ, 2Δ) maximizing the summed score; ties go to larger Δ."""
    by_value: dict = {}
    for x, r in weights.items():
        by_value.setdefault(r, []).append(x)
    levels = sorted(by_value)
    best = None
    for delta in _dyadic_candidates(levels, floor):
        inside = [r for r in levels if delta <= r < 2 * delta]
        if not inside:
            continue
        mass = sum(score(r) * len(by_value[r]) for r in inside)
        key = (mass, delta)
        if best is None or key > best[0]:
            best = (key, delta, inside)
    _, delta, inside = best
    chosen = set(inside)
    members = [x for x, r in weights.items() if r in chosen]
    return delta, members


def popular_ratio_class(A: GroundSet) -> RefinementCertificate:
    """Stage 1: a dyadic class P of popular ratios carrying much of E×(A).

    With K = |A|³/E× and θ = |A|/(2K) = E×/(2|A|²): ratios with r < θ hold
    less than θ·Σr = θ|A|² = E×/2 of the energy.  The bands anchored at θ
    split the rest into at most log₂(|A|/θ) + 1 = log₂(2K) + 1 classes, so
    the heaviest band carries at least E×/(2(log₂(2K) + 1)).  The power-of-two
    bands are also offered; taking the maximum over both keeps the bound.
    """
    _require_nonzero(A, "popular_ratio_class")
    _require_two(A, "popular_ratio_class")
    n = len(A)
    hist = rep_histogram(A, A, "ratio").entries
    energy = sum(c * c for c in hist.values())
    Kval = Fraction(n**3, energy)
    theta = Fraction(n) / (2 * Kval)
    delta, members = _best_band(hist, theta, lambda r: r * r)
    P = GroundSet(sorted(members), _trusted=True)
    mass = sum(hist[x] ** 2 for x in members)
    assertions = [
        _assert("delta-floor", delta, ">=", theta, "Δ >= |A|/(2K)"),
        _assert(
            "band",
            min(hist[x] for x in members),
            ">=",
            delta,
            "Δ <= r(x) for x in P",
        ),
        _assert("band-top", max(hist[x] for x in members), "<", 2 * delta, "r(x) < 2Δ for x in P"),
        _assert(
            "class-energy",
            mass,
            ">=",
            rat(energy) / (2 * (log2(2 * Kval) + 1)),
            "Σ_P r² >= E×/(2(log₂(2K)+1))",
        ),
    ]
    return RefinementCertificate("popular-ratio-class", A, energy, Kval, P, delta, assertions=assertions)


def refine_energy_subset(A: GroundSet) -> RefinementCertificate:
    """Stage 1 plus A' = {x in A : |P ∩ xA^{-1}| >= Δ|P|/(4|A|)}.

    Σ_{x∈A}|P ∩ xA^{-1}| = Σ_{x∈P}|A ∩ xA| >= Δ|P|.  Elements below the
    threshold carry less than Δ|P|/4 in total, which leaves
    Σ_{x∈P}|A' ∩ xA'| >= Δ|P|/2; Cauchy–Schwarz over P then gives
    E×(A') >= (Δ|P|/2)²/|P| = Δ²|P|/4.
    """
    cert = popular_ratio_class(A)
    P, delta, n = cert.P, cert.delta, len(A)
    threshold = delta * len(P) / (4 * n)
    counts = {x: sum(1 for a in A if x / a in P.members) for x in A}
    A1 = GroundSet([x for x in A if counts[x] >= threshold], _trusted=True)
    overlap = sum(sum(1 for b in A1 if x * b in A1.members) for x in P)
    e1 = multiplicative_energy(A1)
    cert.procedure = "refine-energy-subset"
    cert.A_prime = A1
    cert.assertions += [
        _assert("subset-overlap", overlap, ">=", delta * len(P) / 2, "Σ_P |A'∩xA'| >= Δ|P|/2"),
        _assert("subset-energy", e1, ">=", delta**2 * len(P) / 4, "E×(A') >= Δ²|P|/4"),
    ]
    # every x in A' has |P ∩ xA^{-1}| >= threshold, so (threshold, P, A) witnesses d_*(A')
    cert.witness = witness_value(A1, P, A, threshold, "Q=P,R=A")
    return cert


def double_pigeonhole(A: GroundSet) -> tuple[RefinementCertificate, DStarWitness]:
    """Stage 1 plus a second dyadic split of c(a) = |A ∩ aP|.

    Σ_a c(a) = Σ_{x∈P} r(x) >= Δ|P|.  Each c(a) lies in [1, |A|], so the
    power-of-two bands [t, 2t) number at most log₂|A| + 1 and the heaviest
    one has Σ c >= Δ|P|/(log₂|A| + 1); with c < 2t on the band this gives
    |A'|·t >= Δ|P|/(2(log₂|A| + 1)).
    """
    cert = popular_ratio_class(A)
    P, delta = cert.P, cert.delta
    c = {a: _overlap_with_dilate(A, a, P) for a in A}
    positive = {a: v for a, v in c.items() if v > 0}
    best = None
    j = 0
    while 2**j <= len(A):
        t = 2**j
        band = [a for a, v in positive.items() if t <= v < 2 * t]
        if band:
            key = (sum(positive[a] for a in band), t)
            if best is None or key > best[0]:
                best = (key, t, band)
        j += 1
    _, t, band = best
    A1 = GroundSet(sorted(band), _trusted=True)
    t = Fraction(t)
    cert.procedure = "double-pigeonhole"
    cert.A_prime = A1
    cert.t = t
    cert.assertions += [
        _assert("t-band-low", min(c[a] for a in A1), ">=", t, "t <= |A∩aP| on A'"),
        _assert("t-band-high", max(c[a] for a in A1), "<", 2 * t, "|A∩aP| < 2t on A'"),
        _assert(
            "band-mass",
            len(A1) * t,
            ">=",
            delta * len(P) / (2 * (log2(len(A)) + 1)),
            "|A'|t >= Δ|P|/(2(log₂|A|+1))",
        ),
    ]
    witness = witness_value(A1, A, inverse(P), t, "Q=A,R=P^-1")
    cert.witness = witness
    return cert, witness


# --------------------------------------------------------------------------
# dilations


@dataclass(frozen=True)
class DilationChoice:
    z: Fraction
    overlap: int
    candidates: int
    bound: Value | None
    bound_satisfied: bool | None

    @property
    def ratio(self) -> float | None:
        """f(z)·|A|·log₂|A| / E×(A)."""
        if self.bound is None:
            return None
        from .bounds import ratio

        return ratio(self.overlap, self.bound)


def dilation_overlap(hist: dict, A: GroundSet, z: Fraction) -> int:
    """f(z) = Σ_{x∈zA} r_{A/A}(x) = Σ_{x∈zA} |zA ∩ x(zA)|."""
    return sum(hist.get(z * a, 0) for a in A)


def dilation_candidates(A: GroundSet, mode: str | Sequence[Number] = "inverse-elements") -> list[Fraction]:
    if not isinstance(mode, str):
        cands = [to_rational(z) for z in mode]
        if any(z == 0 for z in cands):
            raise InvalidParameterError("dilation candidates must be nonzero")
        return sorted(set(cands))
    if mode == "inverse-elements":
        return sorted({1 / a for a in A} | {Fraction(1)})
    if mode == "ratio-times-inverse":
        ratios = rep_histogram(A, A, "ratio").entries
        return sorted({x / a for x in ratios for a in A})
    raise InvalidParameterError(f"unknown candidate space {mode!r}")


def best_dilation(A: GroundSet, candidates: str | Sequence[Number] = "inverse-elements") -> DilationChoice:
    """Maximize f(z) over a candidate space; ties go to the smallest z."""
    _require_nonzero(A, "best_dilation")
    hist = rep_histogram(A, A, "ratio").entries
    cands = dilation_candidates(A, candidates)
    best_z, best_f = None, -1
    for z in cands:
        f = dilation_overlap(hist, A, z)
        if f > best_f:
            best_z, best_f = z, f
    n = len(A)
    if n >= 2:
        energy = sum(c * c for c in hist.values())
        bound = rat(energy) / (n * log2(n))
        ok = decide(best_f, ">=", bound)
    else:
        bound, ok = None, None
    return DilationChoice(best_z, best_f, len(cands), bound, ok)


# --------------------------------------------------------------------------
# independent re-verification


def _plain_ratio_hist(A: GroundSet) -> Counter:
    return Counter(a / b for a in A for b in A)


def recheck(cert: RefinementCertificate) -> list[str]:
    """Recompute every claim of ``cert`` from A alone with plain loops.

    Returns the names of the claims that fail (empty when the certificate
    stands).  Nothing computed by the procedure itself is trusted except the
    chosen objects P, Δ, A', t and the witness sets.
    """
    A = cert.A
    n = len(A)
    hist = _plain_ratio_hist(A)
    energy = sum(v * v for v in hist.values())
    failures = []
    if energy != cert.energy:
        failures.append("energy")
    Kval = Fraction(n**3, energy)
    theta = Fraction(n) / (2 * Kval)
    if not all(x in hist for x in cert.P):
        failures.append("P-support")
    if not cert.delta >= theta:
        failures.append("delta-floor")
    if not all(cert.delta <= hist[x] < 2 * cert.delta for x in cert.P):
        failures.append("band")
    mass = sum(hist[x] ** 2 for x in cert.P)
    if not decide(mass, ">=", rat(energy) / (2 * (log2(2 * Kval) + 1))):
        failures.append("class-energy")
    if cert.procedure == "refine-energy-subset":
        A1 = cert.A_prime
        threshold = cert.delta * len(cert.P) / (4 * n)
        expected = [x for x in A if sum(1 for a in A if x / a in cert.P.members) >= threshold]
        if list(A1) != expected:
            failures.append("A'-definition")
        overlap = sum(1 for x in cert.P for b in A1 if x * b in A1.members)
        if not overlap >= cert.delta * len(cert.P) / 2:
            failures.append("subset-overlap")
        e1 = sum(v * v for v in _plain_ratio_hist(A1).values())
        if not e1 >= cert.delta**2 * len(cert.P) / 4:
            failures.append("subset-energy")
    if cert.procedure == "double-pigeonhole":
        A1, t = cert.A_prime, cert.t
        if not set(A1) <= set(A):
            failures.append("A'-subset")
        cnt = {a: sum(1 for p in cert.P if a * p in A.members) for a in A1}
        if not all(t <= v < 2 * t for v in cnt.values()):
            failures.append("t-band")
        if not decide(len(A1) * t, ">=", cert.delta * len(cert.P) / (2 * (log2(n) + 1))):
            failures.append("band-mass")
    if cert.witness is not None:
        failures += [f"witness-{v}" for v in _plain_witness_check(cert.witness)]
    return failures


def _plain_witness_check(w: DStarWitness) -> list[str]:
    if w.t <= 0:
        return ["positive-t"]
    bad = []
    if any(q == 0 for q in w.Q) or any(r == 0 for r in w.R):
        bad.append("nonzero")
    if max(len(w.Q), len(w.R)) < len(w.target):
        bad.append("size")
    Rinv = {1 / r for r in w.R}
    for a in w.target:
        if sum(1 for q in w.Q if q / a in Rinv) < w.t:
            bad.append("pointwise-t")
            break
    if Fraction(len(w.Q) ** 2 * len(w.R) ** 2) / (len(w.target) * w.t**3) != w.value:
        bad.append("value")
    return bad
