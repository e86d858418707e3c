"""Seeded generators for test-set families and a local-search probe.

Family strings look like ``interval:64``, ``geometric:2:32``,
``random:1000000:128:seed=7`` or ``file:sets/a.txt``.  The size is the last
positional field and may be left out when the caller supplies sizes
separately (``interval`` together with ``--sizes 8,16``).
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from .energy import multiplicative_energy
from .errors import InvalidParameterError
from .setcore import GroundSet, best_pinned, composite_expander_size, read_set_file, sumset, to_rational

RNG_ALGORITHM = "numpy.PCG64+SeedSequence"

# family id -> number of parameters before the size
_ARITY = {
    "interval": 0,
    "geometric": 1,
    "random": 1,
    "convex-squares": 0,
    "ap-plus-ap": 0,
    "perturbed-ap": 1,
    "file": 1,
}
_ALIASES = {"random-subset": "random", "custom-file": "file", "squares": "convex-squares"}


def make_rng(seed: int, *keys: str | int) -> np.random.Generator:
    """PCG64 stream for ``seed``, split by ``keys`` through the SeedSequence spawn key."""
    spawn = tuple(k if isinstance(k, int) else zlib.crc32(k.encode()) for k in keys)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=spawn)))


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple[str, ...] = ()
    n: int | None = None
    seed: int = 0

    def with_size(self, n: int) -> "FamilySpec":
        return replace(self, n=n)

    def with_seed(self, seed: int) -> "FamilySpec":
        return replace(self, seed=seed)

    @property
    def descriptor(self) -> str:
        parts = [self.family, *self.params]
        if self.n is not None and self.family != "file":
            parts.append(str(self.n))
        if self.family in ("random", "perturbed-ap") or self.seed:
            parts.append(f"seed={self.seed}")
        return ":".join(parts)

    def __str__(self) -> str:
        return self.descriptor


def parse_family(text: str) -> FamilySpec:
    """Parse a family string; raises InvalidParameterError on malformed input."""
    if not text:
        raise InvalidParameterError("empty family string")
    if text.startswith("file:"):
        return FamilySpec("file", (text[5:],))
    fields = text.split(":")
    family = _ALIASES.get(fields[0], fields[0])
    if family not in _ARITY:
        raise InvalidParameterError(f"unknown family {fields[0]!r}")
    seed = 0
    positional = []
    for f in fields[1:]:
        if f.startswith("seed="):
            try:
                seed = int(f[5:])
            except ValueError:
                raise InvalidParameterError(f"bad seed in {text!r}") from None
        else:
            positional.append(f)
    arity = _ARITY[family]
    if len(positional) not in (arity, arity + 1):
        raise InvalidParameterError(f"{family} takes {arity} parameter(s) and an optional size, got {text!r}")
    n = None
    if len(positional) == arity + 1:
        try:
            n = int(positional[-1])
        except ValueError:
            raise InvalidParameterError(f"size must be an integer in {text!r}") from None
    spec = FamilySpec(family, tuple(positional[:arity]), n, seed)
    _check_params(spec)
    return spec


def _check_params(spec: FamilySpec) -> None:
    if spec.n is not None and spec.n < 1:
        raise InvalidParameterError("family size must be >= 1")
    try:
        if spec.family == "geometric":
            q = to_rational(spec.params[0])
            if q <= 1:
                raise InvalidParameterError("geometric ratio must be > 1")
        elif spec.family == "random":
            M = int(spec.params[0])
            if spec.n is not None and M < spec.n:
                raise InvalidParameterError("random:M needs M >= n")
        elif spec.family == "perturbed-ap":
            if int(spec.params[0]) < 0:
                raise InvalidParameterError("noise must be >= 0")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidParameterError):
            raise
        raise InvalidParameterError(f"bad parameter for {spec.family}: {spec.params}") from None


def generate(spec: FamilySpec | str) -> GroundSet:
    """The set described by ``spec``; a pure function of (family, params, n, seed)."""
    if isinstance(spec, str):
        spec = parse_family(spec)
    _check_params(spec)
    if spec.family == "file":
        return read_set_file(spec.params[0])
    if spec.n is None:
        raise InvalidParameterError(f"{spec.family} needs a size")
    n = spec.n
    if spec.family == "interval":
        vals = range(1, n + 1)
    elif spec.family == "geometric":
        q = to_rational(spec.params[0])
        vals = [q**i for i in range(n)]
    elif spec.family == "convex-squares":
        vals = [i * i for i in range(1, n + 1)]
    elif spec.family == "ap-plus-ap":
        vals = _ap_plus_ap(n)
    elif spec.family == "random":
        vals = _random_subset(int(spec.params[0]), n, spec.seed)
    elif spec.family == "perturbed-ap":
        vals = _perturbed_ap(n, int(spec.params[0]), spec.seed)
    else:  # pragma: no cover - guarded by parse_family
        raise InvalidParameterError(spec.family)
    out = GroundSet(vals)
    if len(out) != n:
        raise AssertionError(f"{spec} produced {len(out)} elements")
    return out


def _ap_plus_ap(n: int) -> list[int]:
    """First n elements of {0..k-1} + (2k+1)·{0,1,...} shifted to start at 1.

    The gap 2k+1 keeps every sum distinct, so this is a proper
    two-dimensional progression with side k = ceil(sqrt(n)).
    """
    k = max(1, int(np.ceil(np.sqrt(n))))
    step = 2 * k + 1
    return [1 + (i % k) + (i // k) * step for i in range(n)]


def _random_subset(M: int, n: int, seed: int) -> list[int]:
    rng = make_rng(seed, "random", M, n)
    chosen: dict[int, None] = {}
    while len(chosen) < n:
        # draw in batches; duplicates are retried by the next batch
        for v in rng.integers(1, M + 1, size=n - len(chosen)).tolist():
            chosen.setdefault(v)
    return list(chosen)


def _perturbed_ap(n: int, noise: int, seed: int) -> list[int]:
    """i·S + e_i with S = 2·noise + 10 and e_i uniform in [-noise, noise]."""
    rng = make_rng(seed, "perturbed-ap", noise, n)
    step = 2 * noise + 10
    out: list[int] = []
    seen: set[int] = set()
    for i in range(1, n + 1):
        while True:
            v = i * step + int(rng.integers(-noise, noise + 1))
            if v not in seen:
                break
        seen.add(v)
        out.append(v)
    return out


# --------------------------------------------------------------------------
# local search


@dataclass(frozen=True)
class Objective:
    """``key`` is minimized; ``value`` is the reported normalized figure."""

    name: str
    key: Callable[[GroundSet], Fraction]
    value: Callable[[GroundSet], float]
    needs_nonzero: bool = False


def _pinned_max(A: GroundSet) -> int:
    return best_pinned(A, "+")[1]


def _energy_ratio(A: GroundSet) -> Fraction:
    return Fraction(multiplicative_energy(A), len(sumset(A, A)) ** 2)


OBJECTIVES = {
    # |A| stays fixed during a search, so normalizing by |A|^{3/2} does not
    # change the order; the key stays an exact integer
    "min-pinned": Objective(
        "min-pinned", lambda A: Fraction(_pinned_max(A)), lambda A: _pinned_max(A) / len(A) ** 1.5
    ),
    "min-aaplus": Objective(
        "min-aaplus",
        lambda A: Fraction(composite_expander_size(A, "sum")),
        lambda A: composite_expander_size(A, "sum") / len(A) ** 1.5,
    ),
    "min-aaminus": Objective(
        "min-aaminus",
        lambda A: Fraction(composite_expander_size(A, "difference")),
        lambda A: composite_expander_size(A, "difference") / len(A) ** 1.5,
    ),
    "max-energy-ratio": Objective(
        "max-energy-ratio", lambda A: -_energy_ratio(A), lambda A: float(_energy_ratio(A)), needs_nonzero=True
    ),
}


@dataclass(frozen=True)
class TraceStep:
    step: int
    removed: Fraction
    added: Fraction
    candidate_key: Fraction
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "removed": str(self.removed),
            "added": str(self.added),
            "candidate_key": str(self.candidate_key),
            "accepted": self.accepted,
        }


@dataclass
class SearchState:
    current: GroundSet
    objective: str
    key: Fraction
    value: float
    step: int
    rng_state: dict
    start: str
    seed: int
    trace: list[TraceStep] = field(default_factory=list)
    rng_algorithm: str = RNG_ALGORITHM

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "start": self.start,
            "seed": self.seed,
            "steps": self.step,
            "rng": self.rng_algorithm,
            "key": str(self.key),
            "value": self.value,
            "set": self.current.to_strings(),
        }


def move_pool_bound(A: GroundSet) -> int:
    """4·max|a| rounded up to an integer (at least 1)."""
    m = max(abs(a) for a in A)
    return max(1, -((-4 * m.numerator) // m.denominator))


def local_search(objective: str, start: FamilySpec | str | GroundSet, steps: int, seed: int = 0) -> SearchState:
    """Hill climb by single-element replacement; a move is kept unless it worsens the key.

    Replacements are p/q with 1 <= |p|, q <= 4·max|a| for the start set.
    """
    if objective not in OBJECTIVES:
        raise InvalidParameterError(f"unknown objective {objective!r}; choose from {sorted(OBJECTIVES)}")
    if steps < 0:
        raise InvalidParameterError("steps must be >= 0")
    obj = OBJECTIVES[objective]
    if isinstance(start, GroundSet):
        A, label = start, "custom"
    else:
        spec = parse_family(start) if isinstance(start, str) else start
        A, label = generate(spec), spec.descriptor
    if obj.needs_nonzero and A.has_zero:
        A = GroundSet([a for a in A if a != 0] or [1])
    L = move_pool_bound(A)
    rng = make_rng(seed, "search", objective)
    key = obj.key(A)
    trace: list[TraceStep] = []
    elems = list(A)
    for step in range(1, steps + 1):
        i = int(rng.integers(len(elems)))
        p = int(rng.integers(1, L + 1)) * (1 if rng.integers(2) else -1)
        q = int(rng.integers(1, L + 1))
        new = Fraction(p, q)
        if new in A.members:
            trace.append(TraceStep(step, elems[i], new, key, False))
            continue
        cand_elems = elems[:i] + elems[i + 1 :] + [new]
        cand = GroundSet(cand_elems, _trusted=False)
        ck = obj.key(cand)
        ok = ck <= key
        trace.append(TraceStep(step, elems[i], new, ck, ok))
        if ok:
            A, key, elems = cand, ck, list(cand)
    return SearchState(
        current=A,
        objective=objective,
        key=key,
        value=obj.value(A),
        step=steps,
        rng_state=rng.bit_generator.state,
        start=label,
        seed=seed,
        trace=trace,
    )


__all__ = [
    "FamilySpec",
    "OBJECTIVES",
    "RNG_ALGORITHM",
    "SearchState",
    "TraceStep",
    "generate",
    "local_search",
    "make_rng",
    "parse_family",
]
