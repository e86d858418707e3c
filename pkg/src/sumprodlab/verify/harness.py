"""Checking specs on instances, and the suite runner with its output sinks."""

from __future__ import annotations

import csv
import io
import json
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .. import quantities
from ..bounds import Value, decide, ratio, to_float, to_text
from ..errors import ExactInequalityViolated, PreconditionViolated
from ..families import RNG_ALGORITHM, FamilySpec, generate, parse_family
from ..setcore import GroundSet
from .fit import ExponentFit, fit_loglog
from .registry import Aux, InequalitySpec, Instance, get_spec, select

_EXACT_KINDS = ("exact", "identity")


@dataclass(frozen=True)
class InequalityRecord:
    spec: str
    kind: str
    relation: str
    family: str
    n: int
    seed: int
    lhs: Value | None
    rhs: Value | None
    ratio: float | None
    passed: bool | None
    weakened: bool
    note: str = ""
    skipped: str | None = None
    elapsed_ms: float | None = None

    @property
    def instance(self) -> str:
        return f"{self.family} n={self.n} seed={self.seed}"

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "kind": self.kind,
            "relation": self.relation,
            "family": self.family,
            "n": self.n,
            "seed": self.seed,
            "lhs": None if self.lhs is None else to_text(self.lhs),
            "rhs": None if self.rhs is None else to_text(self.rhs),
            "ratio": None if self.ratio is None else float(f"{self.ratio:.12g}"),
            "pass": self.passed,
            "weakened": self.weakened,
            "note": self.note,
            "skipped": self.skipped,
            "elapsed_ms": self.elapsed_ms,
            "rng": RNG_ALGORITHM,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


def _evaluate(spec: InequalitySpec, inst: Instance, family: str, seed: int, timed: bool) -> InequalityRecord:
    err = spec.precondition_error(inst)
    if err is not None:
        raise err
    t0 = time.perf_counter()
    ev = spec.evaluate(inst)
    elapsed = round((time.perf_counter() - t0) * 1000, 3) if timed else None
    r = ratio(ev.lhs, ev.rhs)
    passed = decide(ev.lhs, spec.relation, ev.rhs) if spec.kind in _EXACT_KINDS else None
    note = "; ".join(x for x in (ev.note, "witness-weakened" if spec.weakened else "", spec.log_note) if x)
    return InequalityRecord(
        spec.id, spec.kind, spec.relation, family, inst.n, seed, ev.lhs, ev.rhs, r, passed, spec.weakened, note,
        None, elapsed,
    )


def check(
    spec: InequalitySpec | str,
    A: GroundSet,
    aux: Aux | None = None,
    *,
    family: str = "custom",
    seed: int = 0,
    timed: bool = False,
    instance: Instance | None = None,
) -> InequalityRecord:
    """Evaluate one spec on A; exact-kind failures raise ExactInequalityViolated.

    Preconditions raise PreconditionViolated subclasses, including
    TooSmallError for sizes where the statement degenerates.
    """
    if isinstance(spec, str):
        spec = get_spec(spec)
    inst = instance or Instance(A, aux)
    small = spec.too_small(inst)
    if small is not None:
        raise small
    rec = _evaluate(spec, inst, family, seed, timed)
    if rec.passed is False:
        raise ExactInequalityViolated(
            spec.id, rec.instance, f"{to_text(rec.lhs)} {spec.relation} {to_text(rec.rhs)} fails"
        )
    return rec


def exact_suite(A: GroundSet, B: GroundSet | None = None, alpha=1) -> list[InequalityRecord]:
    """All exact and identity specs on (A, B).

    Specs needing 0 outside the sets are skipped when 0 is present.
    """
    inst = Instance(A, Aux.make(B, alpha))
    out = []
    for spec in select("exact.*"):
        if spec.precondition_error(inst) is not None or spec.too_small(inst) is not None:
            continue
        out.append(check(spec, A, instance=inst))
    return out


# --------------------------------------------------------------------------
# suite runs


@dataclass
class SuiteConfig:
    specs: str | list[str] | None = None
    families: list[str] = field(default_factory=lambda: ["random:1000:seed=0"])
    sizes: list[int] | None = None
    seeds: list[int] = field(default_factory=lambda: [0])
    budget_ms: float = quantities.DEFAULT_BUDGET_MS
    workers: int = 1
    record_timings: bool = False
    alpha: int = 1

    def instances(self) -> list[tuple[FamilySpec, int]]:
        """(family with size and seed, seed) in (family, size, seed) order."""
        out = []
        for text in self.families:
            base = parse_family(text)
            if base.family == "file":
                out.append((base, 0))
                continue
            # an explicit size in the family string wins over the sweep sizes
            sizes = [base.n] if base.n is not None else (self.sizes or [])
            if not sizes:
                raise PreconditionViolated(f"family {text!r} has no size and no sizes were given")
            seeded = base.family in ("random", "perturbed-ap")
            for n in sorted(sizes):
                for s in self.seeds if seeded else [base.seed]:
                    out.append((base.with_size(n).with_seed(s), s))
        return out


@dataclass
class Report:
    records: list[InequalityRecord]
    fits: list[ExponentFit]
    violation: InequalityRecord | None = None
    reproduce: str | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    def jsonl(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    def csv_summary(self) -> str:
        groups: dict[tuple[str, str], list[InequalityRecord]] = {}
        for r in self.records:
            groups.setdefault((r.spec, _family_key(r.family)), []).append(r)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["spec", "family", "kind", "count", "skipped", "min_ratio", "median_ratio", "max_ratio", "failures"])
        for (spec, fam), recs in groups.items():
            ratios = [r.ratio for r in recs if r.ratio is not None]
            fails = sum(1 for r in recs if r.passed is False)
            stats = [f"{min(ratios):.12g}", f"{statistics.median(ratios):.12g}", f"{max(ratios):.12g}"] if ratios else ["", "", ""]
            w.writerow([spec, fam, recs[0].kind, len(recs), sum(1 for r in recs if r.skipped), *stats, fails])
        return buf.getvalue()

    def ratio_table(self) -> str:
        """Per-record CSV: spec, family, n, seed, lhs, rhs, ratio."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["spec", "family", "n", "seed", "lhs", "rhs", "ratio", "pass", "note"])
        for r in self.records:
            d = r.to_dict()
            w.writerow([r.spec, r.family, r.n, r.seed, d["lhs"], d["rhs"], d["ratio"], d["pass"], r.skipped or r.note])
        return buf.getvalue()


def _family_key(descriptor: str) -> str:
    """Family descriptor without the size field."""
    fam = parse_family(descriptor)
    return fam.with_size(None).with_seed(0).descriptor if fam.family != "file" else descriptor


def _run_instance(args: tuple) -> list[InequalityRecord]:
    spec_ids, fam_text, seed, budget_ms, timed, alpha = args
    fam = parse_family(fam_text)
    A = generate(fam)
    inst = Instance(A, Aux.make(None, alpha))
    out = []
    for sid in spec_ids:
        spec = get_spec(sid)
        skip = None
        if spec.too_small(inst) is not None:
            skip = f"too-small (< {spec.min_size})"
        elif spec.precondition_error(inst) is not None:
            skip = f"precondition: {spec.precondition_error(inst)}"
        elif len(A) ** spec.cost / quantities.OPS_PER_MS > budget_ms:
            skip = f"budget: estimated {len(A) ** spec.cost / quantities.OPS_PER_MS:.0f} ms > {budget_ms:.0f} ms"
        if skip:
            out.append(InequalityRecord(sid, spec.kind, spec.relation, fam.descriptor, len(A), seed, None, None, None, None, spec.weakened, "", skip))
            continue
        out.append(_evaluate(spec, inst, fam.descriptor, seed, timed))
    return out


def reproduce_command(rec: InequalityRecord) -> str:
    return f"sumprodlab verify --specs {rec.spec} --family {rec.family} --seeds {rec.seed}"


def run_suite(config: SuiteConfig, sink: "Sink | None" = None) -> Report:
    """Evaluate the selected specs on every configured instance.

    Records come out ordered by (spec, family, size, seed) whatever the worker
    count.  The first exact-kind failure stops the run.
    """
    specs = select(config.specs)
    if not specs:
        report = Report([], [])
        if sink:
            sink.write(report)
        return report
    ids = [s.id for s in specs]
    tasks = [(ids, fam.descriptor, seed, config.budget_ms, config.record_timings, config.alpha) for fam, seed in config.instances()]
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            per_instance = list(pool.map(_run_instance, tasks))
    else:
        per_instance = [_run_instance(t) for t in tasks]
    order = {sid: i for i, sid in enumerate(ids)}
    # tasks are already in (family, size, seed) order; a stable sort by spec finishes the job
    flat = [r for recs in per_instance for r in recs]
    flat.sort(key=lambda r: order[r.spec])
    violation = next((r for r in flat if r.passed is False), None)
    fits = _growth_fits(flat)
    report = Report(flat, fits, violation, reproduce_command(violation) if violation else None)
    if sink:
        sink.write(report)
    return report


def _growth_fits(records: Sequence[InequalityRecord]) -> list[ExponentFit]:
    """Slope of log LHS against log n for each (spec, family) with >= 4 sizes."""
    series: dict[tuple[str, str], dict[int, float]] = {}
    for r in records:
        if r.ratio is None or r.lhs is None:
            continue
        v = to_float(r.lhs)
        if v <= 0:
            continue
        series.setdefault((r.spec, _family_key(r.family)), {}).setdefault(r.n, v)
    fits = []
    for (spec, fam), pts in series.items():
        if len(pts) < 4:
            continue
        sizes = sorted(pts)
        vals = [pts[n] for n in sizes]
        slope, intercept, ssr = fit_loglog(sizes, vals)
        fits.append(ExponentFit(fam, f"{spec}:lhs", tuple(sizes), tuple(vals), slope, intercept, ssr))
    return fits


class Sink:
    """Writes the JSON-lines records and the CSV summary (both always)."""

    def __init__(self, jsonl_path: str | os.PathLike, csv_path: str | os.PathLike, table_path: str | os.PathLike | None = None):
        self.jsonl_path = Path(jsonl_path)
        self.csv_path = Path(csv_path)
        self.table_path = Path(table_path) if table_path else None

    def write(self, report: Report) -> None:
        self.jsonl_path.write_text(report.jsonl(), encoding="utf-8")
        self.csv_path.write_text(report.csv_summary(), encoding="utf-8")
        if self.table_path:
            self.table_path.write_text(report.ratio_table(), encoding="utf-8")


def records_from_jsonl(lines: Iterable[str]) -> list[dict]:
    return [json.loads(line) for line in lines if line.strip()]
