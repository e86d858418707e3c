"""Command-line front end.

Exit codes: 0 success, 1 exact-kind inequality violated, 2 unparsable input
or arguments, 3 precondition violated (including an exceeded budget).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import mpmath

from . import __version__, quantities
from .energy import RepHistogram
from .errors import BudgetExceeded, ExactInequalityViolated, InvalidParameterError, PreconditionViolated
from .families import RNG_ALGORITHM, OBJECTIVES, generate, local_search, parse_family
from .refine import DilationChoice, DStarWitness, RefinementCertificate
from .setcore import GroundSet, read_set_file, to_rational, write_set_file
from .verify import Sink, SuiteConfig, exponent_fit, run_suite
from .verify.harness import records_from_jsonl

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3
BUDGET_ENV = "SUMPRODLAB_BUDGET_MS"


class UsageError(Exception):
    """Bad input detected while reading arguments; maps to exit 2."""


def _budget(args) -> float:
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            value = float(env)
        except ValueError:
            raise UsageError(f"{BUDGET_ENV}={env!r} is not a number") from None
    else:
        value = args.budget_ms
    if value <= 0:
        raise UsageError("budget must be > 0")
    return value


def parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad size list {text!r}") from None
    if not sizes or any(n < 1 for n in sizes):
        raise UsageError(f"sizes must be positive integers, got {text!r}")
    return sizes


def parse_seeds(text: str) -> list[int]:
    """"7", "1,2,5" or an inclusive range "1..20"."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"bad seed list {text!r}") from None
    if not out:
        raise UsageError("empty seed list")
    return out


def _load_set(args) -> tuple[GroundSet, str]:
    if bool(args.set) == bool(args.family):
        raise UsageError("give exactly one of --set and --family")
    try:
        if args.set:
            return read_set_file(args.set), f"file:{args.set}"
        spec = parse_family(args.family)
        if spec.family != "file" and spec.n is None:
            raise UsageError(f"family {args.family!r} needs a size, e.g. {args.family}:16")
        return generate(spec), spec.descriptor
    except (InvalidParameterError, OSError) as exc:
        raise UsageError(str(exc)) from None


def _available_cpus() -> int:
    if hasattr(os, "sched_getaffinity"):
        return len(os.sched_getaffinity(0))
    return os.cpu_count() or 1


def _rational_arg(text: str, flag: str) -> Fraction:
    try:
        return to_rational(text)
    except InvalidParameterError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _qopts(args) -> dict:
    opts = {}
    if args.pin is not None:
        opts["pin"] = _rational_arg(args.pin, "--pin")
    if args.k is not None:
        opts["k"] = _rational_arg(args.k, "--k")
    if args.sign:
        opts["sign"] = args.sign
    return opts


def _frac(x: Fraction) -> str:
    return str(x)


def _jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value) if abs(value) >= 2**53 else value
    if isinstance(value, Fraction):
        return _frac(value)
    if isinstance(value, GroundSet):
        return value.to_strings()
    if isinstance(value, RepHistogram):
        return {"kind": value.kind, "entries": {_frac(k): c for k, c in value.entries.items()}}
    if isinstance(value, (RefinementCertificate, DStarWitness)):
        return value.to_dict()
    if isinstance(value, DilationChoice):
        return {
            "z": _frac(value.z),
            "overlap": value.overlap,
            "candidates": value.candidates,
            "bound_satisfied": value.bound_satisfied,
            "ratio": None if value.ratio is None else float(f"{value.ratio:.12g}"),
        }
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, 50)
    return str(value)


def _text(value: Any) -> str:
    if isinstance(value, RepHistogram):
        return value.to_csv().rstrip("\n")
    if isinstance(value, GroundSet):
        return " ".join(value.to_strings())
    if isinstance(value, (RefinementCertificate,)):
        return value.to_json()
    if isinstance(value, (DStarWitness, DilationChoice)):
        return json.dumps(_jsonable(value), sort_keys=True)
    return str(_jsonable(value))


# --------------------------------------------------------------------------
# subcommands


def cmd_compute(args) -> int:
    A, source = _load_set(args)
    opts = _qopts(args)
    if args.candidates:
        opts["candidates"] = args.candidates
    try:
        qs = [quantities.get(name) for name in args.quantity]
    except InvalidParameterError as exc:
        raise UsageError(str(exc)) from None
    budget = _budget(args)
    results = {}
    for q in qs:
        quantities.check_budget(q, len(A), budget)
        try:
            results[q.name] = q(A, **opts)
        except InvalidParameterError as exc:
            if "needs --" in str(exc):
                raise UsageError(str(exc)) from None
            raise
    if args.json:
        print(json.dumps({"source": source, "n": len(A), "results": {k: _jsonable(v) for k, v in results.items()}}, sort_keys=True))
    elif len(results) == 1:
        print(_text(next(iter(results.values()))))
    else:
        for name, v in results.items():
            print(f"{name}: {_text(v)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    seeds = parse_seeds(args.seeds)
    sizes = parse_sizes(args.sizes) if args.sizes else None
    families = args.family or ["random:1000000:seed=0"]
    try:
        for f in families:
            parse_family(f)
    except InvalidParameterError as exc:
        raise UsageError(str(exc)) from None
    workers = args.workers or _available_cpus()
    config = SuiteConfig(
        specs=args.specs,
        families=families,
        sizes=sizes,
        seeds=seeds,
        budget_ms=_budget(args),
        workers=workers,
        record_timings=args.record_timings,
        alpha=args.alpha,
    )
    try:
        config.instances()
    except PreconditionViolated as exc:
        raise UsageError(str(exc)) from None
    sink = Sink(args.jsonl, args.csv, args.table)
    report = run_suite(config, sink)
    if not args.quiet:
        sys.stdout.write(report.ratio_table())
    print(f"# {len(report.records)} records; jsonl={args.jsonl} csv={args.csv}", file=sys.stderr)
    if report.violation is not None:
        v = report.violation
        print(f"exact violation: {v.spec} on {v.instance}", file=sys.stderr)
        print(f"reproduce: {report.reproduce}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_scan(args) -> int:
    sizes = parse_sizes(args.sizes)
    try:
        spec = parse_family(args.family)
        q = quantities.get(args.quantity)
    except InvalidParameterError as exc:
        raise UsageError(str(exc)) from None
    opts = _qopts(args)
    fit = exponent_fit(spec, sizes, q.name, seed=args.seed, budget_ms=_budget(args), **opts)
    if args.json:
        print(json.dumps(fit.to_dict(), sort_keys=True))
    else:
        print("n,value")
        for n, v in zip(fit.sizes, fit.values):
            print(f"{n},{v:.12g}")
        print(f"# slope={fit.slope:.6f} intercept={fit.intercept:.6f} residual={fit.residual:.3g}")
    return EXIT_OK


def cmd_search(args) -> int:
    if args.objective not in OBJECTIVES:
        raise UsageError(f"unknown objective {args.objective!r}; choose from {', '.join(sorted(OBJECTIVES))}")
    try:
        start = parse_family(args.start)
    except InvalidParameterError as exc:
        raise UsageError(str(exc)) from None
    if args.steps < 0:
        raise UsageError("steps must be >= 0")
    state = local_search(args.objective, start, args.steps, args.seed)
    header = {**state.to_dict(), "record": "header"}
    lines = [json.dumps(header, sort_keys=True)]
    lines += [json.dumps(t.to_dict(), sort_keys=True) for t in state.trace]
    Path(args.trace).write_text("\n".join(lines) + "\n", encoding="utf-8")
    write_set_file(
        state.current,
        args.out,
        f"search objective={state.objective} start={state.start} steps={state.step} seed={state.seed}\n"
        f"key={state.key} value={state.value:.12g} rng={RNG_ALGORITHM}",
    )
    print(f"objective {state.objective}: key={state.key} value={state.value:.12g}")
    print(f"accepted {sum(t.accepted for t in state.trace)}/{len(state.trace)} moves")
    print(f"trace -> {args.trace}; final set -> {args.out}")
    return EXIT_OK


def cmd_report(args) -> int:
    from .verify.harness import InequalityRecord, Report

    rows = []
    for path in args.records:
        try:
            rows += records_from_jsonl(Path(path).read_text(encoding="utf-8").splitlines())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"{path}: {exc}") from None
    records = [
        InequalityRecord(
            r["spec"], r["kind"], r["relation"], r["family"], r["n"], r["seed"], None, None, r["ratio"],
            r["pass"], r["weakened"], r.get("note", ""), r.get("skipped"),
        )
        for r in rows
    ]
    summary = Report(records, []).csv_summary()
    if args.csv:
        Path(args.csv).write_text(summary, encoding="utf-8")
    sys.stdout.write(summary)
    failures = sum(1 for r in records if r.passed is False)
    return EXIT_VIOLATION if failures else EXIT_OK


# --------------------------------------------------------------------------


def _add_input(p):
    p.add_argument("--set", help="set file: one integer or p/q per line, '#' comments")
    p.add_argument("--family", help="family string, e.g. interval:16 or random:1000:32:seed=7")


def _add_budget(p):
    p.add_argument("--budget-ms", type=float, default=quantities.DEFAULT_BUDGET_MS,
                   help=f"per-instance budget from the cost model (env {BUDGET_ENV} overrides)")


def _add_qopts(p):
    p.add_argument("--pin", help="pinned element a for pinned-product")
    p.add_argument("--sign", choices=["+", "-"], help="shift sign for pinned quantities")
    p.add_argument("--k", help="moment order for energy-moment")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumprodlab", description="Exact sum-product laboratory")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="print quantities of one set")
    _add_input(p)
    p.add_argument("--quantity", action="append", required=True, help="quantity name (repeatable)")
    _add_qopts(p)
    p.add_argument("--candidates", choices=["inverse-elements", "ratio-times-inverse"])
    p.add_argument("--json", action="store_true")
    _add_budget(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run inequality checks over families")
    p.add_argument("--specs", default="*", help="comma-separated id globs, e.g. 'exact.*,T1'")
    p.add_argument("--family", action="append", help="family string (repeatable)")
    p.add_argument("--sizes", default="8,16,32", help="sizes for families given without one (default 8,16,32)")
    p.add_argument("--seeds", default="0", help="'7', '1,2,5' or '1..20'")
    p.add_argument("--alpha", type=int, default=1, help="shift for the A(A+α) specs")
    p.add_argument("--jsonl", default="sumprodlab-records.jsonl")
    p.add_argument("--csv", default="sumprodlab-summary.csv")
    p.add_argument("--table", help="optional per-record CSV path")
    p.add_argument("--workers", type=int, default=0, help="worker processes (0 = available CPUs)")
    p.add_argument("--record-timings", action="store_true", help="store elapsed_ms (breaks byte-identical output)")
    p.add_argument("--quiet", action="store_true")
    _add_budget(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="size sweep and log-log slope")
    p.add_argument("--family", required=True)
    p.add_argument("--quantity", required=True)
    p.add_argument("--sizes", required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_qopts(p)
    p.add_argument("--json", action="store_true")
    _add_budget(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("search", help="local search for near-extremal sets")
    p.add_argument("--objective", required=True)
    p.add_argument("--start", required=True, help="family string of the start set")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", default="search-trace.jsonl")
    p.add_argument("--out", default="search-final.txt")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("report", help="summarize JSON-lines records")
    p.add_argument("records", nargs="+")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ExactInequalityViolated as exc:
        print(f"exact violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except BudgetExceeded as exc:
        print(f"precondition violated: budget: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except PreconditionViolated as exc:
        print(f"precondition violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
