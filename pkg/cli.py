#!/usr/bin/env python3
"""
Command-line surface: bounds, exact, verify, compare and sample.

Exit codes: 0 success, 1 malformed arguments, 2 precondition failure,
3 containment violation.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import comparators
import exact_oracles
import logspace
import noncentral
import regime_dispatch
import stochastic_validation
from config import Settings, load_settings
from errors import (ConfigError, ContainmentViolation, IntegralityError,
                    InvalidIndexError, OrderCapExceededError, PowerTooLargeError,
                    PreconditionError, StirlingError)
from stirling_types import BoundBracket, Index, Method

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_PRECONDITION = 2
EXIT_VIOLATION = 3

CSV_FIELDS = ("n", "m", "method", "lower_log", "upper_log", "rel_width", "regime", "verified")

METHOD_FLAGS = {
    "thm33": Method.THM33,
    "thm34": Method.THM34,
    "thm45": Method.THM45,
}


@dataclass(frozen=True)
class OutputRecord:
    """
    One printed row. ``lower_log``/``upper_log`` are kept as text so the
    working-precision value (or the exact decimal integer under --linear)
    survives a round trip bit for bit.
    """
    n: int
    m: int
    method: str
    lower_log: str
    upper_log: str
    rel_width: float
    regime: str
    verified: Optional[bool] = None

    def to_csv_row(self) -> str:
        verified = "" if self.verified is None else str(self.verified).lower()
        return ",".join([str(self.n), str(self.m), self.method, self.lower_log,
                         self.upper_log, repr(self.rel_width), self.regime, verified])

    @classmethod
    def from_csv(cls, line: str) -> "OutputRecord":
        row = next(csv.reader(io.StringIO(line)))
        if len(row) != len(CSV_FIELDS):
            raise ValueError(f"expected {len(CSV_FIELDS)} fields, got {len(row)}: {line!r}")
        n, m, method, lower, upper, width, regime, verified = row
        return cls(int(n), int(m), method, lower, upper, float(width), regime,
                   None if verified == "" else verified == "true")

    def to_json(self) -> str:
        data = asdict(self)
        # json has no infinity literal
        data["rel_width"] = repr(self.rel_width)
        return json.dumps(data, sort_keys=False)

    @classmethod
    def from_json(cls, line: str) -> "OutputRecord":
        data = json.loads(line)
        data["rel_width"] = float(data["rel_width"])
        return cls(**data)

    def to_text(self) -> str:
        verified = "" if self.verified is None else f"  verified={self.verified}"
        return (f"S({self.n},{self.m})  {self.method:<14} "
                f"lower_log={self.lower_log}  upper_log={self.upper_log}  "
                f"rel_width={self.rel_width:.6g}  regime={self.regime}{verified}")


def record_from_bracket(bracket: BoundBracket, regime: str, verified: Optional[bool] = None,
                        linear: bool = False) -> OutputRecord:
    idx = bracket.index
    if linear and bracket.exact is not None:
        lower = upper = str(bracket.exact)
    else:
        lower = logspace.format_log(bracket.lower_log)
        upper = logspace.format_log(bracket.upper_log)
    width = bracket.width
    rel_width = float(width) if logspace.is_finite(width) else math.inf
    return OutputRecord(idx.n, idx.m, bracket.method.value, lower, upper,
                        rel_width, regime, verified)


def emit(records: Sequence[OutputRecord], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "csv":
        print(",".join(CSV_FIELDS), file=out)
        for r in records:
            print(r.to_csv_row(), file=out)
    elif fmt == "jsonl":
        for r in records:
            print(r.to_json(), file=out)
    else:
        for r in records:
            print(r.to_text(), file=out)


class CLIParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def _index(args) -> Index:
    return Index(args.n, args.m)


def _exact_bracket(idx: Index, settings: Settings) -> BoundBracket:
    """Width-zero bracket from a closed form or the exact expansion."""
    report = regime_dispatch.best_bracket(idx, settings=settings)
    if report.chosen.method.is_exact:
        return report.chosen
    if idx.n > settings.exactness_cap:
        raise PreconditionError(f"exact value requires n <= exactness cap {settings.exactness_cap}, got n={idx.n}")
    value = noncentral.expansion_exact(idx, settings.expansion_order_cap)
    return BoundBracket.exact_value(idx, Method.EXPANSION, value, "exact central-moment expansion")


def cmd_bounds(args, settings: Settings) -> int:
    idx = _index(args)
    regime = regime_dispatch.classify(idx).label.value
    if args.method == "auto":
        report = regime_dispatch.best_bracket(idx, settings=settings)
        brackets = [report.chosen]
    elif args.method == "all":
        brackets = regime_dispatch.best_bracket(idx, settings=settings).brackets
    elif args.method == "exact":
        brackets = [_exact_bracket(idx, settings)]
    else:
        bracket = regime_dispatch.brackets_for(idx, settings)[METHOD_FLAGS[args.method]]
        if not bracket.preconditions_ok:
            raise PreconditionError(bracket.report)
        brackets = [bracket]
    emit([record_from_bracket(b, regime, linear=args.linear) for b in brackets], args.format)
    return EXIT_OK


def cmd_exact(args, settings: Settings) -> int:
    idx = _index(args)
    if idx.n > settings.exactness_cap:
        raise PreconditionError(f"n={idx.n} exceeds the exactness cap {settings.exactness_cap}")
    value = exact_oracles.stirling_exact(idx)
    if args.format == "text":
        print(value)
        return EXIT_OK
    regime = regime_dispatch.classify(idx).label.value
    emit([OutputRecord(idx.n, idx.m, "recurrence", str(value), str(value), 0.0, regime, True)],
         args.format)
    return EXIT_OK


@dataclass
class RowSummary:
    """Containment tallies for one n-row of the verification grid."""
    n: int
    applicable: Counter = field(default_factory=Counter)
    contained: Counter = field(default_factory=Counter)
    vacuous_lower: Counter = field(default_factory=Counter)
    violations: List[str] = field(default_factory=list)
    records: List[OutputRecord] = field(default_factory=list)


@lru_cache(maxsize=None)
def _cdf_column(m: int, k_max: int):
    """P(V_{m-1} <= k) for k = 0..k_max, shared by every row of the sweep."""
    return exact_oracles.geometric_sum_cdf_exact(m, k_max)


def _probability_route(idx: Index, k_max: int) -> Fraction:
    return Fraction(idx.m ** idx.n, math.factorial(idx.m)) * _cdf_column(idx.m, k_max)[idx.d]


def verify_row(n: int, settings: Settings, n_max: Optional[int] = None) -> RowSummary:
    summary = RowSummary(n)
    row = exact_oracles.stirling_row(n)
    n_max = max(n, n_max or n)
    for m in range(1, n + 1):
        idx = Index(n, m)
        exact = row[m]
        exact_log = logspace.exact_log(exact)

        if idx.d <= settings.moment_order_cap:
            if exact_oracles.stirling_via_moments(idx, settings.moment_order_cap) != exact:
                summary.violations.append(f"{idx} moment route")
        if m >= 2 and n <= settings.probability_route_cap:
            k_max = min(n_max, settings.probability_route_cap) - m
            if _probability_route(idx, k_max) != exact:
                summary.violations.append(f"{idx} probability route")

        report = regime_dispatch.best_bracket(idx, settings=settings)
        brackets = list(report.brackets)
        if report.chosen.method.is_exact:
            # the closed form short-circuits dispatch; the bounds still apply here
            brackets += [b for b in regime_dispatch.brackets_for(idx, settings).values()
                         if b.preconditions_ok]
        for b in brackets:
            name = b.method.value
            summary.applicable[name] += 1
            if b.method in report.donors or (report.chosen.method.is_exact and b.lower_is_vacuous):
                summary.vacuous_lower[name] += 1
            if b.contains_log(exact_log):
                summary.contained[name] += 1
            else:
                summary.violations.append(f"{idx} {name}")
        if m < n:
            rd = comparators.rennie_dobson_bracket(idx)
            name = comparators.ComparatorMethod.RENNIE_DOBSON.value
            summary.applicable[name] += 1
            if rd.lower_exact <= exact <= rd.upper_exact:
                summary.contained[name] += 1
            else:
                summary.violations.append(f"{idx} {name}")
        summary.records.append(record_from_bracket(
            report.chosen, report.label.label.value,
            verified=report.chosen.contains_log(exact_log)))
    return summary


def _verify_row_task(payload):
    n, settings, n_max = payload
    return verify_row(n, settings, n_max)


def run_verify(n_max: int, settings: Settings, jobs: int = 1) -> List[RowSummary]:
    """Rows 1..n_max, merged in n order whatever the job count."""
    _cdf_column.cache_clear()
    payloads = [(n, settings, n_max) for n in range(1, n_max + 1)]
    if jobs <= 1:
        summaries = [_verify_row_task(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            summaries = list(pool.map(_verify_row_task, payloads))
    return sorted(summaries, key=lambda s: s.n)


def merge_summaries(summaries: Sequence[RowSummary]) -> Dict[str, Counter]:
    totals = {"applicable": Counter(), "contained": Counter(), "vacuous_lower": Counter()}
    for s in summaries:
        totals["applicable"].update(s.applicable)
        totals["contained"].update(s.contained)
        totals["vacuous_lower"].update(s.vacuous_lower)
    return totals


def cmd_verify(args, settings: Settings) -> int:
    if args.n_max < 2:
        raise InvalidIndexError(f"--n-max must be >= 2, got {args.n_max}")
    summaries = run_verify(args.n_max, settings, args.jobs)
    totals = merge_summaries(summaries)
    violations = [v for s in summaries for v in s.violations]

    if args.format == "text":
        print(f"[verify] grid 1 <= m <= n <= {args.n_max}")
        for name in sorted(totals["applicable"]):
            print(f"[verify] {name:<14} applicable={totals['applicable'][name]} "
                  f"contained={totals['contained'][name]} "
                  f"vacuous_lower={totals['vacuous_lower'][name]}")
        print(f"[verify] violations={len(violations)}")
    else:
        emit([r for s in summaries for r in s.records], args.format)

    if violations:
        for v in violations:
            print(f"[verify] containment violation at {v}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_compare(args, settings: Settings) -> int:
    idx = _index(args)
    regime = regime_dispatch.classify(idx).label.value
    exact_log = None
    if idx.n <= settings.exactness_cap:
        exact_log = logspace.exact_log(exact_oracles.stirling_exact(idx))

    records = []
    report = regime_dispatch.best_bracket(idx, settings=settings)
    for method, bracket in regime_dispatch.brackets_for(idx, settings).items():
        if not bracket.preconditions_ok:
            continue
        verified = None if exact_log is None else bracket.contains_log(exact_log)
        records.append(record_from_bracket(bracket, regime, verified))
    if report.chosen.method.is_exact:
        records.insert(0, record_from_bracket(report.chosen, regime, True))

    estimates = list(comparators.jordan_estimates(idx))
    if idx.m < idx.n:
        rd = comparators.rennie_dobson_bracket(idx)
        verified = None if exact_log is None else rd.lower_log <= exact_log <= rd.upper_log
        records.append(OutputRecord(idx.n, idx.m, rd.method.value,
                                    logspace.format_log(rd.lower_log),
                                    logspace.format_log(rd.upper_log),
                                    _log_width(rd.lower_log, rd.upper_log), regime, verified))
        estimates.append(comparators.moser_wyman_leading(idx))
    for est in estimates:
        text = logspace.format_log(est.value_log)
        records.append(OutputRecord(idx.n, idx.m, est.method.value, text, text, 0.0, regime))

    if args.format == "text":
        print(f"S{idx}  regime={regime}  narrowest certified: {report.chosen.method.value}")
        if exact_log is not None:
            print(f"exact log S = {logspace.format_log(exact_log)}")
        for method, text in regime_dispatch.descriptions(settings).items():
            print(f"  {method.value:<14} {text}")
        for r in records:
            note = "" if exact_log is None else f"  rel_error={_relative_error(r, exact_log)}"
            print(r.to_text() + note)
    else:
        emit(records, args.format)
    return EXIT_OK


def _log_width(lower, upper) -> float:
    if logspace.is_finite(lower) and logspace.is_finite(upper):
        return float(upper - lower)
    return math.inf


def _relative_error(record: OutputRecord, exact_log) -> str:
    """Point estimates only: exp(estimate - exact) - 1."""
    if record.lower_log != record.upper_log or record.verified is not None:
        return "-"
    diff = logspace.mpf(record.lower_log) - exact_log
    return logspace.ctx.nstr(logspace.ctx.expm1(diff), 6)


def cmd_sample(args, settings: Settings) -> int:
    idx = _index(args)
    try:
        if args.target == "prob":
            report = stochastic_validation.mc_probability_representation(
                idx, args.samples, args.seed, settings.rng_name)
        else:
            report = stochastic_validation.mc_moment_representation(
                idx, args.samples, args.seed, settings.rng_name, settings.mc_power_cap)
    except (InvalidIndexError, PowerTooLargeError) as e:
        raise PreconditionError(str(e)) from e
    z = stochastic_validation.z_score(report)
    print(f"[sample] S{idx} target={report.target.value} samples={report.n_samples} seed={report.seed}")
    print(f"[sample] estimate={report.estimate!r} std_error={report.std_error!r}")
    print(f"[sample] reference={logspace.ctx.nstr(report.reference, 20)} z={z:.4f}")
    return EXIT_OK


def build_parser(settings: Settings) -> CLIParser:
    parser = CLIParser(prog="stirling", description="Certified bounds for Stirling numbers of the second kind")
    parser.add_argument('--verbose', action='store_true', default=False,
                        help='Debug logging of solver and dispatch decisions')
    sub = parser.add_subparsers(dest="command", required=True)

    def add_index(p):
        p.add_argument('--n', type=int, required=True, help='Set size n')
        p.add_argument('--m', type=int, required=True, help='Number of blocks m (1 <= m <= n)')

    def add_format(p):
        p.add_argument('--format', choices=["text", "csv", "jsonl"], default="text",
                       help='Output encoding (default: text)')

    p = sub.add_parser("bounds", help="Certified bracket(s) for S(n, m)")
    add_index(p)
    p.add_argument('--method', choices=["auto", "thm33", "thm34", "thm45", "exact", "all"],
                   default="auto", help='Which bracket to print (default: auto)')
    add_format(p)
    p.add_argument('--linear', action='store_true', default=False,
                   help='Print exact values as decimal integers instead of logs')
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("exact", help="Exact S(n, m) by the recurrence")
    add_index(p)
    add_format(p)
    p.set_defaults(handler=cmd_exact)

    p = sub.add_parser("verify", help="Containment sweep over 1 <= m <= n <= n_max")
    p.add_argument('--n-max', type=int, required=True, help='Largest n of the grid')
    p.add_argument('--seed', type=int, default=settings.default_seed,
                   help='Accepted for symmetry with sample; the sweep is deterministic')
    p.add_argument('--jobs', type=int, default=1, help='Worker processes (default: 1)')
    add_format(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("compare", help="Certified brackets next to the classical estimates")
    add_index(p)
    add_format(p)
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("sample", help="Monte-Carlo check of a probabilistic representation")
    add_index(p)
    p.add_argument('--target', choices=["prob", "moment"], required=True)
    p.add_argument('--samples', type=int, default=100_000, help='Number of draws')
    p.add_argument('--seed', type=int, default=settings.default_seed,
                   help='Seed of the counter-based generator')
    p.set_defaults(handler=cmd_sample)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        settings = load_settings()
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_MALFORMED

    parser = build_parser(settings)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    if getattr(args, "samples", 1) < 1:
        parser.error("--samples must be >= 1")
    if getattr(args, "seed", 0) < 0:
        parser.error("--seed must be >= 0")

    try:
        return args.handler(args, settings)
    except InvalidIndexError as e:
        print(f"Invalid arguments: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except (PreconditionError, OrderCapExceededError) as e:
        print(f"Precondition failed: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ContainmentViolation, IntegralityError) as e:
        print(f"Containment violation: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except StirlingError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
