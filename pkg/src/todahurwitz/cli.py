"""Command-line interface.

Exit codes: 0 ok, 2 usage or domain error, 3 oracle budget exceeded,
4 cross-check disagreement, 5 series identity failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, _kernels
from .coefficients import FORMULA_VERSION, CoefficientCache, n_coeff, nonzero_n_coeffs, set_cache
from .errors import BudgetExceeded, CacheVersionError, DomainError, PartitionParseError
from .hurwitz import (
    evaluate_pair,
    format_fraction,
    hurwitz_table,
    record_to_json,
    records_to_csv,
    records_to_pretty,
)
from .oracle import DEFAULT_BUDGET, oracle_count
from .partitions import CoeffMatrix, parse_partition
from .series import expand_tau, run_all_checks, series_to_json

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_DISAGREE = 4
EXIT_IDENTITY = 5


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit_records(records, fmt: str, out) -> None:
    if fmt == "json":
        out.write(_dump([record_to_json(r) for r in records]))
    elif fmt == "csv":
        out.write(records_to_csv(records))
    else:
        out.write(records_to_pretty(records))


def _disagreements(rec) -> list[str]:
    problems = []
    if rec.closed_form is not None and rec.closed_form != rec.value:
        problems.append(
            f"({rec.delta}|{rec.delta_bar}): theorem31 {format_fraction(rec.value)} != closed_form {format_fraction(rec.closed_form)}"
        )
    if rec.oracle_status == "ok" and rec.oracle != rec.value:
        problems.append(
            f"({rec.delta}|{rec.delta_bar}): theorem31 {format_fraction(rec.value)} != oracle {format_fraction(rec.oracle)}"
        )
    return problems


def cmd_hurwitz(args, out, err) -> int:
    delta = parse_partition(args.delta)
    delta_bar = parse_partition(args.delta_bar)
    rec = evaluate_pair(delta, delta_bar, oracle=args.verify, budget=args.budget)
    if args.verify and rec.oracle_status == "budget_exceeded":
        _emit_records([rec], args.format, out)
        err.write(f"oracle budget {args.budget} exceeded for ({delta}|{delta_bar})\n")
        return EXIT_BUDGET
    if args.format == "json":
        out.write(_dump(record_to_json(rec)))
    else:
        _emit_records([rec], args.format, out)
    problems = _disagreements(rec)
    for p in problems:
        err.write(p + "\n")
    return EXIT_DISAGREE if problems else EXIT_OK


def cmd_table(args, out, err) -> int:
    records = hurwitz_table(args.d_max, oracle=args.verify, budget=args.budget, jobs=args.jobs)
    _emit_records(records, args.format, out)
    problems = [p for rec in records for p in _disagreements(rec)]
    for p in problems:
        err.write(p + "\n")
    return EXIT_DISAGREE if problems else EXIT_OK


def cmd_coeff(args, out, err) -> int:
    delta = parse_partition(args.delta)
    delta_bar = parse_partition(args.delta_bar)
    if args.matrix:
        matrix = CoeffMatrix.parse(args.matrix)
        if delta.weight != delta_bar.weight:
            raise DomainError(f"weights differ: {delta.weight} != {delta_bar.weight}")
        rows = [(matrix, n_coeff(delta, delta_bar, matrix))]
    else:
        rows = nonzero_n_coeffs(delta, delta_bar)
    payload = {
        "delta": delta.to_list(),
        "delta_bar": delta_bar.to_list(),
        "coefficients": [
            {"s": list(m.s), "r": list(m.r), "N": format_fraction(Fraction(v))} for m, v in rows
        ],
    }
    if args.format == "json":
        out.write(_dump(payload))
    else:
        for m, v in rows:
            out.write(f"{m}\t{format_fraction(Fraction(v))}\n")
    return EXIT_OK


def cmd_oracle(args, out, err) -> int:
    delta = parse_partition(args.delta)
    delta_bar = parse_partition(args.delta_bar)
    try:
        res = oracle_count(delta, delta_bar, args.budget, jobs=args.jobs)
    except BudgetExceeded as exc:
        err.write(f"{exc}\n")
        return EXIT_BUDGET
    payload = {
        "delta": delta.to_list(),
        "delta_bar": delta_bar.to_list(),
        "d": delta.weight,
        "l": delta.length + delta_bar.length - 2,
        "rep_count": str(res.rep_count),
        "count": str(res.count),
        "value": {"num": str(res.value.numerator), "den": str(res.value.denominator)},
    }
    if args.format == "json":
        out.write(_dump(payload))
    else:
        out.write(f"({delta}|{delta_bar}) count={res.count} value={format_fraction(res.value)}\n")
    return EXIT_OK


def cmd_series_check(args, out, err) -> int:
    from .algebra import family_from_name

    if args.family == "homogeneous" and args.alpha is None:
        raise DomainError("--alpha is required for the homogeneous family")
    if args.family == "hurwitz" and args.alpha is not None:
        raise DomainError("--alpha only applies to the homogeneous family")
    alpha = Fraction(args.alpha) if args.alpha is not None else None
    if alpha is not None and alpha <= 0:
        raise DomainError("--alpha must be positive")
    family = family_from_name(args.family, alpha)
    if args.depth < 0:
        raise DomainError("--depth must be non-negative")
    reports = run_all_checks(family, args.depth, toda_depth=args.toda_depth)
    if args.export:
        Path(args.export).write_text(_dump(series_to_json(expand_tau(family, args.depth))), encoding="utf-8")
    if args.format == "json":
        out.write(_dump({"family": family.name, "params": family.params(), "depth": args.depth,
                         "passed": all(r.passed for r in reports),
                         "reports": [r.to_json() for r in reports]}))
    else:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            out.write(f"{status}  {r.name:<18} {len(r.results):>4} identities\n")
    for r in reports:
        bad = r.first_failure
        if bad is not None:
            err.write(f"{r.name}: identity {bad.identity!r} fails at monomial {bad.monomial}: {bad.lhs} != {bad.rhs}\n")
            return EXIT_IDENTITY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="todahurwitz",
        description="Universal Toda coefficients and genus-0 double Hurwitz numbers in exact arithmetic.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"todahurwitz {__version__} (formulas {FORMULA_VERSION}, oracle backend {_kernels.BACKEND})",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", metavar="PATH", help="load/save the coefficient cache at PATH")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "csv", "pretty"), default="json")

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="oracle iteration cap")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hurwitz", parents=[common, fmt, budget], help="one Hurwitz number")
    p.add_argument("delta")
    p.add_argument("delta_bar")
    p.add_argument("--verify", action="store_true", help="also run closed forms and the oracle")
    p.set_defaults(func=cmd_hurwitz)

    p = sub.add_parser("table", parents=[common, fmt, budget], help="all pairs up to a degree")
    p.add_argument("d_max", type=int)
    p.add_argument("--verify", action="store_true", help="add oracle values for feasible pairs")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("coeff", parents=[common, fmt], help="universal coefficients N for a pair")
    p.add_argument("delta")
    p.add_argument("delta_bar")
    p.add_argument("--matrix", help="a single matrix 's1,..|r1,..'")
    p.set_defaults(func=cmd_coeff)

    p = sub.add_parser("oracle", parents=[common, fmt, budget], help="brute-force factorization count")
    p.add_argument("delta")
    p.add_argument("delta_bar")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("series-check", parents=[common, fmt], help="verify series identities")
    p.add_argument("family", choices=("hurwitz", "homogeneous"))
    p.add_argument("--depth", type=int, required=True, help="weight bound of the expansion")
    p.add_argument("--alpha", help="alpha for the homogeneous family (rational, e.g. 1/2)")
    p.add_argument("--toda-depth", type=int, default=None, help="depth of the Toda check (default depth-1)")
    p.add_argument("--export", metavar="PATH", help="write the expansion as JSON")
    p.set_defaults(func=cmd_series_check)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    cache_path = Path(args.cache) if args.cache else None
    try:
        if cache_path is not None and cache_path.exists():
            set_cache(CoefficientCache.load(cache_path))
        code = args.func(args, out, err)
    except (DomainError, PartitionParseError, CacheVersionError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    if cache_path is not None:
        from .coefficients import get_cache

        get_cache().save(cache_path)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
