"""Command-line surface: series inspection, batch verification, count tables.

Subcommands
    expand         print the exact series of one theta atom
    verify         run one registry record
    verify-all     run the whole registry (optionally filtered)
    verify-file    verify every identity in a DSL file
    sumsq          table of lattice representation counts vs. the formulas
    numeric-check  sample one record numerically with an explicit plan

Exit codes: 0 when everything passes, 1 on a verification failure, 2 on a
usage or configuration error.  JSON output is deterministic for fixed argv
apart from the elapsed_ms fields.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import arith, dsl
from . import identities as ids
from .cyclotomic import CycloNumber, OrderError
from .numeric import ConvergenceError, SamplePlan
from .qseries import GradingError, QSeries
from .thetaforms import (
    Characteristic,
    theta_constant,
    theta_deriv_normalized,
    theta_min_grading,
    theta_phase_order,
)

__all__ = ["main"]

_EXIT_OK = 0
_EXIT_FAIL = 1
_EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# Coefficient formatting
# ---------------------------------------------------------------------------


def _coords_at(coeff: CycloNumber, order: int) -> list[str]:
    return [str(c) for c in coeff.embed(order).coords]


def _human_coeff(coeff: CycloNumber) -> str:
    """Dense power-basis coordinates at the smallest order that carries them."""
    small_order, data = coeff._display_pair()
    small = CycloNumber(small_order, data)
    coords = ", ".join(str(c) for c in small.coords)
    return f"z{small_order}[{coords}]"


def _approx(coeff: CycloNumber) -> complex:
    return coeff.to_complex()


def _series_terms(series: QSeries) -> list[tuple[Fraction, CycloNumber]]:
    return [
        (Fraction(k, series.grading), c)
        for k, c in sorted(series.terms.items())
    ]


# ---------------------------------------------------------------------------
# Shared report rendering
# ---------------------------------------------------------------------------


def _report_line(report: ids.VerificationReport) -> str:
    bits = [
        "PASS" if report.passed else "FAIL",
        f"{report.name:<34}",
        f"{report.mode:<7}",
    ]
    if report.cutoff:
        bits.append(f"cutoff={report.cutoff}")
    if report.first_bad_exponent is not None:
        bits.append(f"first_bad_exponent={report.first_bad_exponent}")
    if report.worst_residual is not None:
        bits.append(f"worst_residual={report.worst_residual:.3e}")
    bits.append(f"{report.elapsed_ms:.1f}ms")
    return "  ".join(bits)


def _emit_suite(
    reports: Sequence[ids.VerificationReport], as_json: bool
) -> int:
    if as_json:
        print(json.dumps(ids.suite_json(reports), indent=2))
    else:
        for report in reports:
            print(_report_line(report))
        passed = sum(1 for r in reports if r.passed)
        print(f"total {len(reports)}, passed {passed}, failed {len(reports) - passed}")
    return _EXIT_OK if all(r.passed for r in reports) else _EXIT_FAIL


def _emit_single(report: ids.VerificationReport, as_json: bool) -> int:
    if as_json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(_report_line(report))
    return _EXIT_OK if report.passed else _EXIT_FAIL


def _jobs_from_env() -> int:
    cap = os.environ.get("THETA_CLI_THREADS")
    if cap is None:
        return 1
    try:
        return max(1, int(cap))
    except ValueError:
        raise ValueError(f"THETA_CLI_THREADS must be an integer, got {cap!r}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_expand(args: argparse.Namespace) -> int:
    eps, eps_prime = args.theta
    ch = Characteristic(eps, eps_prime, args.scale)
    min_grading = theta_min_grading(ch)
    grading = args.grading if args.grading is not None else min_grading
    if grading % min_grading:
        raise GradingError(
            f"grading {grading} is not a multiple of the required {min_grading}"
        )
    order = theta_phase_order(ch)
    build = theta_deriv_normalized if args.deriv else theta_constant
    series = build(ch, grading, args.order * grading)
    atom = "dtheta" if args.deriv else "theta"
    terms = _series_terms(series)

    if args.json:
        payload = {
            "atom": atom,
            "eps": str(ch.eps),
            "eps_prime": str(ch.eps_prime),
            "scale": ch.scale,
            "grading": grading,
            "order": order,
            "cutoff": args.order,
            "terms": [
                {
                    "exponent": str(e),
                    "coords": _coords_at(c, order),
                    "approx": [_approx(c).real, _approx(c).imag],
                }
                for e, c in terms
            ],
        }
        print(json.dumps(payload, indent=2))
        return _EXIT_OK

    print(
        f"# {atom}[{ch.eps},{ch.eps_prime}] scale={ch.scale}"
        f" grading={grading} order={order} through x^{args.order}"
    )
    for e, c in terms:
        val = _approx(c)
        print(f"x^({e})  {_human_coeff(c)}  ~ {val.real:+.9f}{val.imag:+.9f}j")
    return _EXIT_OK


def _first_bad_coefficient(
    record: ids.IdentityRecord, cutoff_x: int | None
) -> CycloNumber | None:
    """Recompute the offending coefficient for a failed exact check."""
    ast = dsl.parse(record.text)
    grading, _ = dsl.expression_requirements(ast)
    if record.grading is not None:
        grading = record.grading
    depth = record.cutoff_x if cutoff_x is None else cutoff_x
    cutoff = depth * grading
    cache: dict = {}
    diff = dsl.evaluate_exact(ast.lhs, grading, cutoff, cache) - dsl.evaluate_exact(
        ast.rhs, grading, cutoff, cache
    )
    lead = diff.lead()
    if lead is None:
        return None
    return diff.coefficient_num(lead)


def _cmd_verify(args: argparse.Namespace) -> int:
    record = ids.get_record(args.id)
    report = ids.verify_record(record, cutoff_x=args.order)
    code = _emit_single(report, args.json)
    if (
        not args.json
        and not report.passed
        and report.first_bad_exponent is not None
        and not record.expect_nonzero
    ):
        coeff = _first_bad_coefficient(record, args.order)
        if coeff is not None:
            print(f"offending coefficient: {_human_coeff(coeff)} ~ {_approx(coeff)}")
    return code


def _cmd_verify_all(args: argparse.Namespace) -> int:
    reports = ids.verify_all(args.filter, jobs=_jobs_from_env())
    return _emit_suite(reports, args.json)


def _cmd_verify_file(args: argparse.Namespace) -> int:
    path = Path(args.path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {args.path}: {exc}")
    stem = path.name
    reports = []
    for line, ast in dsl.parse_file(text):
        record = dsl.elaborate(ast, name=f"{stem}:{line}")
        reports.append(ids.verify_record(record))
    return _emit_suite(reports, args.json)


def _cmd_sumsq(args: argparse.Namespace) -> int:
    rows = []
    all_agree = True
    for n in range(args.max + 1):
        s2f, s2l = arith.s2_formula(n), arith.s2_lattice(n)
        s12f, s12l = arith.s12_formula(n), arith.s12_lattice(n)
        agree = s2f == s2l and s12f == s12l
        all_agree = all_agree and agree
        rows.append(
            {
                "n": n,
                "s2": s2f,
                "s2_lattice": s2l,
                "s12": s12f,
                "s12_lattice": s12l,
                "agree": agree,
            }
        )
    if args.json:
        print(json.dumps({"max": args.max, "all_agree": all_agree, "rows": rows}, indent=2))
    else:
        print(f"{'n':>6}  {'S2':>8}  {'S2 lat':>8}  {'S12':>8}  {'S12 lat':>8}  agree")
        for row in rows:
            print(
                f"{row['n']:>6}  {row['s2']:>8}  {row['s2_lattice']:>8}"
                f"  {row['s12']:>8}  {row['s12_lattice']:>8}"
                f"  {'yes' if row['agree'] else 'NO'}"
            )
    return _EXIT_OK if all_agree else _EXIT_FAIL


def _cmd_numeric_check(args: argparse.Namespace) -> int:
    record = ids.get_record(args.id)
    if not record.runs_numeric:
        raise ids.RecordConfigurationError(
            f"record {args.id!r} is exact-only; numeric-check does not apply"
        )
    plan = SamplePlan(seed=args.seed, count=args.samples)
    report = ids.verify_numeric(record, plan=plan, tol=args.tol)
    return _emit_single(report, args.json)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _char_pair(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"expected EPS,EPS' (two comma-separated rationals), got {text!r}"
        )
    return _rational(parts[0]), _rational(parts[1])


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetaver",
        description="Exact and numeric verification of theta-constant identities.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("expand", help="print the exact series of one theta atom")
    p.add_argument("--theta", type=_char_pair, required=True, metavar="E,E'")
    p.add_argument("--scale", type=_positive_int, default=1, metavar="K")
    p.add_argument("--deriv", action="store_true")
    p.add_argument("--order", type=_positive_int, default=10, metavar="T",
                   help="truncation depth in x-exponents (default 10)")
    p.add_argument("--grading", type=_positive_int, default=None, metavar="D")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("verify", help="run one registry record")
    p.add_argument("--id", required=True, metavar="NAME")
    p.add_argument("--order", type=_positive_int, default=None, metavar="T",
                   help="override the record's exact cutoff (in x-exponents)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("verify-all", help="run the whole registry")
    p.add_argument("--filter", default=None, metavar="PAT",
                   help="fnmatch pattern on record names")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify_all)

    p = sub.add_parser("verify-file", help="verify every identity in a DSL file")
    p.add_argument("path", metavar="PATH")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify_file)

    p = sub.add_parser("sumsq", help="representation-count table with lattice oracles")
    p.add_argument("--max", type=_nonneg_int, required=True, metavar="N")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_sumsq)

    p = sub.add_parser("numeric-check", help="sample one record numerically")
    p.add_argument("--id", required=True, metavar="NAME")
    p.add_argument("--samples", type=_positive_int, default=20, metavar="C")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--tol", type=_positive_float, default=None, metavar="T")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_numeric_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return _EXIT_USAGE
    except (
        dsl.ParseError,
        dsl.ElaborationError,
        ids.RecordConfigurationError,
        GradingError,
        OrderError,
        ConvergenceError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
