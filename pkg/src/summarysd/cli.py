"""Command-line front end.

Subcommands: ``estimate`` (CSV of study summaries -> moment estimates),
``tables`` (reference values vs. formulas), ``refit`` (re-derive the
correction coefficients), ``oracle`` (regenerate the tables
numerically).  All output is deterministic given identical inputs,
flags and seeds.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import oracle, refit, tables
from .estimators import (
    PIECEWISE_CUTOFF,
    CorrectionOrder,
    Scenario,
    StudySummary,
    estimate_moments,
)
from .specfun import std_normal_quantile

INPUT_COLUMNS = ("study_id", "n", "min", "q1", "median", "q3", "max")
REQUIRED_COLUMNS = ("study_id", "n")
OUTPUT_COLUMNS = ("study_id", "scenario", "mean", "sd", "divisor", "correction", "degenerate")


class FatalCliError(Exception):
    """Unrecoverable problem: bad file, malformed header, bad usage."""


def _fmt(x: float) -> str:
    return format(x, ".6g")


def _parse_range(text: str, lo: int = 1) -> tuple[int, int]:
    try:
        a_s, b_s = text.split(":")
        a, b = int(a_s), int(b_s)
    except ValueError:
        raise FatalCliError(f"range must be A:B with integers, got {text!r}")
    if a < lo or a > b:
        raise FatalCliError(f"invalid range {text!r}: need {lo} <= A <= B")
    return a, b


def _parse_row(row: dict, line_no: int, seen_ids: set) -> tuple[str, StudySummary]:
    study_id = (row.get("study_id") or "").strip()
    if not study_id:
        raise ValueError(f"line {line_no}: empty study_id")
    if study_id in seen_ids:
        raise ValueError(f"line {line_no}: duplicate study_id {study_id!r}")

    def num(col):
        raw = (row.get(col) or "").strip()
        if not raw:
            return None
        try:
            return float(raw)
        except ValueError:
            raise ValueError(f"line {line_no} ({study_id}): {col}={raw!r} is not a number")

    n_raw = (row.get("n") or "").strip()
    try:
        n = int(n_raw)
    except ValueError:
        raise ValueError(f"line {line_no} ({study_id}): n={n_raw!r} is not an integer")
    try:
        summary = StudySummary(
            n=n,
            min_a=num("min"),
            q1=num("q1"),
            median_m=num("median"),
            q3=num("q3"),
            max_b=num("max"),
        )
    except ValueError as exc:
        raise ValueError(f"line {line_no} ({study_id}): {exc}")
    return study_id, summary


def cmd_estimate(args) -> int:
    order = CorrectionOrder(args.correction)
    override = Scenario(args.scenario) if args.scenario else None

    try:
        fh = open(args.input, newline="")
    except OSError as exc:
        raise FatalCliError(f"cannot read {args.input}: {exc}")
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            raise FatalCliError(f"{args.input}: empty file, header row required")
        unknown = [c for c in header if c not in INPUT_COLUMNS]
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if unknown or missing:
            parts = []
            if unknown:
                parts.append(f"unknown columns {unknown}")
            if missing:
                parts.append(f"missing required columns {missing}")
            raise FatalCliError(
                f"{args.input}: malformed header ({'; '.join(parts)}); "
                f"expected a subset of {list(INPUT_COLUMNS)}"
            )

        out = sys.stdout
        sep = {"csv": ",", "tsv": "\t"}.get(args.format)
        if sep:
            out.write(sep.join(OUTPUT_COLUMNS) + "\n")
        seen_ids: set[str] = set()
        for line_no, row in enumerate(reader, start=2):
            try:
                study_id, summary = _parse_row(row, line_no, seen_ids)
                seen_ids.add(study_id)
                est = estimate_moments(summary, order, override, args.cutoff)
            except ValueError as exc:
                print(f"error: {exc}", file=sys.stderr)
                continue
            record = {
                "study_id": study_id,
                "scenario": est.scenario.value,
                "mean": est.mean,
                "sd": est.sd,
                "divisor": est.divisor_used,
                "correction": est.correction.value,
                "degenerate": est.degenerate,
            }
            if sep:
                out.write(
                    sep.join(
                        [
                            record["study_id"],
                            record["scenario"],
                            _fmt(record["mean"]),
                            _fmt(record["sd"]),
                            _fmt(record["divisor"]),
                            record["correction"],
                            "1" if record["degenerate"] else "0",
                        ]
                    )
                    + "\n"
                )
            else:
                out.write(json.dumps(record) + "\n")
    return 0


def cmd_tables(args) -> int:
    n_min, n_max = _parse_range(args.range, lo=1)
    order = CorrectionOrder(args.correction)
    from .estimators import eta_hat, xi_hat

    xi_tab, eta_tab = tables.load_tables()
    out = sys.stdout
    out.write("n\ttable\tasymptotic\tcorrected\tresidual\n")
    for n in range(n_min, n_max + 1):
        tab = ""
        if n <= tables.N_MAX:
            tab = _fmt(xi_tab.value(n) if args.which == "xi" else eta_tab.value(n))
        if n < 2:
            out.write(f"{n}\t{tab}\t\t\t\n")
            continue
        if args.which == "xi":
            asym = 2.0 * std_normal_quantile((n - 0.375) / (n + 0.25))
            corrected = xi_hat(n, args.cutoff)
        else:
            asym = 2.0 * std_normal_quantile((0.75 * n - 0.125) / (n + 0.25))
            corrected = eta_hat(n, order, args.cutoff)
        residual = _fmt(float(tab) - corrected) if tab else ""
        out.write(f"{n}\t{tab}\t{_fmt(asym)}\t{_fmt(corrected)}\t{residual}\n")
    return 0


def cmd_refit(args) -> int:
    if args.kind == "delta":
        if args.order == "second":
            raise FatalCliError("--order second applies to the epsilon fit only")
        series = refit.residual_series(refit.ResidualKind.DELTA)
        fit = refit.fit_delta(series)
    else:
        series = refit.residual_series(refit.ResidualKind.EPSILON)
        if args.order == "second":
            fit = refit.fit_epsilon_quadratic(series)
        else:
            fit = refit.fit_epsilon_linear(series)
    print(fit.format_summary())
    if args.emit_series:
        with open(args.emit_series, "w") as fh:
            fh.write("n\tresidual\n")
            for n, v in zip(series.ns, series.values):
                fh.write(f"{n}\t{_fmt(float(v))}\n")
    return 0


def cmd_oracle(args) -> int:
    n_min, n_max = _parse_range(args.range, lo=2)
    if n_max > tables.N_MAX:
        raise FatalCliError(f"oracle range limited to n <= {tables.N_MAX}")
    cfg_q = oracle.QuadratureConfig()
    cfg_mc = oracle.McConfig(
        replications=args.reps, seed=args.seed, chunk_size=args.chunk_size
    )
    if args.convention == "all":
        conventions = tuple(oracle.QuantileConvention)
    else:
        conventions = (oracle.QuantileConvention(args.convention),)
    result = oracle.regenerate_tables(
        cfg_q, cfg_mc, n_min, n_max, which=args.which, conventions=conventions
    )
    for line in result.fixture_lines():
        print(line)
    report = "\n".join(result.report_lines()) + "\n"
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report)
    else:
        sys.stderr.write(report)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="summarysd",
        description=(
            "Estimate sample mean and SD from non-parametric study summaries "
            "(median, range, quartiles) with small-sample divisor corrections."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="estimate moments for each row of a CSV")
    p_est.add_argument("input", help="CSV with header study_id,n,min,q1,median,q3,max")
    p_est.add_argument("--correction", choices=["none", "first", "second"], default="first")
    p_est.add_argument("--scenario", choices=["c1", "c2", "c3"], default=None)
    p_est.add_argument("--cutoff", type=int, default=PIECEWISE_CUTOFF,
                       help="sample size above which corrections switch off "
                            "(values other than 50 are experimental)")
    p_est.add_argument("--format", choices=["csv", "tsv", "jsonl"], default="csv")
    p_est.set_defaults(func=cmd_estimate)

    p_tab = sub.add_parser("tables", help="reference table vs. formula values")
    p_tab.add_argument("--which", choices=["xi", "eta"], default="xi")
    p_tab.add_argument("--range", default="2:50", metavar="A:B")
    p_tab.add_argument("--correction", choices=["none", "first", "second"], default="first")
    p_tab.add_argument("--cutoff", type=int, default=PIECEWISE_CUTOFF)
    p_tab.set_defaults(func=cmd_tables)

    p_fit = sub.add_parser("refit", help="re-derive correction coefficients")
    p_fit.add_argument("--kind", choices=["epsilon", "delta"], required=True)
    p_fit.add_argument("--order", choices=["first", "second"], default="first")
    p_fit.add_argument("--emit-series", metavar="PATH", default=None,
                       help="write the residual series as TSV")
    p_fit.set_defaults(func=cmd_refit)

    p_or = sub.add_parser("oracle", help="regenerate divisor tables numerically")
    p_or.add_argument("--which", choices=["xi", "eta", "both"], default="both")
    p_or.add_argument("--range", default="2:50", metavar="A:B")
    p_or.add_argument("--reps", type=int, default=100_000)
    p_or.add_argument("--seed", type=int, default=0)
    p_or.add_argument("--chunk-size", type=int, default=100_000)
    p_or.add_argument(
        "--convention",
        choices=[c.value for c in oracle.QuantileConvention] + ["all"],
        default="all",
    )
    p_or.add_argument("--report", metavar="PATH", default=None,
                      help="write the deviation sidecar here instead of stderr")
    p_or.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FatalCliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
