"""Command-line front end: ``verify``, ``series-check`` and ``bench``.

Exit codes: 0 when everything passes, 1 when any check fails, 2 on usage or
catalog errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from fractions import Fraction

from .catalog import (
    DEFAULT_A_VALUES,
    DEFAULT_N_MAX,
    DEFAULT_PRECISION,
    CatalogError,
    bench,
    load_catalog,
    verify,
)
from .integral_families import integral_q
from .quadrature import integrate_tail_exp_over_x
from .special_numerics import context, eval_closedform, incomplete_gamma_via_series, series1_lhs

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _rational(text: str) -> Fraction:
    try:
        if "." in text or "e" in text.lower():
            raise ValueError
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational of the form p/q: {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(part) for part in text.split(",") if part.strip()]


def _precision(text: str) -> int:
    value = int(text)
    if value < 20:
        raise argparse.ArgumentTypeError("precision must be at least 20 digits")
    return value


def _table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    line = lambda r: "  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip()
    return "\n".join([line(header), line(["-" * w for w in widths])] + [line(r) for r in rows])


def cmd_verify(args) -> int:
    try:
        entries = load_catalog(args.catalog)
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports = verify(entries, args.a, args.n_max, args.precision, jobs=args.jobs)
    if args.json:
        print(json.dumps([r.to_dict() for r in reports], indent=2))
    else:
        rows = [[r.id, ",".join(f"{k}={v}" for k, v in r.params.items()), r.status,
                 r.residual or "-", r.reason] for r in reports]
        if rows:
            print(_table(rows, ["entry", "params", "status", "residual", "note"]))
        counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "skipped")}
        print(f"\n{counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped "
              f"at {args.precision} digits")
    return EXIT_FAIL if any(r.status == "fail" for r in reports) else EXIT_OK


def series_check(n_max: int, a_values, precision: int) -> list[dict]:
    """Series identity ``S_n(a) = -Q_n(a)`` and the recovered ``Gamma(0, a)`` for each (n, a)."""
    ctx = context(precision + 10)
    tol = ctx.mpf(10) ** (-(precision - 3))
    rows = []
    for n in range(n_max + 1):
        for a in a_values:
            lhs = series1_lhs(n, a, precision)
            closed = -eval_closedform(integral_q(n), a, precision)
            gamma_series = incomplete_gamma_via_series(n, a, precision)
            gamma_quad = integrate_tail_exp_over_x(a, precision)
            r1 = abs(ctx.mpf(lhs) - ctx.mpf(closed))
            r2 = abs(ctx.mpf(gamma_series) - ctx.mpf(gamma_quad))
            rows.append({
                "n": n, "a": str(a),
                "series": ctx.nstr(lhs, precision), "minus_Q": ctx.nstr(closed, precision),
                "series_residual": ctx.nstr(r1, 3),
                "gamma0_from_series": ctx.nstr(gamma_series, precision),
                "gamma0_quadrature": ctx.nstr(gamma_quad, precision),
                "gamma0_residual": ctx.nstr(r2, 3),
                "status": "pass" if r1 <= tol and r2 <= tol else "fail",
            })
    return rows


def cmd_series_check(args) -> int:
    rows = series_check(args.n_max, args.a, args.precision)
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(_table([[r["n"], r["a"], r["series_residual"], r["gamma0_residual"], r["status"]] for r in rows],
                     ["n", "a", "series vs -Q_n", "Gamma(0,a) vs quadrature", "status"]))
    return EXIT_FAIL if any(r["status"] == "fail" for r in rows) else EXIT_OK


def cmd_bench(args) -> int:
    rows = bench(args.n_max, args.a, args.precision, args.reps)
    if args.json:
        print(json.dumps([asdict(r) for r in rows], indent=2))
    else:
        print(_table([[r.n, f"{r.closed_form_median_ms:.3f}", f"{r.oracle_median_ms:.3f}", f"{r.speedup:.1f}x",
                       "low-confidence" if r.low_confidence else ""] for r in rows],
                     ["n", "closed form (ms)", "quadrature (ms)", "speedup", ""]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="explogint",
        description="Exact closed forms for int_0^1 x^n e^(-ax) (ln x)^{0,1} dx, checked against quadrature.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify catalog entries against the quadrature oracle")
    p.add_argument("--catalog", help="catalog JSON file (default: bundled catalog)")
    p.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    p.add_argument("--a", type=_rational_list, default=list(DEFAULT_A_VALUES),
                   help="comma-separated rationals, e.g. 1/2,1,2,10")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--json", action="store_true", help="emit the full report array as JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("series-check", help="check the term-by-term series identity")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--a", type=_rational_list, default=[Fraction(1, 2), Fraction(1), Fraction(2)])
    p.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_series_check)

    p = sub.add_parser("bench", help="time closed-form evaluation against quadrature")
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    p.add_argument("--a", type=_rational, default=Fraction(1))
    p.add_argument("--precision", type=_precision, default=DEFAULT_PRECISION)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if getattr(args, "n_max", 0) < 0:
        parser.error("--n-max must be non-negative")
    if getattr(args, "reps", 1) < 1:
        parser.error("--reps must be at least 1")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
