"""Command-line front end.

Subcommands map one-to-one onto the library: rk, g, theta, digits,
gaps, convergence, compare, multi. Every command writes deterministic
text (table, csv, or json) with no timestamps or environment noise, so
two runs with the same flags are byte-identical; exit status is 0
exactly when the requested computation completed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .apfree import min_inverse
from .cache import default_cache_dir, ensure_table
from .constant import (
    convergence_experiment,
    gap_stats,
    theta_digits,
    theta_partial,
)
from .errors import BudgetExhaustedError, GpfreeError, TableInsufficientError
from .geoprog import (
    g_formula,
    g_multi_ratio_bruteforce,
    ilog,
    monotonicity_experiment,
)

EXPENSIVE_ENUMERATION_LIMIT = 10_000_000  # per-chain/witness materialization guard


def fmt_frac(fr: Fraction) -> str:
    return "%d/%d" % (fr.numerator, fr.denominator)


def fmt_dec(fr: Fraction, places: int) -> str:
    """Deterministic fixed-point rendering, round half away from zero."""
    fr = Fraction(fr)
    sign = "-" if fr < 0 else ""
    a = abs(fr)
    q, r = divmod(a.numerator * 10 ** places, a.denominator)
    if 2 * r >= a.denominator:
        q += 1
    ip, fp = divmod(q, 10 ** places)
    if places == 0:
        return sign + str(ip)
    return "%s%d.%0*d" % (sign, ip, places, fp)


def _render_table(headers, rows, pre=(), post=()) -> str:
    cells = [[str(c) for c in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, c in enumerate(row):
            widths[i] = max(widths[i], len(c))
    out = list(pre)
    out.append("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip())
    for row in cells:
        out.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip())
    out.extend(post)
    return "\n".join(out) + "\n"


def _render_csv(headers, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    for row in rows:
        w.writerow([str(c) for c in row])
    return buf.getvalue()


def _render_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def emit(args, headers, rows, *, json_obj=None, pre=(), post=()) -> int:
    """Write one row set in the selected format; returns exit code 0."""
    if args.format == "table":
        text = _render_table(headers, rows, pre=pre, post=post)
    elif args.format == "csv":
        text = _render_csv(headers, rows)
    else:
        obj = json_obj if json_obj is not None else {
            "rows": [dict(zip(headers, row)) for row in rows]
        }
        text = _render_json(obj)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cache_dir(args):
    return Path(args.cache) if args.cache else default_cache_dir()


def _table(args, k, ell_max):
    return ensure_table(k, ell_max, _cache_dir(args), node_budget=args.budget)


def _add_common(p, *, budget=True):
    p.add_argument("--format", choices=("table", "csv", "json"), default="table",
                   help="output format (default: table)")
    p.add_argument("--output", metavar="PATH", default=None,
                   help="write output to PATH instead of stdout")
    p.add_argument("--precision", type=int, default=12, metavar="N",
                   help="decimal digits when rendering exact rationals (default: 12)")
    p.add_argument("--cache", metavar="DIR", default=None,
                   help="table cache directory (default: $GPFREE_CACHE_DIR or ~/.cache/gpfree)")
    if budget:
        p.add_argument("--budget", type=int, default=None, metavar="NODES",
                       help="search node budget for table building")


def cmd_rk(args) -> int:
    try:
        table = _table(args, args.k, args.lmax)
    except BudgetExhaustedError as exc:
        if exc.prefix is not None:
            rows = [(ell, exc.prefix.value(ell),
                     ",".join(str(e) for e in exc.prefix.witness(ell)))
                    for ell in range(1, exc.prefix.ell_max + 1)]
            emit(args, ("ell", "value", "witness"), rows)
        print("error: %s" % exc, file=sys.stderr)
        return 1
    rows = [(ell, table.value(ell), ",".join(str(e) for e in table.witness(ell)))
            for ell in range(1, table.ell_max + 1)]
    return emit(args, ("ell", "value", "witness"), rows,
                json_obj={"k": table.k, "ell_max": table.ell_max,
                          "rows": [{"ell": r[0], "value": r[1], "witness": list(table.witness(r[0]))}
                                   for r in rows]})


def cmd_g(args) -> int:
    depth = 1 + ilog(args.s, args.n, 1)
    table = _table(args, args.k, depth)
    if (args.witness or args.per_chain) and args.n > EXPENSIVE_ENUMERATION_LIMIT:
        raise ValueError(
            "witness/per-chain output materializes every chain; n=%d exceeds "
            "the %d guard" % (args.n, EXPENSIVE_ENUMERATION_LIMIT))
    res = g_formula(args.k, args.s, args.n, table,
                    per_chain=args.per_chain, with_witness=args.witness)
    pre = ["k %d  s %d  n %d" % (args.k, args.s, args.n), "g %d" % res.value]
    if args.witness:
        pre.append("witness %s" % ",".join(str(e) for e in res.witness))
    json_obj = {"k": args.k, "s": args.s, "n": args.n, "g": res.value}
    if args.witness:
        json_obj["witness"] = list(res.witness)
    if args.per_chain:
        rows = [(b, 1 + ilog(args.s, args.n, b), c)
                for b, c in sorted(res.per_chain.items())]
        json_obj["per_chain"] = {str(b): c for b, c in sorted(res.per_chain.items())}
        return emit(args, ("root", "chain_length", "contribution"), rows,
                    json_obj=json_obj, pre=pre)
    headers = ("k", "s", "n", "g") + (("witness",) if args.witness else ())
    row = (args.k, args.s, args.n, res.value)
    if args.witness:
        row = row + (",".join(str(e) for e in res.witness),)
    if args.format == "table":
        text = "\n".join(pre) + "\n"
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return 0
    return emit(args, headers, [row], json_obj=json_obj)


def cmd_theta(args) -> int:
    table = _table(args, args.k, args.lmax)
    gaps = min_inverse(table)
    terms = args.terms if args.terms is not None else len(gaps.u)
    if terms > len(gaps.u):
        hint = gaps.u[-1] + (terms - len(gaps.u))
        raise TableInsufficientError(args.k, required=hint, available=table.ell_max)
    approx = theta_partial(args.k, args.s, gaps, terms)
    digits_len = args.digits_len
    if digits_len is None:
        digits_len = 8 if gaps.finite else table.ell_max
    stream = theta_digits(args.k, args.s, gaps, digits_len)
    p = args.precision
    digit_str = "".join(str(d) for d in stream.digits) if args.s <= 10 else \
        ",".join(str(d) for d in stream.digits)
    pre = [
        "k %d  s %d  terms %d  finite %s" % (args.k, args.s, terms,
                                             "yes" if approx.finite else "no"),
        "partial %s (%s)" % (fmt_frac(approx.partial), fmt_dec(approx.partial, p)),
        "tail_bound %s (%s)" % (fmt_frac(approx.tail_bound), fmt_dec(approx.tail_bound, p)),
        "enclosure %s <= theta <= %s" % (fmt_dec(approx.lo, p), fmt_dec(approx.hi, p)),
        "digits %s (nonzero at %s)" % (digit_str,
                                       ",".join(str(q) for q in stream.one_positions)),
    ]
    rows = [
        ("partial", fmt_frac(approx.partial), fmt_dec(approx.partial, p)),
        ("tail_bound", fmt_frac(approx.tail_bound), fmt_dec(approx.tail_bound, p)),
        ("lo", fmt_frac(approx.lo), fmt_dec(approx.lo, p)),
        ("hi", fmt_frac(approx.hi), fmt_dec(approx.hi, p)),
    ]
    json_obj = {
        "k": args.k, "s": args.s, "terms": terms, "finite": approx.finite,
        "partial": fmt_frac(approx.partial),
        "partial_decimal": fmt_dec(approx.partial, p),
        "tail_bound": fmt_frac(approx.tail_bound),
        "tail_bound_decimal": fmt_dec(approx.tail_bound, p),
        "lo": fmt_frac(approx.lo), "hi": fmt_frac(approx.hi),
        "lo_decimal": fmt_dec(approx.lo, p), "hi_decimal": fmt_dec(approx.hi, p),
        "digits": list(stream.digits), "digit_positions": list(stream.one_positions),
    }
    if args.format == "table":
        text = "\n".join(pre) + "\n"
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return 0
    return emit(args, ("quantity", "exact", "decimal"), rows, json_obj=json_obj)


def cmd_digits(args) -> int:
    table = _table(args, args.k, args.len)
    gaps = min_inverse(table)
    stream = theta_digits(args.k, args.s, gaps, args.len)
    rows = list(zip(range(1, args.len + 1), stream.digits, stream.unscaled()))
    return emit(args, ("position", "digit", "unscaled"), rows,
                json_obj={"k": args.k, "s": args.s, "length": args.len,
                          "digits": list(stream.digits),
                          "unscaled": list(stream.unscaled()),
                          "nonzero_positions": list(stream.one_positions)},
                post=["nonzero at %s" % ",".join(str(q) for q in stream.one_positions)])


def cmd_gaps(args) -> int:
    table = _table(args, args.k, args.lmax)
    gaps = min_inverse(table)
    report = gap_stats(gaps)
    rows = []
    for m in range(1, len(gaps.u) + 1):
        if m <= len(report.diffs):
            rows.append((m, gaps.u[m - 1], report.diffs[m - 1],
                         report.running_max[m - 1],
                         "*" if m in report.record_positions else ""))
        else:
            rows.append((m, gaps.u[m - 1], "", "", ""))
    return emit(args, ("m", "u", "gap", "running_max", "record"), rows,
                json_obj={"k": args.k, "ell_max": table.ell_max,
                          "u": list(gaps.u), "gaps": list(report.diffs),
                          "running_max": list(report.running_max),
                          "record_positions": list(report.record_positions),
                          "increases": report.increases},
                post=["running max increased %d times" % report.increases])


def _emit_plot_data(path, rows, places) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("n", "g", "g_over_n", "theta_lo", "theta_hi"))
        for r in rows:
            w.writerow((r.n, r.g, fmt_dec(r.ratio, places),
                        fmt_dec(r.theta_lo, places), fmt_dec(r.theta_hi, places)))


def cmd_convergence(args) -> int:
    n_list = _parse_int_list(args.n_list, "n-list")
    depth = max(1 + ilog(args.s, max(n_list), 1), args.lmax or 0)
    table = _table(args, args.k, depth)
    rows = convergence_experiment(args.k, args.s, n_list, table)
    p = args.precision
    if args.emit_plot_data:
        _emit_plot_data(args.emit_plot_data, rows, p)
    out_rows = [(r.n, r.g, fmt_dec(r.ratio, p), fmt_dec(r.deviation, p)) for r in rows]
    pre = ["enclosure %s <= theta <= %s" % (fmt_dec(rows[0].theta_lo, p),
                                            fmt_dec(rows[0].theta_hi, p))] if rows else []
    json_obj = {
        "k": args.k, "s": args.s,
        "theta_lo": fmt_frac(rows[0].theta_lo) if rows else None,
        "theta_hi": fmt_frac(rows[0].theta_hi) if rows else None,
        "rows": [{"n": r.n, "g": r.g, "g_over_n": fmt_dec(r.ratio, p),
                  "deviation": fmt_dec(r.deviation, p)} for r in rows],
    }
    return emit(args, ("n", "g", "g_over_n", "deviation"), out_rows,
                json_obj=json_obj, pre=pre)


def cmd_compare(args) -> int:
    if not 2 <= args.s < args.s2:
        raise ValueError("need 2 <= s < s2, got s=%d s2=%d" % (args.s, args.s2))
    depth = 1 + ilog(args.s, args.nmax, 1)
    table = _table(args, args.k, depth)
    report = monotonicity_experiment(args.k, args.s, args.s2, args.nmax, table, table)
    rows = [(r.n, r.g_s, r.g_s2, r.relation) for r in report.rows]
    post = [
        "first strict g^(s) < g^(s2): %s" % (report.first_strict
                                             if report.first_strict is not None else "none"),
        "violations of g^(s) <= g^(s2): %s" % ("first at n=%d" % report.first_violation
                                               if report.first_violation is not None else "none"),
    ]
    json_obj = {
        "k": args.k, "s": args.s, "s2": args.s2, "n_max": args.nmax,
        "first_strict": report.first_strict,
        "first_violation": report.first_violation,
        "rows": [{"n": r.n, "g_s": r.g_s, "g_s2": r.g_s2, "relation": r.relation}
                 for r in report.rows],
    }
    return emit(args, ("n", "g_s", "g_s2", "relation"), rows,
                json_obj=json_obj, post=post)


def cmd_multi(args) -> int:
    ratios = _parse_int_list(args.ratios, "ratios")
    value = g_multi_ratio_bruteforce(args.k, ratios, args.n, cap=args.oracle_cap)
    row = (args.k, ",".join(str(s) for s in ratios), args.n, value)
    return emit(args, ("k", "ratios", "n", "g_multi"), [row],
                json_obj={"k": args.k, "ratios": list(ratios),
                          "n": args.n, "g_multi": value})


def _parse_int_list(text, what):
    try:
        vals = tuple(int(t) for t in str(text).split(",") if t.strip() != "")
    except ValueError as exc:
        raise ValueError("--%s expects comma-separated integers" % (what,)) from exc
    if not vals:
        raise ValueError("--%s must name at least one integer" % (what,))
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gpfree",
        description="Exact progression-free subset maxima, chain-partition "
                    "formula evaluation, and limiting-density enclosures.")
    ap.add_argument("--version", action="version", version="gpfree %s" % __version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rk", help="build/extend the AP-free extremal table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lmax", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_rk)

    p = sub.add_parser("g", help="evaluate g_k^(s)(n) from the chain formula")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--witness", action="store_true",
                   help="also print one maximum progression-free subset")
    p.add_argument("--per-chain", action="store_true", dest="per_chain",
                   help="print each chain root's contribution")
    _add_common(p)
    p.set_defaults(func=cmd_g)

    p = sub.add_parser("theta", help="exact enclosure of the limiting density")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--terms", type=int, default=None,
                   help="series terms to sum (default: all the table certifies)")
    p.add_argument("--digits-len", type=int, default=None, dest="digits_len",
                   help="digit prefix length to print")
    p.add_argument("--lmax", type=int, default=21,
                   help="table depth to build (default: 21)")
    _add_common(p)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("digits", help="certified base-s digit prefix of theta")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--len", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_digits)

    p = sub.add_parser("gaps", help="first-attainment sequence and its gap records")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lmax", type=int, default=40)
    _add_common(p)
    p.set_defaults(func=cmd_gaps)

    p = sub.add_parser("convergence", help="g/n against the exact enclosure")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n-list", required=True, dest="n_list",
                   help="comma-separated evaluation points")
    p.add_argument("--lmax", type=int, default=None,
                   help="minimum table depth (default: what the points need)")
    p.add_argument("--emit-plot-data", metavar="PATH", default=None,
                   dest="emit_plot_data",
                   help="write n,g,g_over_n,theta_lo,theta_hi CSV to PATH")
    _add_common(p)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("compare", help="pointwise g comparison for two ratio bases")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--s2", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("multi", help="brute-force g for a set of ratio bases")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ratios", required=True,
                   help="comma-separated ratio bases, e.g. 2,3")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--oracle-cap", type=int, default=24, dest="oracle_cap",
                   help="refuse n above this (exponential cost; default 24)")
    _add_common(p, budget=False)
    p.set_defaults(func=cmd_multi)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GpfreeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except ValueError as exc:
        print("invalid argument: %s" % exc, file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
