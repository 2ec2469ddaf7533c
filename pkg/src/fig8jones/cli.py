"""Command-line front end.

Every subcommand writes one report::

    {"meta": {...}, "params": {...}, "results": {column: [values]}, "verdicts": {...}}

``results`` is column-oriented so CSV output is just its rows.  Exit codes:
0 all checks passed, 1 some check failed, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import os
import sys
from typing import Sequence

from . import __version__
from .cache import PolynomialCache
from .convergence import (
    DEFAULT_SCHEDULE,
    growth_rate_study,
    limit_study,
    mmr_study,
    region_check,
    shifted_gap_study,
)
from .jones import alexander_inverse, habiro_exact, jones_trace, recursion_residual
from .laurent import ComplexParam, DomainError, PoleError
from .lemmas import (
    check_exp_integral,
    check_positivity,
    check_ratio_lower_bound,
    check_region_identity,
    check_taylor_ratio,
    check_u_monotonicity,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- formatting -------------------------------------------------------------


def _dps(bits: int) -> int:
    return max(15, int(bits * 0.30103))


def _num(x, bits: int) -> str:
    """Deterministic decimal rendering of an mpmath real."""
    from .laurent import context

    return context(bits).nstr(x, _dps(bits))


def _cplx(values, bits: int) -> tuple[list[str], list[str]]:
    return [_num(v.real, bits) for v in values], [_num(v.imag, bits) for v in values]


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        t = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        t = _dt.datetime.now(tz=_dt.timezone.utc)
    return t.replace(microsecond=0).isoformat()


def build_report(command: str, precision: int, params: dict, results: dict, verdicts: dict) -> dict:
    return {
        "meta": {"version": __version__, "command": command, "precision": precision, "timestamp": _timestamp()},
        "params": params,
        "results": results,
        "verdicts": verdicts,
    }


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    results = report["results"]
    cols = list(results)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    n = max((len(v) for v in results.values()), default=0)
    for i in range(n):
        row = []
        for c in cols:
            v = results[c][i]
            row.append(json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
        writer.writerow(row)
    return buf.getvalue()


def strip_timestamp(report: dict) -> dict:
    """Report body used for reproducibility comparisons."""
    body = json.loads(json.dumps(report))
    body["meta"].pop("timestamp", None)
    return body


# -- argument parsing ---------------------------------------------------------


def parse_int_list(text: str) -> list[int]:
    """``"3..10"``, ``"100,200,400"`` or a mix such as ``"2..5,8"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise UsageError(f"empty range {part!r}")
            out.extend(range(lo_i, hi_i + 1))
        else:
            out.append(int(part))
    if not out:
        raise UsageError("empty integer list")
    return out


def _schedule(args, default: Sequence[int]) -> list[int]:
    sched = parse_int_list(args.schedule) if args.schedule else list(default)
    if any(b <= a for a, b in zip(sched, sched[1:])):
        raise UsageError(f"schedule must be strictly increasing: {sched}")
    return sched


def _param(args) -> ComplexParam:
    try:
        return ComplexParam.parse(args.a, args.precision)
    except DomainError as exc:
        raise UsageError(f"cannot parse --a {args.a!r}: {exc}") from exc


def _cache(args):
    return PolynomialCache(args.cache) if args.cache else habiro_exact


# -- subcommands --------------------------------------------------------------


def cmd_eval(args) -> tuple[dict, bool]:
    a = _param(args)
    if args.n < args.l + 1:
        raise UsageError(f"need N >= l + 1, got N={args.n}, l={args.l}")
    tr = jones_trace(args.n, a, args.l)
    verdict = region_check(a)
    bits = args.precision
    re_, im_ = _cplx([tr.value], bits)
    results = {
        "N": [args.n],
        "l": [args.l],
        "value_re": re_,
        "value_im": im_,
        "delta": [_num(verdict.delta, bits)],
        "inside": [verdict.inside],
    }
    params = {"N": args.n, "a": args.a, "l": args.l}
    return build_report("eval", bits, params, results, {}), True


def cmd_limit(args) -> tuple[dict, bool]:
    a = _param(args)
    sched = _schedule(args, DEFAULT_SCHEDULE)
    rep = limit_study(a, sched, allow_outside=args.allow_outside, jobs=args.jobs)
    bits = args.precision
    re_, im_ = _cplx(rep.values, bits)
    rel = rep.relative_errors
    verdicts = {
        "errors_decreasing": rep.errors_decreasing,
        "tail_bounds_hold": all(rep.tail_ok),
        "final_relative_error_below_threshold": rel[-1] < args.threshold,
    }
    results = {
        "N": rep.schedule,
        "value_re": re_,
        "value_im": im_,
        "error": rep.errors,
        "relative_error": rel,
        "tail_bound": rep.tail_bound,
        "tail_ok": rep.tail_ok,
    }
    params = {
        "a": args.a,
        "schedule": sched,
        "target_re": _num(rep.target.real, bits),
        "target_im": _num(rep.target.imag, bits),
        "delta": rep.delta,
        "fitted_order": rep.fitted_order,
        "threshold": args.threshold,
        "exploratory": rep.exploratory,
    }
    if rep.exploratory:
        # outside the region nothing is claimed, so nothing can fail
        verdicts = {}
    return build_report("limit", bits, params, results, verdicts), all(verdicts.values())


def cmd_shifted(args) -> tuple[dict, bool]:
    a = _param(args)
    sched = _schedule(args, DEFAULT_SCHEDULE)
    rep = shifted_gap_study(a, args.l, sched, jobs=args.jobs)
    verdicts = {
        "gaps_decreasing": all(b < x for x, b in zip(rep.gaps, rep.gaps[1:])) or all(g == 0 for g in rep.gaps),
        "within_bounds": rep.within_bounds,
    }
    results = {"N": rep.schedule, "gap": rep.gaps, "bound": rep.bounds}
    params = {"a": args.a, "l": args.l, "schedule": sched, "epsilon_prime": rep.epsilon_prime, "c": rep.c, "delta": rep.delta}
    return build_report("shifted", args.precision, params, results, verdicts), all(verdicts.values())


def cmd_growth(args) -> tuple[dict, bool]:
    sched = _schedule(args, (100, 200, 500, 1000, 2000))
    rep = growth_rate_study(sched, args.precision, jobs=args.jobs)
    verdicts = {"within_5_percent_of_reference": rep.relative_gap < 0.05}
    results = {"N": rep.schedule, "rate": rep.rates}
    params = {
        "schedule": sched,
        "reference_volume": rep.reference,
        "extrapolated": rep.extrapolated,
        "fit_form": rep.fit_form,
        "increasing": rep.increasing,
        "decreasing": rep.decreasing,
    }
    return build_report("growth", args.precision, params, results, verdicts), all(verdicts.values())


def cmd_mmr(args) -> tuple[dict, bool]:
    n_set = parse_int_list(args.n_set)
    order = args.order if args.order is not None else args.j_max
    try:
        table = mmr_study(args.j_max, n_set, order, lookup=_cache(args))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    js = list(range(table.j_max + 1))
    results = {
        "j": js,
        "fitted_degree": [table.fitted_degree[j] for j in js],
        "diagonal": [str(table.diagonal[j]) for j in js],
        "expected_diagonal": [str(table.expected_diagonal[j]) for j in js],
        "poly_in_N": [[str(c) for c in table.polys[j]] for j in js],
    }
    verdicts = {
        "degree_at_most_j": table.below_diagonal,
        "odd_rows_zero": table.odd_rows_zero,
        "diagonal_matches_alexander_series": table.diagonal_matches,
    }
    params = {"j_max": table.j_max, "N_set": table.N_set, "order": order}
    return build_report("mmr", args.precision, params, results, verdicts), all(verdicts.values())


def cmd_lemmas(args) -> tuple[dict, bool]:
    bits = args.precision
    checks = {
        "cosh_identity": lambda: check_region_identity(precision_bits=bits),
        "u_monotonicity": lambda: check_u_monotonicity(precision_bits=bits),
        "ratio_lower_bound": check_ratio_lower_bound,
        "exp_integral": lambda: check_exp_integral(precision_bits=bits),
        "taylor_ratio": check_taylor_ratio,
        "re_a": lambda: check_positivity(which="Re_a", precision_bits=bits),
        "re_a2": lambda: check_positivity(which="Re_a2", precision_bits=bits),
    }
    wanted = list(checks) if args.all or not args.only else [s.strip() for s in args.only.split(",")]
    unknown = [w for w in wanted if w not in checks]
    if unknown:
        raise UsageError(f"unknown lemma ids {unknown}; choose from {list(checks)}")
    reports = [checks[w]() for w in wanted]
    results = {
        "lemma_id": [r.lemma_id for r in reports],
        "samples": [r.samples for r in reports],
        "min_margin": [r.min_margin for r in reports],
        "violations": [len(r.violations) for r in reports],
        "worst_witness": [r.worst_witness for r in reports],
        "details": [r.details for r in reports],
    }
    verdicts = {r.lemma_id: r.passed for r in reports}
    return build_report("lemmas", bits, {"checks": wanted}, results, verdicts), all(verdicts.values())


def cmd_recursion(args) -> tuple[dict, bool]:
    ns = parse_int_list(args.n)
    if min(ns) < 3:
        raise UsageError("recursion needs N >= 3")
    lookup = _cache(args)
    residuals = [recursion_residual(n, lookup) for n in ns]
    results = {
        "N": ns,
        "residual": ["zero" if r.is_zero() else "nonzero" for r in residuals],
        "residual_terms": [len(r) for r in residuals],
    }
    verdicts = {"all_residuals_zero": all(r.is_zero() for r in residuals)}
    return build_report("recursion", args.precision, {"N": ns}, results, verdicts), all(verdicts.values())


def cmd_region(args) -> tuple[dict, bool]:
    a = _param(args)
    v = region_check(a)
    bits = args.precision
    ctx = a.ctx
    identity_gap = abs(abs(ctx.cosh(a.value) - 1) - v.equivalent_form)
    ok = identity_gap <= ctx.mpf(2) ** (16 - bits)
    try:
        target = alexander_inverse(a)
        t_re, t_im = _num(target.real, bits), _num(target.imag, bits)
    except PoleError:
        t_re = t_im = None
    results = {
        "a": [args.a],
        "delta": [_num(v.delta, bits)],
        "im_bound_ok": [v.im_bound_ok],
        "inside": [v.inside],
        "cosh_x_minus_cos_y": [_num(v.equivalent_form, bits)],
        "target_re": [t_re],
        "target_im": [t_im],
    }
    params = {"a": args.a, "landmarks": {k: [z.real, z.imag] for k, z in v.landmarks.items()}}
    verdicts = {"identity_holds": bool(ok)}
    return build_report("region", bits, params, results, verdicts), bool(ok)


COMMANDS = {
    "eval": cmd_eval,
    "limit": cmd_limit,
    "shifted": cmd_shifted,
    "growth": cmd_growth,
    "mmr": cmd_mmr,
    "lemmas": cmd_lemmas,
    "recursion": cmd_recursion,
    "region": cmd_region,
}


def _precision(text: str) -> int:
    v = int(text)
    if v < 53:
        raise argparse.ArgumentTypeError("precision must be >= 53 bits")
    return v


def _jobs(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("--jobs must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_precision, default=128, help="working precision in bits (>= 53)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="report path (default: stdout)")
    common.add_argument("--cache", help="directory for cached exact polynomials")
    common.add_argument("--schedule", help="comma list or range of N, e.g. 100,200,400")
    common.add_argument("--jobs", type=_jobs, default=1, help="worker processes for independent N")

    parser = argparse.ArgumentParser(prog="fig8jones", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="J_{N-l}(exp(a/N))")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", required=True, help='complex literal: "x", "yi", "x+yi" or "2pi*i"')
    p.add_argument("--l", type=int, default=0, choices=(0, 1, 2))

    p = sub.add_parser("limit", parents=[common], help="convergence to 1/Delta(exp a)")
    p.add_argument("--a", required=True)
    p.add_argument("--threshold", type=float, default=0.01, help="max relative error at the last N")
    p.add_argument("--allow-outside", action="store_true", help="diagnostic run outside the region")

    p = sub.add_parser("shifted", parents=[common], help="|J_N - J_{N-l}| at exp(a/N)")
    p.add_argument("--a", required=True)
    p.add_argument("--l", type=int, required=True, choices=(1, 2))

    sub.add_parser("growth", parents=[common], help="Kashaev growth rate vs the volume")

    p = sub.add_parser("mmr", parents=[common], help="Melvin-Morton-Rozansky table")
    p.add_argument("--j-max", type=int, default=6)
    p.add_argument("--n-set", default="2..10")
    p.add_argument("--order", type=int, default=None)

    p = sub.add_parser("lemmas", parents=[common], help="grid checks of the supporting inequalities")
    p.add_argument("--all", action="store_true")
    p.add_argument("--only", help="comma list of lemma ids")

    p = sub.add_parser("recursion", parents=[common], help="exact recursion residuals")
    p.add_argument("--n", default="3..10", help="range or list of N >= 3")

    p = sub.add_parser("region", parents=[common], help="is a inside the oval?")
    p.add_argument("--a", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        report, passed = COMMANDS[args.command](args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    text = render(report, args.format)
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
