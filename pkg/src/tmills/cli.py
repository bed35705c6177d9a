"""Command-line front end.

Usage:
    tmills eval --nu 1 --a 1
    tmills sweep theorem1_pos --format json --out t1.json
    tmills sweep corollary --nu-grid 1e-4:1e4:50:log
    tmills kconst --lo 1e-4 --hi 1e6 --resolution 4000
    tmills thresholds --nu 0,1,10 --k 0.543
    tmills probe --nu-grid 1e-4:1e4:9:log --a-grid 0:20:401:lin

Exit codes: 0 success or certified, 1 asserted violation or K above 0.543,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import bounds
from .serialize import records_csv, sweep_csv, to_json
from .specfun import ConvergenceError, DomainError
from .verify import (
    PROBE_SUITES,
    SUITES,
    ConfigError,
    SweepConfig,
    default_config,
    evaluate,
    run_sweep,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_grid(text: str, flag: str) -> list[float]:
    """``lo:hi:n:log|lin`` or a comma-separated list of numbers."""
    try:
        if ":" not in text:
            return [float(v) for v in text.split(",") if v.strip()]
        lo_s, hi_s, n_s, kind = text.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError:
        raise UsageError(f"argument {flag}: expected lo:hi:n:log|lin or a comma list, got {text!r}")
    if n < 1:
        raise UsageError(f"argument {flag}: point count must be >= 1")
    if kind == "lin":
        return np.linspace(lo, hi, n).tolist()
    if kind == "log":
        if lo <= 0 or hi <= 0:
            raise UsageError(f"argument {flag}: log grid needs positive endpoints")
        return np.logspace(math.log10(lo), math.log10(hi), n).tolist()
    raise UsageError(f"argument {flag}: spacing must be 'log' or 'lin', got {kind!r}")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _build_config(suite: str, args) -> SweepConfig:
    cfg = default_config(suite)
    changes = {}
    if args.nu_grid is not None:
        changes["nu_grid"] = parse_grid(args.nu_grid, "--nu-grid")
    if args.a_grid is not None:
        changes["a_grid"] = parse_grid(args.a_grid, "--a-grid")
        changes["a_per_nu"] = 0
    if args.rel_tol is not None:
        changes["rel_tol"] = args.rel_tol
    if args.violation_factor is not None:
        changes["violation_factor"] = args.violation_factor
    return replace(cfg, **changes) if changes else cfg


def _render_sweep(report, fmt_: str) -> str:
    return to_json(report) if fmt_ == "json" else sweep_csv(report)


def run_eval(args) -> int:
    if not (math.isfinite(args.nu) and args.nu > 0):
        raise UsageError(f"argument --nu: must be finite and > 0, got {args.nu!r}")
    if not math.isfinite(args.a):
        raise UsageError(f"argument --a: must be finite, got {args.a!r}")
    rep = evaluate(args.nu, args.a, args.rel_tol or 1e-10)
    _emit(to_json(rep) if args.format == "json" else records_csv([rep]), args.out)
    return EXIT_OK


def run_sweep_cmd(args) -> int:
    report = run_sweep(_build_config(args.suite, args))
    _emit(_render_sweep(report, args.format), args.out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def run_probe(args) -> int:
    report = run_sweep(_build_config(args.suite, args))
    _emit(_render_sweep(report, args.format), args.out)
    return EXIT_OK


def run_kconst(args) -> int:
    if not (args.lo > 0 and args.hi > args.lo and math.isfinite(args.hi)):
        raise UsageError(f"arguments --lo/--hi: need 0 < lo < hi, got lo={args.lo!r} hi={args.hi!r}")
    if args.resolution < 1000:
        raise UsageError("argument --resolution: must be >= 1000")
    k = bounds.k_constant(args.lo, args.hi, args.resolution, strict=False)
    if k.at_edge:
        print(f"warning: maximum sits on the bracket edge nu={k.argmax_nu:g}; "
              "the interior supremum lies outside [--lo, --hi]", file=sys.stderr)
    record = {
        "value": k.value,
        "argmax_nu": k.argmax_nu,
        "search_lo": k.search_lo,
        "search_hi": k.search_hi,
        "resolution": k.resolution,
        "at_edge": k.at_edge,
        "claimed_k": bounds.CLAIMED_K,
        "within_claim": k.within_claim,
    }
    _emit(to_json(record) if args.format == "json" else records_csv([record]), args.out)
    return EXIT_OK if k.within_claim else EXIT_VIOLATION


def run_thresholds(args) -> int:
    if not 0 < args.k < 1:
        raise UsageError(f"argument --k: must lie in (0, 1), got {args.k!r}")
    nus = parse_grid(args.nu, "--nu")
    if not nus or any(not (math.isfinite(v) and v >= 0) for v in nus):
        raise UsageError("argument --nu: need one or more finite values >= 0")
    rows = []
    for nu in nus:
        pair = bounds.thresholds(nu, args.k)
        root = math.sqrt(pair.sufficient_a2)
        limit = bounds.corollary_validity_limit(nu)
        rows.append({
            "nu": nu,
            "k": args.k,
            "exact_a2": pair.exact_a2,
            "sufficient_a2": pair.sufficient_a2,
            "sqrt_sufficient": root,
            "validity_limit": limit,
            "covers_limit": root >= limit,
            "flag": "sufficient_exceeds_exact" if pair.sufficient_a2 > pair.exact_a2 else "ok",
        })
    _emit(to_json(rows) if args.format == "json" else records_csv(rows), args.out)
    return EXIT_VIOLATION if any(r["flag"] != "ok" for r in rows) else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default: stdout)")


def _grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nu-grid", default=None, metavar="lo:hi:n:log|lin")
    p.add_argument("--a-grid", default=None, metavar="lo:hi:n:log|lin")
    p.add_argument("--rel-tol", type=float, default=None)
    p.add_argument("--violation-factor", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tmills", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="all oracle values and bounds at one (nu, a)")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--rel-tol", type=float, default=None)
    _common(p)
    p.set_defaults(func=run_eval)

    p = sub.add_parser("sweep", help="run one verification suite over a grid")
    p.add_argument("suite", choices=SUITES)
    _grid_flags(p)
    _common(p)
    p.set_defaults(func=run_sweep_cmd)

    p = sub.add_parser("probe", help="report-only suites (default: failure onset beyond the validity range)")
    p.add_argument("--suite", choices=sorted(PROBE_SUITES), default="probe")
    _grid_flags(p)
    _common(p)
    p.set_defaults(func=run_probe)

    p = sub.add_parser("kconst", help="sup over nu of C_nu (1/2 + 1/sqrt(nu))")
    p.add_argument("--lo", type=float, default=1e-4)
    p.add_argument("--hi", type=float, default=1e6)
    p.add_argument("--resolution", type=int, default=4000)
    _common(p)
    p.set_defaults(func=run_kconst)

    p = sub.add_parser("thresholds", help="a^2 thresholds of the tail bound per nu")
    p.add_argument("--nu", default="0,1,10,100,1000,10000")
    p.add_argument("--k", type=float, default=bounds.CLAIMED_K)
    _common(p)
    p.set_defaults(func=run_thresholds)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
