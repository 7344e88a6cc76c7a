"""Command-line interface.

Usage:
    mbasym eval --a 8 --b 1 --mu 4 --nu 0 --gamma 0 --method thm3
    mbasym eval --a 2 --b 1/2 --mu 3 --nu 1/3 --gamma 1/2 --method direct --tol 1e-25
    mbasym table --which 1 --format md
    mbasym verify --suite all

Exit codes: 0 success, 1 failed check or computation, 2 bad arguments or
parameters, 3 the requested expansion does not apply (regime error).
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from . import asymptotics as asy
from . import tables, variants, verify
from .config import Config, load_config
from .errors import MBAsymError, ParamsError, RegimeError
from .precision import MIN_DIGITS
from .series import Params, SeriesKind, direct_sum

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_REGIME = 0, 1, 2, 3
EVAL_DIGITS = 50


def parse_number(text: str) -> Fraction:
    """Exact rational from ``3``, ``-9/4``, ``0.5`` or ``1e-3``.

    A trailing ellipsis (``0.333333...``) asks for the nearest fraction with
    denominator at most 1000, so a truncated repeating decimal maps back to
    the intended rational.
    """
    s = text.strip()
    approx = s.endswith(("...", "…"))
    s = s.rstrip(".…") if approx else s
    try:
        f = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    return f.limit_denominator(1000) if approx else f


def _digits(text: str) -> int:
    n = int(text)
    if n < MIN_DIGITS:
        raise argparse.ArgumentTypeError(f"must be at least {MIN_DIGITS}")
    return n


def _tol(text: str) -> str:
    try:
        ok = mpmath.mpf(text) > 0
    except (ValueError, TypeError):
        ok = False
    if not ok:
        raise argparse.ArgumentTypeError(f"not a positive number: {text!r}")
    return text


def _nonnegative_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mbasym", description=__doc__.split("\n\n")[0])
    ap.add_argument("--config", help="key = value file (digits, guard_digits, oracle_cap, kappa_safety)")
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one series by direct summation or an expansion")
    for name in ("a", "b", "mu", "nu", "gamma"):
        ev.add_argument(f"--{name}", type=parse_number, required=True)
    ev.add_argument("--kind", choices=[k.value for k in SeriesKind], default="j")
    ev.add_argument("--method", choices=["direct", "thm1", "thm2", "thm3", "auto"], default="auto")
    ev.add_argument("--tol", type=_tol, default="1e-20", help="absolute tolerance for --method direct")
    ev.add_argument("--K", type=_nonnegative_int, default=None,
                    help="last k kept (j for thm3); default: optimal truncation (J=2 for thm3)")
    ev.add_argument("--digits", type=_digits)
    ev.add_argument("--verbose", action="store_true", help="also print every kept term")

    tb = sub.add_parser("table", help="regenerate one of the three error tables")
    tb.add_argument("--which", type=int, choices=[1, 2, 3], required=True)
    tb.add_argument("--format", choices=["csv", "md"], default="csv")
    tb.add_argument("--digits", type=_digits)
    tb.add_argument("--output", help="write to this file instead of stdout")

    vf = sub.add_parser("verify", help="run an oracle check suite")
    vf.add_argument("--suite", choices=[*verify.SUITES, "all"], default="all")
    vf.add_argument("--seed", type=int, default=0)
    vf.add_argument("--digits", type=_digits)
    return ap


# --------------------------------------------------------------------------
# eval


def _resolve_method(p: Params, kind: SeriesKind, method: str) -> str:
    if method != "auto" or kind is not SeriesKind.J:
        return method
    return {asy.Regime.GENERIC: "thm1", asy.Regime.DOUBLE_POLE: "thm2",
            asy.Regime.EXP_SMALL: "thm3"}[asy.regime_of(p)]


def _expansion(p: Params, kind: SeriesKind, method: str, K: Optional[int]) -> asy.ExpansionReport:
    if kind is SeriesKind.ALT:
        return variants.alternating_expansion(p, K)
    if kind is SeriesKind.Y:
        return variants.y_series_expansion(p, K)
    if method == "thm1":
        return asy.theorem1_series(p, K)
    if method == "thm2":
        return asy.theorem2_series(p, K)
    return asy.theorem3_expsmall(p, 2 if K is None else K)


def _fmt(x, digits: int) -> str:
    return mpmath.nstr(x, digits, min_fixed=0, max_fixed=0)


def cmd_eval(args, cfg: Config, out) -> int:
    p = Params(args.a, args.b, args.gamma, args.nu, args.mu)
    kind = SeriesKind(args.kind)
    method = _resolve_method(p, kind, args.method)
    lines = [f"kind: {kind.value}", f"method: {method}"]
    with cfg.with_overrides(digits=args.digits).activate(EVAL_DIGITS) as c:
        shown = c.resolve_digits(EVAL_DIGITS)
        if method == "direct":
            ds = direct_sum(p, kind, args.tol, cap=c.oracle_cap)
            lines += [f"value: {_fmt(ds.value, shown)}",
                      f"terms: {ds.n_terms}",
                      f"err_est: {_fmt(ds.tail_bound + ds.body_error, 3)}"]
        else:
            rep = _expansion(p, kind, method, args.K)
            lines.append(f"regime: {rep.regime.value}")
            if rep.regime is asy.Regime.EXP_SMALL and kind is SeriesKind.J:
                lines += [f"remainder: {_fmt(rep.value, shown)}", f"J: {rep.k_used - 1}"]
            else:
                lines += [f"expansion: {_fmt(rep.value, shown)}",
                          f"k_o: {rep.k_o_label}",
                          f"k_used: {rep.k_used + rep.first_k - 1}"]
            lines += [f"base: {_fmt(rep.base, shown)}",
                      f"value: {_fmt(rep.approx, shown)}",
                      f"err_est: {_fmt(rep.err_est, 3)}"]
            if args.verbose:
                kept = rep.terms[:rep.k_used]
                lines += [f"term {i + rep.first_k}: {_fmt(t, 20)}" for i, t in enumerate(kept)]
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# table / verify


def cmd_table(args, cfg: Config, out) -> int:
    default = tables.DEFAULT_DIGITS[args.which]
    c = cfg.with_overrides(digits=args.digits)
    with c.activate(default):
        text = tables.render(args.which, args.format, cap=c.oracle_cap,
                             digits=c.resolve_digits(default))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, cfg: Config, out) -> int:
    failed = 0
    total = 0
    with cfg.with_overrides(digits=args.digits).activate(50):
        for check in verify.run_suite(args.suite, args.seed):
            total += 1
            failed += not check.ok
            print(check.line(), file=out, flush=True)
    print(f"{total - failed}/{total} checks passed", file=out)
    return EXIT_OK if failed == 0 else EXIT_FAIL


COMMANDS = {"eval": cmd_eval, "table": cmd_table, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"mbasym: config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, cfg, out)
    except ParamsError as exc:
        print(f"mbasym: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RegimeError as exc:
        print(f"mbasym: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except MBAsymError as exc:
        print(f"mbasym: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:  # e.g. --K beyond the computed terms
        print(f"mbasym: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
