"""Regeneration of the three error tables from the oracle route.

Every reference value is a direct sum at a tolerance tied to the
expansion's own error estimate; no target number is stored here.

Conventions:

* table 1 reports S-hat = a^(gamma-2mu+1) H(1) - S, i.e. the negated
  remainder, and its relative error is taken against the oracle value;
* table 2 does the same for S-tilde = S - a^(gamma-2mu) Res (no sign flip),
  but the value it shows is the truncated expansion, not the oracle (the
  two only differ visibly at a=2);
* table 3 divides by the truncated expansion rather than by the oracle.

Both numbers are always written out; ``TableRow.shown`` is the displayed one.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Iterator, Optional

import mpmath
from mpmath import mp, mpf

from . import asymptotics as asy
from .series import DEFAULT_CAP, Params, direct_sum

# oracle tolerance as a fraction of the expansion's error estimate
ORACLE_FACTOR = mpf("1e-5")

DEFAULT_DIGITS = {1: 50, 2: 50, 3: 60}

T1_PARAMS = dict(gamma=Fraction(1, 2), nu=Fraction(1, 3), mu=Fraction(3))
T1_B = (Fraction(1, 2), Fraction(1), Fraction(2))
T2_COLUMNS = (
    (Fraction(-1), Fraction(0), Fraction(5, 2)),
    (Fraction(-3, 4), Fraction(-1, 4), Fraction(5, 2)),
    (Fraction(-9, 4), Fraction(5, 4), Fraction(1)),
)
T3_COLUMNS = (  # (gamma, nu, b)
    (Fraction(0), Fraction(0), Fraction(1)),
    (Fraction(0), Fraction(0), Fraction(3)),
    (Fraction(-1, 3), Fraction(1, 3), Fraction(1)),
)
A_VALUES = (2, 4, 6, 8)
T3_A, T3_MU = 8, 4


@dataclass(frozen=True)
class TableRow:
    table: int
    column: int
    params: Params
    regime: asy.Regime
    index: int  # k_o (last kept k) for tables 1-2, j for table 3
    reference: mpf  # tabulated quantity from the oracle
    expansion: mpf  # the same quantity from the truncated expansion
    rel_error: mpf
    rel_to: str  # "reference" or "expansion": the denominator of rel_error
    oracle_tol: mpf
    oracle_terms: int

    @property
    def shown(self) -> mpf:
        return self.expansion if self.table == 2 else self.reference


def _rel(expansion: mpf, reference: mpf, rel_to: str) -> mpf:
    den = reference if rel_to == "reference" else expansion
    return abs(expansion - reference) / abs(den)


def table1_rows(cap: int = DEFAULT_CAP) -> Iterator[TableRow]:
    for a in A_VALUES:
        for col, b in enumerate(T1_B, 1):
            p = Params(a, b, **T1_PARAMS)
            rep = asy.theorem1_series(p)
            tol = ORACLE_FACTOR * rep.err_est
            ds = direct_sum(p, tol=tol, cap=cap)
            ref = rep.base - ds.value
            exp_ = -rep.value
            yield TableRow(1, col, p, rep.regime, rep.k_o_label, ref, exp_,
                           _rel(exp_, ref, "reference"), "reference", tol, ds.n_terms)


def table2_rows(cap: int = DEFAULT_CAP) -> Iterator[TableRow]:
    for a in A_VALUES:
        for col, (g, nu, mu) in enumerate(T2_COLUMNS, 1):
            p = Params(a, 1, g, nu, mu)
            rep = asy.theorem2_series(p)
            tol = ORACLE_FACTOR * rep.err_est
            ds = direct_sum(p, tol=tol, cap=cap)
            ref = ds.value - rep.base
            yield TableRow(2, col, p, rep.regime, rep.k_o_label, ref, rep.value,
                           _rel(rep.value, ref, "reference"), "reference", tol, ds.n_terms)


def table3_rows(cap: int = DEFAULT_CAP) -> Iterator[TableRow]:
    for col, (g, nu, b) in enumerate(T3_COLUMNS, 1):
        p = Params(T3_A, b, g, nu, T3_MU)
        rep = asy.theorem3_expsmall(p, 2)
        tol = ORACLE_FACTOR * rep.err_est
        ds = direct_sum(p, tol=tol, cap=cap)
        ref = ds.value - rep.base
        for j in range(3):
            exp_ = mpmath.fsum(rep.terms[:j + 1])
            yield TableRow(3, col, p, rep.regime, j, ref, exp_,
                           _rel(exp_, ref, "expansion"), "expansion", tol, ds.n_terms)


def table_rows(which: int, cap: int = DEFAULT_CAP) -> list:
    gen = {1: table1_rows, 2: table2_rows, 3: table3_rows}.get(which)
    if gen is None:
        raise ValueError(f"no table {which}")
    return list(gen(cap))


# --------------------------------------------------------------------------
# formatting


def _decimal(x: mpf) -> Decimal:
    return Decimal(mpmath.nstr(x, 40, min_fixed=1, max_fixed=0))


def sci(x: mpf, sig: int) -> str:
    """Machine style, e.g. ``1.08383E-03``."""
    m, e = _mant_exp(x, sig)
    return f"{m}E{e:+03d}"


def xy_sci(x: mpf, sig: int) -> str:
    """Parenthesised exponent, e.g. ``1.08383(-03)``."""
    m, e = _mant_exp(x, sig)
    return f"{m}({e:+03d})".replace("(+", "(")


def _mant_exp(x: mpf, sig: int):
    if x == 0:
        return "0." + "0" * (sig - 1), 0
    s = f"{_decimal(x):.{sig - 1}E}"
    m, e = s.split("E")
    return m, int(e)


def fmt_fraction(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


HEADER = ("table", "column", "a", "b", "gamma", "nu", "mu", "regime", "index",
          "shown", "oracle", "oracle_E", "expansion", "expansion_E", "error", "error_E",
          "rel_to", "oracle_tol", "oracle_terms")


def _cells(r: TableRow) -> tuple:
    p = r.params
    return (str(r.table), str(r.column), fmt_fraction(p.a), fmt_fraction(p.b),
            fmt_fraction(p.gamma), fmt_fraction(p.nu), fmt_fraction(p.mu),
            r.regime.value, str(r.index), xy_sci(r.shown, 6),
            xy_sci(r.reference, 6), sci(r.reference, 6),
            xy_sci(r.expansion, 6), sci(r.expansion, 6),
            xy_sci(r.rel_error, 4), sci(r.rel_error, 4),
            r.rel_to, sci(r.oracle_tol, 2), str(r.oracle_terms))


def to_csv(rows: Iterable[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow(_cells(r))
    return buf.getvalue()


def to_markdown(rows: Iterable[TableRow]) -> str:
    lines = ["| " + " | ".join(HEADER) + " |", "|" + "---|" * len(HEADER)]
    for r in rows:
        lines.append("| " + " | ".join(_cells(r)) + " |")
    return "\n".join(lines) + "\n"


def render(which: int, fmt: str = "csv", cap: int = DEFAULT_CAP,
           digits: Optional[int] = None) -> str:
    with mp.workdps(digits or DEFAULT_DIGITS[which]):
        rows = table_rows(which, cap)
        if fmt == "csv":
            return to_csv(rows)
        if fmt == "md":
            return to_markdown(rows)
    raise ValueError(f"unknown format {fmt!r}")
