"""Expansions of the alternating and Y-Bessel series, built on the J-series
engines through two identities:

    sum (-1)^(n-1) n^gamma J_nu(nb/a) / (n^2+a^2)^mu = S(a) - 2^(gamma-2mu+1) S(a/2)
    sum n^gamma Y_nu(nb/a) / (n^2+a^2)^mu = cot(pi nu) S_nu - csc(pi nu) S_-nu
"""

from __future__ import annotations

from typing import Optional

import mpmath
from mpmath import mp, mpf

from . import asymptotics as asy
from . import precision as pr
from .asymptotics import ExpansionReport, Regime
from .errors import IntegerNuError, RegimeError
from .mellin import leading_term
from .series import Params


def _halving_factor(p: Params) -> mpf:
    return mpf(2) ** pr.real(p.gamma - 2 * p.mu + 1)


def alternating_factor(p: Params, k: int) -> mpf:
    """1 - 2^(1 + omega_k)."""
    return 1 - mpf(2) ** (1 + p.omega(k))


def alternating_terms_identity(p: Params, k_stop: int) -> list:
    """Terms k < k_stop from the identity route: T_k(a) - 2^(gamma-2mu+1) T_k(a/2)."""
    with mp.workdps(mp.dps + pr.guard_digits()):
        c = _halving_factor(p)
        full = asy._alg_terms(p, 0, k_stop)
        half = asy._alg_terms(p.replace(a=p.a / 2), 0, k_stop)
        out = [x - c * y for x, y in zip(full, half)]
    return [+t for t in out]


def alternating_expansion(p: Params, K: Optional[int] = None) -> ExpansionReport:
    """Large-a expansion of the alternating series.

    Generic regime: the algebraic series with every term multiplied by
    1 - 2^(1+omega_k); the zeta pole contributions cancel so the base is 0.
    Its error estimate adds the exponentially small envelope of the a/2
    half, ~e^(-pi a), which no algebraic term sees and which dominates the
    first omitted term at moderate a.
    Exponentially small regime: the identity route with the exponentially
    small expansion at a and at a/2 (the latter dominates, ~e^(-pi a)).
    """
    regime = asy.regime_of(p)
    if regime is Regime.DOUBLE_POLE:
        raise RegimeError("alternating expansion is not available for gamma+nu = -1, -3, ...")
    if regime is Regime.EXP_SMALL:
        return _alternating_expsmall(p, 2 if K is None else K)
    with mp.workdps(mp.dps + pr.guard_digits()):
        terms = [t * alternating_factor(p, k)
                 for k, t in enumerate(asy._alg_terms(p, 0, asy.K_MAX))]
        value, k_used, k_o, err = asy._truncated(terms, K, 0)
        err += _halving_factor(p) * abs(asy._exp_small_scale(p.replace(a=p.a / 2)))
    return ExpansionReport(+value, terms, k_used, k_o, +err, regime, mpf(0), 0)


def _alternating_expsmall(p: Params, J: int) -> ExpansionReport:
    half = p.replace(a=p.a / 2)
    with mp.workdps(mp.dps + pr.guard_digits()):
        c = _halving_factor(p)
        r1 = asy.theorem3_expsmall(p, J)
        r2 = asy.theorem3_expsmall(half, J)
        terms = [x - c * y for x, y in zip(r1.terms, r2.terms)]
        value = r1.value - c * r2.value
        base = r1.base - c * r2.base
        err = r1.err_est + c * r2.err_est
        k_o = asy.optimal_truncate(terms)
    notes = ["identity route: exponentially small expansion at a and a/2"]
    return ExpansionReport(+value, terms, J + 1, k_o, +err, Regime.EXP_SMALL, +base, 0, notes)


def y_weights(nu) -> tuple:
    """(cot pi nu, csc pi nu)."""
    nu = pr.real(nu)
    s = mpmath.sinpi(nu)
    return mpmath.cospi(nu) / s, 1 / s


def _branch(p: Params):
    """Leading term, algebraic terms and the exponentially small part of one J-series."""
    regime = asy.regime_of(p)
    if regime is Regime.DOUBLE_POLE:
        raise RegimeError(f"the nu={p.nu} branch has gamma+nu={p.gamma_plus_nu} (double pole)")
    lead = leading_term(p)
    terms = asy._alg_terms(p, 0, asy.K_MAX)
    extra, extra_err = mpf(0), mpf(0)
    if regime is Regime.EXP_SMALL:
        r = asy.theorem3_expsmall(p, 2)
        extra, extra_err = r.value, r.err_est
    return regime, lead, terms, extra, extra_err


def y_series_expansion(p: Params, K: Optional[int] = None) -> ExpansionReport:
    """Expansion of the Y-series as cot(pi nu) S_nu - csc(pi nu) S_-nu.

    The algebraic terms of the two branches are combined termwise and then
    truncated together.  A branch in the exponentially small regime adds its
    e^(-2 pi a) part to ``value`` (so ``value`` is then not just the sum of
    the truncated terms).
    """
    if p.nu.denominator == 1:
        raise IntegerNuError("integer nu would require a limiting procedure")
    minus = p.replace(nu=-p.nu)
    with mp.workdps(mp.dps + pr.guard_digits()):
        cot, csc = y_weights(p.nu)
        reg_p, lead_p, t_p, x_p, e_p = _branch(p)
        reg_m, lead_m, t_m, x_m, e_m = _branch(minus)
        terms = [cot * u - csc * v for u, v in zip(t_p, t_m)]
        if Regime.GENERIC in (reg_p, reg_m):
            value, k_used, k_o, err = asy._truncated(terms, K, 0)
        else:
            nz = [i for i, t in enumerate(terms) if t != 0]
            k_used = k_o = (max(nz) + 1) if nz else 0
            value, err = mpmath.fsum(terms[:k_used]), mpf(0)
        value += cot * x_p - csc * x_m
        err += abs(cot) * e_p + abs(csc) * e_m
        base = cot * lead_p - csc * lead_m
    regime = reg_p if reg_p is reg_m else Regime.GENERIC
    notes = [f"branches: nu -> {reg_p.value}, -nu -> {reg_m.value}"]
    return ExpansionReport(+value, terms, k_used, k_o, +err, regime, +base, 0, notes)


__all__ = [
    "alternating_expansion",
    "alternating_factor",
    "alternating_terms_identity",
    "y_series_expansion",
    "y_weights",
]
