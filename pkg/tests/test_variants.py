from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from mpmath import mp, mpf

from mbasym import asymptotics as asy
from mbasym import variants
from mbasym.asymptotics import Regime
from mbasym.errors import IntegerNuError, RegimeError
from mbasym.series import Params, SeriesKind, direct_sum
from conftest import fractions
from test_asymptotics import generic_params


def rel(x, y):
    return abs(x - y) / abs(y)


class TestAlternating:
    @settings(max_examples=10)
    @given(generic_params())
    def test_identity_route_matches_closed_form(self, p):
        closed = variants.alternating_expansion(p).terms[:7]
        ident = variants.alternating_terms_identity(p, 7)
        for u, v in zip(closed, ident):
            assert abs(u - v) <= mpf(10) ** (5 - mp.dps) * max(abs(u), abs(v))

    def test_factor_at_k0(self):
        assert variants.alternating_factor(Params(4, 1, 0, 0, 3), 0) == -1

    def test_against_oracle(self):
        p = Params(8, 1, Fraction(1, 2), Fraction(1, 3), 3)
        rep = variants.alternating_expansion(p)
        assert rep.base == 0
        ref = direct_sum(p, SeriesKind.ALT, tol=rep.err_est * mpf("1e-3")).value
        assert rel(rep.approx, ref) < mpf("1e-6")
        assert abs(rep.approx - ref) <= 3 * rep.err_est

    @staticmethod
    def _random_generic(rng):
        while True:
            p = Params(Fraction(rng.randint(8, 16), 2), Fraction(rng.randint(2, 8), 4),
                       Fraction(rng.randint(-12, 12), 12), Fraction(rng.randint(-10, 24), 12),
                       Fraction(rng.randint(24, 48), 12))
            if p.nu.denominator != 1 and asy.regime_of(p) is Regime.GENERIC:
                return p

    @pytest.mark.parametrize("seed", range(10))
    def test_within_three_error_estimates(self, seed):
        p = self._random_generic(random.Random(seed))
        rep = variants.alternating_expansion(p)
        ref = direct_sum(p, SeriesKind.ALT, tol=rep.err_est * mpf("1e-2")).value
        assert abs(rep.approx - ref) <= 3 * rep.err_est

    def test_estimate_covers_half_a_exponential(self):
        # gamma+nu near 0: every algebraic term is damped, the e^(-pi a) part is not
        p = Params(4, Fraction(1, 2), 0, Fraction(1, 12), 2)
        rep = variants.alternating_expansion(p)
        ref = direct_sum(p, SeriesKind.ALT, tol=rep.err_est * mpf("1e-3")).value
        first_omitted = abs(rep.terms[rep.k_used])
        assert abs(rep.approx - ref) > 3 * first_omitted
        assert abs(rep.approx - ref) <= 3 * rep.err_est

    def test_exponentially_small_regime(self):
        with mp.workdps(60):
            p = Params(8, 1, 0, 0, 4)
            rep = variants.alternating_expansion(p)
            assert rep.regime is Regime.EXP_SMALL
            ref = direct_sum(p, SeriesKind.ALT, tol=rep.err_est * mpf("1e-3")).value
            assert abs(rep.approx - ref) <= 3 * rep.err_est

    def test_double_pole_rejected(self):
        with pytest.raises(RegimeError):
            variants.alternating_expansion(Params(4, 1, -1, 0, 3))


class TestYSeries:
    def test_weights(self):
        for nu in (Fraction(1, 3), Fraction(-7, 4), Fraction(5, 2)):
            cot, csc = variants.y_weights(nu)
            assert abs(cot ** 2 + 1 - csc ** 2) < mpf(10) ** (5 - mp.dps) * csc ** 2

    def test_half_order_uses_only_minus_branch(self):
        p = Params(8, 1, 0, Fraction(1, 2), 3)
        y = variants.y_series_expansion(p)
        j = asy.theorem1_series(p.replace(nu=Fraction(-1, 2)))
        assert abs(y.approx + j.approx) < mpf(10) ** (5 - mp.dps) * abs(j.approx)

    def test_against_oracle(self):
        p = Params(8, 1, 0, Fraction(1, 3), 3)
        rep = variants.y_series_expansion(p)
        with mp.workdps(30):
            ref = direct_sum(p, SeriesKind.Y, tol=abs(rep.approx) * mpf("1e-10")).value
        assert rel(rep.approx, ref) < mpf("1e-6")

    def test_integer_order(self):
        with pytest.raises(IntegerNuError):
            variants.y_series_expansion(Params(8, 1, 0, 2, 3))

    def test_double_pole_branch(self):
        with pytest.raises(RegimeError):
            variants.y_series_expansion(Params(8, 1, Fraction(-2, 3), Fraction(-1, 3), 3))
