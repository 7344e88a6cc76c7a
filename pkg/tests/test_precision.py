from __future__ import annotations

import random

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, mpf

import mbasym.precision as pr
from mbasym.errors import DomainError, PoleError, PrecisionError


def rel(x, y):
    return abs(x - y) / abs(y)


def tiny(k=5):
    return mpf(10) ** (k - mp.dps)


class TestPrecisionCtx:
    def test_activate_sets_and_restores(self):
        outer = mp.dps
        with pr.PrecisionCtx(80, 4).activate():
            assert mp.dps == 80
            assert pr.guard_digits() == 4
        assert mp.dps == outer
        assert pr.guard_digits() == 10

    def test_minimum_digits(self):
        with pytest.raises(ValueError):
            pr.PrecisionCtx(19)

    def test_real_keeps_fractions_exact_until_rounding(self):
        from fractions import Fraction
        with mp.workdps(60):
            assert abs(pr.real(Fraction(1, 3)) * 3 - 1) < mpf(10) ** -59


class TestGamma:
    def test_integer_and_half(self):
        assert pr.gamma(5) == 24
        assert rel(pr.gamma(mpf(1) / 2), mpmath.sqrt(mp.pi)) < tiny()

    def test_recurrence_oracle(self):
        # 2.7 * 1.7 * Gamma(1.7) with Gamma(1.7) from a 40-digit evaluation
        assert rel(pr.gamma(mpf("3.7")), mpf("4.1706517837966031653936029986179837")) < mpf("1e-33")

    @pytest.mark.parametrize("x", [0, -1, -7])
    def test_poles(self, x):
        with pytest.raises(PoleError):
            pr.gamma(x)
        with pytest.raises(PoleError):
            pr.digamma(x)

    def test_recurrence_property(self):
        rng = random.Random(4)
        for _ in range(100):
            x = mpf(rng.uniform(0, 20))
            assert abs(pr.gamma(x + 1) - x * pr.gamma(x)) <= mpf(10) ** (3 - mp.dps) * abs(pr.gamma(x + 1))

    def test_rgamma_zero_at_poles(self):
        assert pr.rgamma(-3) == 0


class TestDigamma:
    def test_values_at_1_and_2(self):
        assert rel(pr.digamma(1), -mp.euler) < tiny()
        assert rel(pr.digamma(2), 1 - mp.euler) < tiny()

    def test_finite_difference_oracle(self):
        # central difference of log-gamma at h = 1e-10, 40 digits
        assert abs(pr.digamma(mpf("5.5")) - mpf("1.61109314858175112373356082669")) < mpf("1e-18")


class TestZeta:
    def test_classical_values(self):
        assert pr.zeta(0) == mpf(-1) / 2
        assert pr.zeta(-2) == 0
        assert rel(pr.zeta(2), mp.pi ** 2 / 6) < tiny()
        assert rel(pr.zeta(-1), mpf(-1) / 12) < tiny()

    def test_pole(self):
        with pytest.raises(PoleError):
            pr.zeta(1)
        with pytest.raises(PoleError):
            pr.zeta(1 + mpf("1e-13"))

    def test_functional_equation(self):
        rng = random.Random(7)
        for _ in range(50):
            s = mpf(rng.uniform(-10, 0) if rng.random() < 0.5 else rng.uniform(1.1, 10))
            rhs = (2 ** s * mp.pi ** (s - 1) * pr.zeta(1 - s) * pr.gamma(1 - s)
                   * mpmath.sin(mp.pi * s / 2))
            assert abs(pr.zeta(s) - rhs) <= mpf(10) ** (5 - mp.dps) * max(abs(rhs), mpf(10) ** -40)


class TestPochhammer:
    def test_running_product(self):
        assert pr.poch(-3, 2) == 6
        assert pr.poch(-3, 4) == 0
        assert pr.poch(mpf(1) / 2, 0) == 1


class TestBesselJ:
    @pytest.mark.parametrize("x", [mpf("0.1"), 1, 2, 5, 10, 100])
    def test_half_order_is_sine(self, x):
        x = mpf(x)
        ref = mpmath.sqrt(2 / (mp.pi * x)) * mpmath.sin(x)
        assert rel(pr.bessel_j(mpf(1) / 2, x), ref) < tiny()

    def test_zero_argument(self):
        assert pr.bessel_j(0, 0) == 1
        assert pr.bessel_j(2, 0) == 0
        with pytest.raises(DomainError):
            pr.bessel_j(-mpf(1) / 3, 0)
        with pytest.raises(DomainError):
            pr.bessel_j(0, -1)

    def test_dual_branch_agreement_at_1000(self):
        nu, x = mpf(1) / 3, mpf(1000)
        series = pr.bessel_j_series(nu, x)
        hankel = pr.bessel_j_hankel(nu, x)
        assert hankel is not None
        assert abs(series - hankel) < tiny()

    def test_large_argument(self):
        assert rel(pr.bessel_j(mpf(1) / 3, mpf(10) ** 6), mpmath.besselj(mpf(1) / 3, mpf(10) ** 6)) < tiny()

    def test_refuses_when_uncertified(self, monkeypatch):
        # the Hankel least term is ~e^(-2x) ~ 1e-174 at x = 200, short of 400 digits
        monkeypatch.setattr(pr, "SERIES_X_CAP", 100)
        with mp.workdps(400):
            with pytest.raises(PrecisionError):
                pr.bessel_j(mpf(1) / 3, mpf(200))

    @given(st.floats(-0.95, 4), st.floats(0.01, 80))
    def test_matches_mpmath(self, nu, x):
        nu, x = mpf(nu), mpf(x)
        ref = mpmath.besselj(nu, x)
        assert abs(pr.bessel_j(nu, x) - ref) <= tiny(8) * max(abs(ref), mpf(10) ** -10)


class TestBesselY:
    @pytest.mark.parametrize("nu", [mpf(1) / 3, -mpf(5) / 12, mpf(7) / 3])
    @pytest.mark.parametrize("x", [mpf("0.05"), mpf(5), mpf(24), mpf(200)])
    def test_independent_of_j_route(self, nu, x):
        # bessel_y never goes through J_{+-nu}; compare with the cot/csc relation
        with mp.workdps(30):
            ref = (mpmath.cospi(nu) * mpmath.besselj(nu, x) - mpmath.besselj(-nu, x)) / mpmath.sinpi(nu)
            assert rel(pr.bessel_y(nu, x), ref) < mpf("1e-27")

    def test_integer_order_rejected(self):
        with pytest.raises(DomainError):
            pr.bessel_y(2, 1)


class TestBesselI:
    def test_zero(self):
        assert pr.bessel_i(0, 0) == 1

    def test_series_oracle(self):
        # sum_k 1/(k! (k+1)!), 40 digits
        assert rel(pr.bessel_i(1, 2), mpf("1.5906368546373290633822544249996662")) < mpf("1e-33")

    def test_script_I_consistency(self):
        nu, b = mpf(5) / 4, mpf(1)
        lhs = pr.gamma(1 + nu) * (b / 2) ** -nu * pr.bessel_i(nu, b)
        assert rel(lhs, pr.hyp0f1_reg(1 + nu, b * b / 4) * pr.gamma(1 + nu)) < tiny()


class TestHypergeometric:
    def test_1f2_at_zero(self):
        b1, b2 = mpf("2.5"), mpf("-0.5")
        assert rel(pr.hyp1f2_reg(mpf(3), b1, b2, 0), pr.rgamma(b1) * pr.rgamma(b2)) < tiny()

    def test_1f2_gives_F1(self):
        mu, nu, chi, k = mpf(5) / 2, mpf(1) / 3, mpf(1) / 16, 1
        val = pr.gamma(1 - mu - k) * pr.gamma(1 + nu) * pr.hyp1f2_reg(-k, 1 - mu - k, 1 + nu, chi)
        assert rel(val, 1 + chi / (mu * (1 + nu))) < tiny()

    def test_1f2_bessel_i_tail(self):
        nu, b = mpf(5) / 4, mpf(1)
        chi = b * b / 4
        lhs = pr.hyp1f2_reg(1, 2, 2 + nu, chi) * pr.gamma(2) * pr.gamma(2 + nu) * chi / (1 + nu)
        I = pr.gamma(1 + nu) * (b / 2) ** -nu * pr.bessel_i(nu, b)
        assert rel(lhs, I - 1) < tiny()

    def test_1f2_continuous_across_lower_pole(self):
        with mp.workdps(40):
            a1, b2, chi = mpf("0.7"), mpf("1.3"), mpf("0.4")
            at = pr.hyp1f2_reg(a1, -2, b2, chi)
            h = mpf("1e-8")
            lim = (pr.hyp1f2_reg(a1, -2 + h, b2, chi) + pr.hyp1f2_reg(a1, -2 - h, b2, chi)) / 2
            assert rel(lim, at) < mpf("1e-6")

    def test_2f3_at_zero(self):
        assert rel(pr.hyp2f3_reg(1, 1, 2, mpf(3) / 2, 2, 0),
                   pr.rgamma(2) * pr.rgamma(mpf(3) / 2) * pr.rgamma(2)) < tiny()

    def test_2f3_partial_sum_oracle(self):
        # (1,1; 2, 2-mu, 2+nu; 1/4) with mu = 1/2, nu = 0, 40-digit direct series
        val = pr.hyp2f3_reg(1, 1, 2, mpf(3) / 2, 2, mpf(1) / 4)
        assert rel(val, mpf("1.1764538792161529053622484835392994")) < mpf("1e-33")
