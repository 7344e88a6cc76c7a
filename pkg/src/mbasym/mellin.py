"""Mellin transform of the summand profile

    h(x) = x^gamma J_nu(b x) / (1 + x^2)^mu,   H(s) = int_0^inf x^(s-1) h(x) dx

in closed form as a difference of two regularized 1F2 functions divided by
sin(pi (mu - lambda)), lambda = (s + gamma + nu) / 2.

The apparent poles where mu - lambda is an integer are removable: the bracket
Q(s) vanishes there.  Near such points the difference is evaluated with extra
digits to absorb the cancellation; exactly at them H is obtained from dQ/dt
by l'Hopital's rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from . import precision as pr
from .errors import PoleError, StripError
from .series import Params

# below this distance of mu - lambda to an integer the cancellation is treated
# as removable-point evaluation
EPS0 = mpf("1e-6")


@dataclass(frozen=True)
class MellinPoint:
    params: Params
    s: mpf

    @property
    def lam(self) -> mpf:
        return self.params.lam(self.s)

    @property
    def distance_to_integer(self) -> mpf:
        t = pr.real(self.params.mu) - self.lam
        return abs(t - mpmath.nint(t))


def _check(p: Params, s: mpf, strict: bool, te=None) -> None:
    g, nu = pr.real(p.gamma), pr.real(p.nu)
    if strict and not (-g - nu < s < p.delta):
        raise StripError(
            f"s={mpmath.nstr(s, 10)} outside the strip "
            f"({mpmath.nstr(-g - nu, 10)}, {mpmath.nstr(p.delta, 10)})")
    lam = p.mu - te if te is not None else p.lam(s)
    if pr.is_nonpositive_integer(lam):
        raise PoleError(f"H has a pole at s={mpmath.nstr(s, 10)}")


def _bracket(t: mpf, mu: mpf, nu: mpf, chi: mpf) -> mpf:
    """Q as a function of t = mu - lambda."""
    lam = mu - t
    first = mpmath.gamma(lam) * pr.hyp1f2_reg(lam, 1 - t, 1 + nu, chi)
    second = mpmath.gamma(mu) * chi ** t * pr.hyp1f2_reg(mu, 1 + t, 1 + t + nu, chi)
    return first - second


def _cancel_digits(t: mpf) -> int:
    d = abs(t - mpmath.nint(t))
    if d == 0:
        return 0
    return max(0, int(-mpmath.log10(d)) + 2)


def Q(p: Params, s, *, strict: bool = True) -> mpf:
    """The bracket Gamma(lam) 1F2(...) - Gamma(mu) chi^(mu-lam) 1F2(...) of H(s)."""
    te = _t_exact(p, s)
    s = pr.real(s)
    _check(p, s, strict, te)
    wp = mp.dps
    t = pr.real(p.mu) - p.lam(s)
    with mp.workdps(wp + pr.guard_digits() + _cancel_digits(t)):
        t = pr.real(te) if te is not None else pr.real(p.mu) - p.lam(s)
        val = _bracket(t, pr.real(p.mu), pr.real(p.nu), p.chi)
    return +val


def _t_exact(p: Params, s):
    """mu - lambda(s) as a Fraction when s is given exactly (int, Fraction)."""
    if isinstance(s, (int, Fraction)):
        return p.mu - (Fraction(s) + p.gamma + p.nu) / 2
    return None


def H(p: Params, s, *, strict: bool = True) -> mpf:
    """Closed-form Mellin transform H(s).

    ``strict=False`` skips the strip check and returns the meromorphic
    continuation (needed when gamma + nu < -1 puts s = 1 left of the strip).
    Rational ``s`` (int or Fraction) is kept exact so that removable points
    are recognised without rounding.
    """
    te = _t_exact(p, s)
    s = pr.real(s)
    _check(p, s, strict, te)
    wp = mp.dps
    mu, nu = pr.real(p.mu), pr.real(p.nu)
    t = mu - p.lam(s)
    k = mpmath.nint(t)
    if (te is not None and te.denominator == 1) or (te is None and t == k):
        # removable point: H = pi B Q / sin(pi t) -> B (-1)^k dQ/dt
        with mp.workdps(2 * wp + pr.guard_digits()):
            mu, nu, chi, B = pr.real(p.mu), pr.real(p.nu), p.chi, p.B
            t = mpf(k)
            dq = mpmath.diff(lambda tt: _bracket(tt, mu, nu, chi), t)
            val = B * (-1) ** int(k) * dq
        return +val
    extra = pr.guard_digits() + _cancel_digits(t)
    if abs(t - k) < EPS0:
        extra += pr.guard_digits()
    with mp.workdps(wp + extra):
        mu, nu, chi, B = pr.real(p.mu), pr.real(p.nu), p.chi, p.B
        t = pr.real(te) if te is not None else mu - p.lam(s)
        val = mp.pi * B * _bracket(t, mu, nu, chi) / mpmath.sinpi(t)
    return +val


def leading_term(p: Params) -> mpf:
    """a^(gamma - 2 mu + 1) H(1), the contribution of the zeta pole at s = 1."""
    with mp.workdps(mp.dps + pr.guard_digits()):
        a, _, g, _, mu = p.real()
        val = a ** (g - 2 * mu + 1) * H(p, Fraction(1), strict=False)
    return +val
