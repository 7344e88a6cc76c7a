"""Working-precision real arithmetic and the special functions the rest of
the package is built on.

All scalars are :class:`mpmath.mpf` values.  The number of decimal digits is
taken from the active mpmath context; :class:`PrecisionCtx` is the supported
way of setting it (together with the guard digits that internal evaluations
add on top).

The hypergeometric kernels are *regularized*: every lower parameter ``b``
enters through ``1/Gamma(b + n)``, so the sums stay finite when ``b`` is a
non-positive integer.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, PoleError, PrecisionError

Real = mpf

_GUARD = contextvars.ContextVar("mbasym_guard_digits", default=10)

# zeta raises inside this radius around s = 1
ZETA_POLE_RADIUS = mpf("1e-12")


MIN_DIGITS = 20


@dataclass(frozen=True)
class PrecisionCtx:
    digits: int = 50
    guard_digits: int = 10

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise ValueError(f"digits must be >= {MIN_DIGITS}, got {self.digits}")
        if self.guard_digits < 0:
            raise ValueError("guard_digits must be non-negative")

    @contextlib.contextmanager
    def activate(self) -> Iterator["PrecisionCtx"]:
        token = _GUARD.set(self.guard_digits)
        try:
            with mp.workdps(self.digits):
                yield self
        finally:
            _GUARD.reset(token)


def working_precision(digits: int = 50, guard_digits: int = 10):
    """Shorthand for ``PrecisionCtx(digits, guard_digits).activate()``."""
    return PrecisionCtx(digits, guard_digits).activate()


def guard_digits() -> int:
    return _GUARD.get()


def digits() -> int:
    return mp.dps


def real(x) -> mpf:
    """Convert ints, floats, Fractions, mpf or strings such as ``"1/3"`` to mpf.

    Rational strings and Fractions are divided at the current precision, so
    ``real("1/3")`` is correct to every carried digit (unlike ``real(1/3)``).
    """
    if isinstance(x, mpf):
        return x
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return mpf(num) / mpf(den)
        return mpf(s)
    return mpf(x)


def is_nonpositive_integer(x) -> bool:
    x = real(x)
    return x <= 0 and x == mpmath.floor(x)


def is_integer(x) -> bool:
    x = real(x)
    return x == mpmath.floor(x)


def _check_pole(name: str, x: mpf) -> None:
    if is_nonpositive_integer(x):
        raise PoleError(f"{name} has a pole at {mpmath.nstr(x, 10)}")


def gamma(x) -> mpf:
    x = real(x)
    _check_pole("gamma", x)
    return mpmath.gamma(x)


def rgamma(x) -> mpf:
    """1/Gamma(x); zero at the poles of Gamma."""
    return mpmath.rgamma(real(x))


def loggamma(x) -> mpf:
    x = real(x)
    _check_pole("loggamma", x)
    return mpmath.loggamma(x)


def digamma(x) -> mpf:
    x = real(x)
    _check_pole("digamma", x)
    return mpmath.digamma(x)


def zeta(s) -> mpf:
    s = real(s)
    if abs(s - 1) < ZETA_POLE_RADIUS:
        raise PoleError("zeta has a pole at s = 1")
    return mpmath.zeta(s)


def poch(alpha, n: int) -> mpf:
    """Rising factorial (alpha)_n by running product (exact zero crossings)."""
    alpha = real(alpha)
    out = mpf(1)
    for i in range(n):
        out *= alpha + i
    return out


def _hyp_reg(upper: Sequence[mpf], lower: Sequence[mpf], z: mpf,
             max_terms: int = 100_000) -> mpf:
    """Regularized pFq: sum_n prod (a)_n / prod Gamma(b + n) * z^n / n!.

    Evaluated at the caller's precision plus guard digits; the result is
    rounded back to the caller's precision.
    """
    wp = mp.dps
    z = real(z)
    upper = [real(a) for a in upper]
    lower = [real(b) for b in lower]
    extra = _GUARD.get() + 5
    with mp.workdps(wp + extra):
        eps = mpf(10) ** (-(wp + extra))
        # rg[i] tracks 1/Gamma(b_i + n)
        rg = [mpmath.rgamma(b) for b in lower]
        num = mpf(1)  # prod (a)_n * z^n / n!
        total = mpf(0)
        # beyond n_min every parameter has crossed zero
        n_min = 0
        for b in lower:
            if b < 0:
                n_min = max(n_min, int(-b) + 2)
        for a in upper:
            if a < 0:
                n_min = max(n_min, int(-a) + 2)
        small_run = 0
        prev_mag = None
        for n in range(max_terms):
            term = num
            for r in rg:
                term *= r
            total += term
            if num == 0:
                # terminating series: an upper parameter hit zero
                break
            mag = abs(term)
            if n >= n_min and prev_mag is not None:
                # once decreasing past the parameter crossings, p <= q + 1 terms keep decreasing
                if (mag <= eps * abs(total) or mag == 0) and mag <= prev_mag:
                    small_run += 1
                    if small_run >= 2:
                        break
                else:
                    small_run = 0
            prev_mag = mag
            # advance to n + 1
            for a in upper:
                num *= a + n
            num *= z / (n + 1)
            for i, b in enumerate(lower):
                if rg[i] == 0:
                    rg[i] = mpmath.rgamma(b + n + 1)
                else:
                    rg[i] = rg[i] / (b + n)
        else:
            raise PrecisionError("regularized hypergeometric series did not converge")
    return +total


def hyp1f2_reg(alpha, beta, gam, chi) -> mpf:
    """Regularized 1F2(alpha; beta, gam; chi) = 1F2 / (Gamma(beta) Gamma(gam))."""
    return _hyp_reg([alpha], [beta, gam], chi)


def hyp2f3_reg(a1, a2, b1, b2, b3, chi) -> mpf:
    return _hyp_reg([a1, a2], [b1, b2, b3], chi)


def hyp0f1_reg(b, z) -> mpf:
    return _hyp_reg([], [b], z)


# --------------------------------------------------------------------------
# Bessel functions


def bessel_i(nu, x) -> mpf:
    """Modified Bessel function I_nu(x) for x >= 0 from its ascending series."""
    nu, x = real(nu), real(x)
    if x < 0:
        raise DomainError("bessel_i needs x >= 0")
    if x == 0:
        if nu < 0:
            raise DomainError("bessel_i(nu, 0) with nu < 0 is unbounded")
        return mpf(1) if nu == 0 else mpf(0)
    with mp.workdps(mp.dps + _GUARD.get()):
        val = (x / 2) ** nu * _hyp_reg([], [nu + 1], x * x / 4)
    return +val


def _hankel_pq(nu: mpf, x: mpf, target: mpf):
    """Optimally truncated Hankel P and Q sums.

    Returns ``(P, Q, bound)`` where ``bound`` is the first-omitted-term error
    estimate (relative to the sqrt(2/(pi x)) envelope), or ``None`` if the
    series cannot reach ``target``.
    """
    mu4 = 4 * nu * nu
    inv_x = 1 / x
    p_sum = mpf(1)
    q_sum = mpf(0)
    ak = mpf(1)  # a_k(nu) / x^k
    prev = mpf(1)
    k = 0
    while True:
        k += 1
        ak = ak * (mu4 - (2 * k - 1) ** 2) / (8 * k) * inv_x
        mag = abs(ak)
        if mag == 0:
            # half-odd-integer order: the expansion terminates and is exact
            return p_sum, q_sum, mpf(0)
        if mag <= target and k > nu - mpf(0.5):
            return p_sum, q_sum, 2 * mag
        if mag > prev and k > nu + 1:
            return None
        prev = mag
        sign = -1 if (k // 2) % 2 else 1
        if k % 2 == 0:
            p_sum += sign * ak
        else:
            q_sum += sign * ak


def _hankel_j(nu: mpf, x: mpf, target: mpf, second_kind: bool = False):
    """Large-argument expansion of J_nu(x) (or Y_nu(x)).

    Returns ``(value, bound)`` or ``None`` when the expansion cannot reach
    ``target``.
    """
    res = _hankel_pq(nu, x, target)
    if res is None:
        return None
    p_sum, q_sum, bound = res
    omega = x - (nu / 2 + mpf(1) / 4) * mp.pi
    amp = mpmath.sqrt(2 / (mp.pi * x))
    c, s = mpmath.cos(omega), mpmath.sin(omega)
    if second_kind:
        value = amp * (p_sum * s + q_sum * c)
    else:
        value = amp * (p_sum * c - q_sum * s)
    return value, amp * bound


def bessel_j_series(nu, x, extra_digits: int | None = None) -> mpf:
    """J_nu(x) from the ascending power series with cancellation guard digits."""
    nu, x = real(nu), real(x)
    if extra_digits is None:
        extra_digits = int(0.9 * float(x)) + _GUARD.get()
    with mp.workdps(mp.dps + extra_digits):
        val = (x / 2) ** nu * _hyp_reg([], [nu + 1], -(x * x) / 4)
    return +val


def bessel_j_hankel(nu, x):
    """J_nu(x) from the Hankel expansion; ``None`` if it cannot certify mp.dps."""
    nu, x = real(nu), real(x)
    wp = mp.dps
    with mp.workdps(wp + _GUARD.get()):
        res = _hankel_j(nu, x, mpf(10) ** (-(wp + 2)))
    if res is None:
        return None
    return +res[0]


# largest argument for which the power series branch is attempted
SERIES_X_CAP = 5000


def bessel_j(nu, x) -> mpf:
    """Bessel function of the first kind J_nu(x) for real x >= 0.

    Power series for ``x <= max(30, dps)``; beyond that the Hankel expansion
    with optimal truncation is used when its first omitted term certifies
    the working precision, falling back to the guarded power series.
    """
    nu, x = real(nu), real(x)
    if x < 0:
        raise DomainError("bessel_j needs x >= 0")
    if x == 0:
        if nu < 0:
            raise DomainError("bessel_j(nu, 0) with nu < 0 is not finite in general")
        return mpf(1) if nu == 0 else mpf(0)
    if x > max(30, mp.dps):
        val = bessel_j_hankel(nu, x)
        if val is not None:
            return val
    if x > SERIES_X_CAP:
        raise PrecisionError(
            f"bessel_j: neither branch certifies {mp.dps} digits at x={mpmath.nstr(x, 8)}")
    return bessel_j_series(nu, x)


def bessel_y_integral(nu, x) -> mpf:
    """Y_nu(x) from Schlaefli's integral representation.

    Independent of J_{+-nu}, so it can serve as an oracle for the
    cot/csc relation between the two kinds.
    """
    nu, x = real(nu), real(x)
    with mp.workdps(mp.dps + _GUARD.get()):
        npts = max(2, int(x / mp.pi) + 2)
        grid = [mp.pi * i / npts for i in range(npts + 1)]
        osc = mpmath.quad(lambda t: mpmath.sin(x * mpmath.sin(t) - nu * t), grid,
                          method="gauss-legendre")
        c = mpmath.cospi(nu)
        # cut where e^(|nu| t - x sinh t) is below the working precision
        L = (mp.dps + 5) * mpmath.log(10)
        T = mpf(0)
        for _ in range(30):
            T = mpmath.asinh((L + abs(nu) * T) / x)
        pts = [mpf(0)] + [T * i / 8 for i in range(1, 9)]
        tail = mpmath.quad(lambda t: (mpmath.exp(nu * t) + c * mpmath.exp(-nu * t))
                           * mpmath.exp(-x * mpmath.sinh(t)), pts, method="gauss-legendre")
        val = (osc - tail) / mp.pi
    return +val


def bessel_y(nu, x) -> mpf:
    """Y_nu(x) for non-integer nu and x > 0.

    Hankel expansion when it certifies the working precision, otherwise
    Schlaefli's integral.  Neither route goes through J_{+-nu}.
    """
    nu, x = real(nu), real(x)
    if is_integer(nu):
        raise DomainError("bessel_y is only provided for non-integer order")
    if x <= 0:
        raise DomainError("bessel_y needs x > 0")
    if x > max(30, mp.dps):
        wp = mp.dps
        with mp.workdps(wp + _GUARD.get()):
            res = _hankel_j(nu, x, mpf(10) ** (-(wp + 2)), second_kind=True)
        if res is not None:
            return +res[0]
    return bessel_y_integral(nu, x)
