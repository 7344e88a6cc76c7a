"""Direct summation of the Mathieu-Bessel series and its variants.

    S_nu(a, b) = sum_{n>=1} n^gamma J_nu(n b / a) / (n^2 + a^2)^mu

The sum is cut at an index N whose tail is bounded in one of two ways:

* the envelope |J_nu(x)| <= kappa sqrt(2 / (pi x)) (x >= max(1, nu^2)) with an
  integral comparison, see :func:`tail_bound`;
* Abel summation over the leading Hankel term cos(x - phase) plus an
  envelope for the O(1/x) remainder, see :func:`oscillatory_tail_bound`.
  This gains one power of N and is what makes slowly decaying cases cheap.

Leading terms are evaluated at the working precision.  Once a term is small
enough, the rest up to N are summed in 80-bit extended precision with a
vectorized Hankel expansion and an explicit rounding budget.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple

import mpmath
import numpy as np
from mpmath import mp, mpf

from . import precision as pr
from .errors import ConvergenceError, DomainError, ParamsError, PrecisionError

# safety factor on the large-argument Bessel envelope
KAPPA = 2
DEFAULT_CAP = 10_000_000
BLOCK = 1 << 20
LD = np.longdouble
LD_EPS = float(np.finfo(LD).eps)
# absolute error of the extended-precision Hankel evaluation relative to the
# sqrt(2/(pi x)) envelope, excluding argument rounding (measured ~1e-19)
LD_BESSEL_ERR = 1e-17
# the extended-precision body only starts at this Bessel argument
LD_X_MIN = 25


def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, mpf):
        man, exp = x.man, x.exp
        return Fraction(int(man)) * (Fraction(2) ** int(exp))
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class SeriesKind(enum.Enum):
    J = "j"
    ALT = "alt"
    Y = "y"


class RealParams(NamedTuple):
    a: mpf
    b: mpf
    gamma: mpf
    nu: mpf
    mu: mpf


@dataclass(frozen=True)
class Params:
    """Parameters (a, b, gamma, nu, mu), stored exactly as rationals.

    Storing Fractions keeps a parameter like nu = 1/3 exact; ``real()``
    rounds them at whatever precision is active when it is called.
    """

    a: Fraction
    b: Fraction
    gamma: Fraction
    nu: Fraction
    mu: Fraction

    def __post_init__(self):
        for name in ("a", "b", "gamma", "nu", "mu"):
            object.__setattr__(self, name, _fraction(getattr(self, name)))
        if self.a <= 0:
            raise ParamsError("a > 0 violated")
        if self.b <= 0:
            raise ParamsError("b > 0 violated")
        if self.mu <= 0:
            raise ParamsError("mu > 0 violated")
        if 2 * self.mu - self.gamma <= Fraction(1, 2):
            raise ParamsError("2mu-gamma>1/2 violated (series does not converge)")

    @classmethod
    def of(cls, a, b, gamma, nu, mu) -> "Params":
        return cls(a, b, gamma, nu, mu)

    def real(self) -> RealParams:
        return RealParams(*(pr.real(getattr(self, k)) for k in ("a", "b", "gamma", "nu", "mu")))

    def replace(self, **changes) -> "Params":
        return replace(self, **changes)

    # derived quantities ------------------------------------------------
    @property
    def gamma_plus_nu(self) -> Fraction:
        return self.gamma + self.nu

    @property
    def chi(self) -> mpf:
        return pr.real(self.b) ** 2 / 4

    @property
    def B(self) -> mpf:
        b, mu, nu = pr.real(self.b), pr.real(self.mu), pr.real(self.nu)
        return (b / 2) ** nu * pr.rgamma(mu) / 2

    @property
    def delta(self) -> mpf:
        return 2 * pr.real(self.mu) - pr.real(self.gamma) + mpf(1) / 2

    def lam(self, s) -> mpf:
        return (pr.real(s) + pr.real(self.gamma) + pr.real(self.nu)) / 2

    def omega(self, k: int) -> mpf:
        return pr.real(self.gamma) + pr.real(self.nu) + 2 * k

    @property
    def envelope_start(self) -> Fraction:
        """Smallest Bessel argument from which the kappa envelope is used."""
        return max(Fraction(1), self.nu * self.nu)


def check_kind(p: Params, kind: SeriesKind) -> None:
    if kind is SeriesKind.Y and p.nu.denominator == 1:
        raise ParamsError("Y series requires non-integer nu")


@dataclass(frozen=True)
class DirectSum:
    value: mpf
    n_terms: int
    tail_bound: mpf
    n_precise: int  # terms evaluated at working precision
    body_error: float  # rounding budget of the extended-precision part


def _tail_exponent(p: Params) -> Fraction:
    return p.gamma - 2 * p.mu + Fraction(1, 2)


def tail_bound(p: Params, kind: SeriesKind = SeriesKind.J, N: int = 1) -> mpf:
    """Upper bound on |sum_{n>N} term_n|.

    Uses |J_nu(x)|, |Y_nu(x)| <= KAPPA sqrt(2/(pi x)) for x >= max(1, nu^2),
    (n^2 + a^2)^mu >= n^(2 mu) and an integral comparison, which gives
    KAPPA sqrt(2a/(pi b)) N^q / (-q) with q = gamma - 2 mu + 1/2.
    """
    check_kind(p, kind)
    if N < 1:
        raise DomainError("N must be >= 1")
    if Fraction(N) * p.b / p.a < p.envelope_start:
        raise DomainError(
            f"N b / a = {float(N * p.b / p.a):.4g} is below the envelope start "
            f"{float(p.envelope_start):.4g}")
    a, b, *_ = p.real()
    q = pr.real(_tail_exponent(p))
    return KAPPA * mpmath.sqrt(2 * a / (mp.pi * b)) * mpf(N) ** q / (-q)


def _n_envelope(p: Params, tol: mpf) -> int:
    """Smallest N with tail_bound(N) <= tol."""
    a, b, *_ = p.real()
    q = pr.real(_tail_exponent(p))
    c = KAPPA * mpmath.sqrt(2 * a / (mp.pi * b)) / (-q)
    n = int(mpmath.ceil((tol / c) ** (1 / q)))
    n_env = math.ceil(p.envelope_start * p.a / p.b)
    n = max(n, n_env, 1)
    # guard the rounding in the closed form
    while n > 1 and tail_bound(p, SeriesKind.J, n) > tol:
        n += max(1, n // 1000)
    return n


def _n_mono(p: Params) -> int:
    """First index from which n^(gamma - 1/2) / (n^2 + a^2)^mu decreases."""
    g = p.gamma - Fraction(1, 2)
    if g <= 0:
        return 1
    # (gamma - 1/2)(n^2 + a^2) < 2 mu n^2
    n2 = g * p.a * p.a / (2 * p.mu - g)
    return math.isqrt(math.ceil(n2)) + 1


def remainder_constant(nu) -> mpf:
    """rho with |sqrt(pi x / 2) J_nu(x) - cos(x - (nu/2 + 1/4) pi)| <= rho / x
    for x >= max(1, nu^2), with the KAPPA cushion (same for Y and sin)."""
    nu = pr.real(nu)
    return KAPPA * max(abs(4 * nu * nu - 1) / 8, mpf(1) / 8)


def oscillatory_tail_bound(p: Params, kind: SeriesKind = SeriesKind.J, N: int = 1) -> mpf:
    """Upper bound on |sum_{n>N} term_n| from Abel summation.

    With theta = b / a and f(n) = sqrt(2/(pi theta)) n^(gamma-1/2) / (n^2+a^2)^mu
    (decreasing for n > N), the leading Hankel part is bounded by
    f(N+1) / |sin(theta'/2)| where theta' = theta (+ pi for the alternating
    sign), and the remainder by the integral of f(n) rho / (n theta).
    """
    check_kind(p, kind)
    if N < _n_mono(p):
        raise DomainError(f"N={N} is below the monotonicity start {_n_mono(p)}")
    if Fraction(N) * p.b / p.a < p.envelope_start:
        raise DomainError("N b / a is below the envelope start")
    a, b, g, nu, mu = p.real()
    theta = b / a
    half = theta / 2
    if kind is SeriesKind.ALT:
        half += mp.pi / 2
    s = abs(mpmath.sin(half))
    amp = mpmath.sqrt(2 / (mp.pi * theta))
    n1 = mpf(N + 1)
    lead = amp * n1 ** (g - mpf(1) / 2) / (n1 * n1 + a * a) ** mu
    if s == 0:
        return mpmath.inf
    lead = lead / s
    r = 2 * mu - g + mpf(1) / 2
    rest = amp * remainder_constant(nu) / theta * mpf(N) ** (-r) / r
    return lead + rest


def _best_tail(p: Params, kind: SeriesKind, N: int) -> mpf:
    best = tail_bound(p, kind, N)
    if N >= _n_mono(p):
        best = min(best, oscillatory_tail_bound(p, kind, N))
    return best


def _n_for_tol(p: Params, kind: SeriesKind, tol: mpf) -> int:
    """Smallest N (up to bisection) whose certified tail is <= tol."""
    hi = _n_envelope(p, tol)
    lo = max(_n_mono(p), math.ceil(p.envelope_start * p.a / p.b), 1)
    if lo >= hi:
        return hi
    if oscillatory_tail_bound(p, kind, lo) <= tol:
        return lo
    if oscillatory_tail_bound(p, kind, hi) > tol:
        return hi
    while hi - lo > max(1, lo // 1000):
        mid = (lo + hi) // 2
        if oscillatory_tail_bound(p, kind, mid) <= tol:
            hi = mid
        else:
            lo = mid
    return hi


def _term_mp(kind: SeriesKind, n: int, a: mpf, b: mpf, g: mpf, nu: mpf, mu: mpf) -> mpf:
    x = n * b / a
    if kind is SeriesKind.Y:
        bess = pr.bessel_y(nu, x)
    else:
        bess = pr.bessel_j(nu, x)
    t = mpf(n) ** g * bess / (mpf(n) ** 2 + a * a) ** mu
    if kind is SeriesKind.ALT and n % 2 == 0:
        t = -t
    return t


def term(p: Params, n: int, kind: SeriesKind = SeriesKind.J) -> mpf:
    """The n-th summand at the working precision."""
    check_kind(p, kind)
    with mp.workdps(mp.dps + pr.guard_digits()):
        t = _term_mp(kind, n, *p.real())
    return +t


# --------------------------------------------------------------------------
# extended-precision body


def _ld(x) -> np.longdouble:
    if isinstance(x, Fraction):
        return LD(x.numerator) / LD(x.denominator)
    return LD(mpmath.nstr(pr.real(x), 25, strip_zeros=False))


def _ld_to_mpf(x) -> mpf:
    hi = float(x)
    lo = float(x - LD(hi))
    return mpf(hi) + mpf(lo)


@dataclass(frozen=True)
class _HankelLD:
    x_min: float
    p_coef: tuple  # a_{2k} (-1)^k, in powers of 1/x^2
    q_coef: tuple  # a_{2k+1} (-1)^k
    cos_phi: np.longdouble
    sin_phi: np.longdouble
    log_mag: tuple  # log10 |a_k|

    def n_coef(self, x0: float) -> int:
        """Number of a_k needed at x >= x0 (all while below 1e-22)."""
        lx = math.log10(x0)
        for k, lm in enumerate(self.log_mag):
            if lm - k * lx < -22:
                return k
        return len(self.log_mag)


def _hankel_ld(nu: Fraction) -> _HankelLD:
    """Coefficients for J_nu / Y_nu in extended precision at x >= x_min."""
    x_min = max(LD_X_MIN, 4 * float(nu * nu))
    with mp.workdps(30):
        nur = pr.real(nu)
        m4 = 4 * nur * nur
        while True:
            coefs = [mpf(1)]
            ak = mpf(1)
            prev = mpf(1)
            ok = False
            for k in range(1, 200):
                ak = ak * (m4 - (2 * k - 1) ** 2) / (8 * k)
                mag = abs(ak) / mpf(x_min) ** k
                if ak == 0:
                    ok = True
                    break
                if mag > prev and k > abs(nur) + 1:
                    break
                coefs.append(ak)
                prev = mag
                if mag < mpf("1e-22"):
                    ok = True
                    break
            if ok:
                break
            x_min *= 2
        p_coef = tuple(_ld(c * (-1) ** (k // 2)) for k, c in enumerate(coefs) if k % 2 == 0)
        q_coef = tuple(_ld(c * (-1) ** (k // 2)) for k, c in enumerate(coefs) if k % 2 == 1)
        phi = (nur / 2 + mpf(1) / 4) * mp.pi
        cphi, sphi = _ld(mpmath.cos(phi)), _ld(mpmath.sin(phi))
        log_mag = tuple(float(mpmath.log10(abs(c))) for c in coefs)
    return _HankelLD(float(x_min), p_coef, q_coef, cphi, sphi, log_mag)


def _horner(coef, u):
    out = np.zeros_like(u) + coef[-1]
    for c in coef[-2::-1]:
        out = out * u + c
    return out


def _body_block(p: Params, kind: SeriesKind, hk: _HankelLD, n0: int, n1: int):
    """Extended-precision sum of terms n0..n1 (inclusive) and its error bound."""
    n = np.arange(n0, n1 + 1, dtype=np.int64).astype(LD)
    theta = _ld(p.b / p.a)
    x = n * theta
    if float(x[0]) < hk.x_min:
        raise DomainError("extended-precision body below its Hankel range")
    g, mu = _ld(p.gamma), _ld(p.mu)
    a2 = _ld(p.a * p.a)
    w = np.exp(g * np.log(n) - mu * np.log(n * n + a2))
    u = 1 / x
    u2 = u * u
    k = max(hk.n_coef(float(x[0])), 1)
    P = _horner(hk.p_coef[:(k + 1) // 2], u2)
    Q = _horner(hk.q_coef[:k // 2], u2) * u if k > 1 else np.zeros_like(u)
    cx, sx = np.cos(x), np.sin(x)
    cw = cx * hk.cos_phi + sx * hk.sin_phi  # cos(x - phi)
    sw = sx * hk.cos_phi - cx * hk.sin_phi  # sin(x - phi)
    env = np.sqrt(_ld(2 / mp.pi) / x)
    if kind is SeriesKind.Y:
        bess = env * (P * sw + Q * cw)
    else:
        bess = env * (P * cw - Q * sw)
    vals = w * bess
    if kind is SeriesKind.ALT:
        vals = np.where(np.arange(n0, n1 + 1) % 2 == 0, -vals, vals)
    # Hankel truncation + rounding of x (phase) + weight rounding
    err = (LD_BESSEL_ERR + 4 * LD_EPS * (x + 1)
           + 8 * LD_EPS * (abs(g) + abs(mu) + 1) * math.log(n1 + float(a2))) * env * w
    total = np.sum(vals)
    err_sum = float(np.sum(err)) + float(np.sum(np.abs(vals))) * LD_EPS * (math.log2(len(vals)) + 2)
    if not (np.isfinite(total) and math.isfinite(err_sum)):
        raise PrecisionError("extended-precision body over/underflowed")
    return _ld_to_mpf(total), err_sum


def direct_sum(p: Params, kind: SeriesKind = SeriesKind.J, tol="1e-20", *,
               cap: int = DEFAULT_CAP, use_fast_body: bool = True) -> DirectSum:
    """Sum the series with a certified truncation error ``<= tol``.

    Error budget: tail <= tol/2, extended-precision body <= tol/4; the
    working-precision head is carried with guard digits.
    """
    check_kind(p, kind)
    tol = pr.real(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    wp = mp.dps
    with mp.workdps(wp + pr.guard_digits()):
        # sum |head| >= |term_1|: refuse early rather than after the head
        floor = mpf(10) ** (2 - wp)
        if tol < floor * abs(_term_mp(kind, 1, *p.real())):
            raise PrecisionError(f"tol={mpmath.nstr(tol, 3)} is below what {wp} digits support")
        N = _n_for_tol(p, kind, tol / 2)
        if N > cap:
            raise ConvergenceError(f"direct sum needs N={N} terms (cap {cap})")
        tail = _best_tail(p, kind, N)

        # head/body split: the body's rounding budget must fit in tol/4
        n1 = N
        if use_fast_body:
            hk = _hankel_ld(p.nu)
            n_x = math.ceil(Fraction(hk.x_min).limit_denominator(10**6) * p.a / p.b) + 1
            n_err = _n_envelope(p, tol / 4 / mpf(LD_BESSEL_ERR) * KAPPA / 2)
            n1 = min(N, max(n_x, n_err, 16))

        rp = p.real()
        body, body_err = mpf(0), 0.0
        while n1 < N:
            body, body_err = mpf(0), 0.0
            for start in range(n1 + 1, N + 1, BLOCK):
                stop = min(N, start + BLOCK - 1)
                s, e = _body_block(p, kind, hk, start, stop)
                body += s
                body_err += e
            if body_err <= float(tol / 4):
                break
            n1 = min(N, 2 * n1)
        if n1 >= N:
            body, body_err = mpf(0), 0.0

        head_terms = [_term_mp(kind, n, *rp) for n in range(1, n1 + 1)]
        head = mpmath.fsum(head_terms)
        scale = mpmath.fsum(head_terms, absolute=True)
        if tol < floor * scale:
            raise PrecisionError(
                f"tol={mpmath.nstr(tol, 3)} is below what {wp} digits support "
                f"for a sum of magnitude {mpmath.nstr(scale, 3)}")
        value = head + body
    return DirectSum(+value, N, +tail, n1, body_err)
