"""Large-a expansions of the Mathieu-Bessel series.

Three regimes, selected by gamma + nu:

* generic: an algebraic series in a^-2 driven by zeta at -(gamma + nu + 2k);
* double pole (gamma + nu = -1): the pole of H(s) at s = 1 merges with the
  zeta pole, producing a log a term in the residue;
* exponentially small (gamma + nu = 2m >= 0): the algebraic series collapses
  through the trivial zeros of zeta and what remains is O(e^{-2 pi a}).

Every evaluation returns an :class:`ExpansionReport`; ``report.approx`` is the
approximation of the full series S, ``report.value`` the expansion part alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import mp, mpf

from . import precision as pr
from .errors import DomainError, PoleError, RegimeError, UnimplementedError
from .mellin import leading_term
from .series import Params

K_MAX = 64


class Regime(enum.Enum):
    GENERIC = "generic"
    DOUBLE_POLE = "double-pole"
    EXP_SMALL = "exp-small"


def regime_of(p: Params) -> Regime:
    gn = p.gamma_plus_nu
    if gn.denominator == 1:
        n = int(gn)
        if n < 0 and n % 2 == 1:
            return Regime.DOUBLE_POLE
        if n >= 0 and n % 2 == 0:
            return Regime.EXP_SMALL
    return Regime.GENERIC


def exp_small_m(p: Params) -> int:
    if regime_of(p) is not Regime.EXP_SMALL:
        raise RegimeError(f"gamma+nu={p.gamma_plus_nu} is not a non-negative even integer")
    return int(p.gamma_plus_nu) // 2


@dataclass
class ExpansionReport:
    value: mpf
    terms: list
    k_used: int
    k_o: int
    err_est: mpf
    regime: Regime
    base: mpf = mpf(0)
    first_k: int = 0  # index k carried by terms[0]
    notes: list = field(default_factory=list)

    @property
    def approx(self) -> mpf:
        """Approximation of the full series: base + expansion."""
        return self.base + self.value

    @property
    def k_o_label(self) -> int:
        """Last index k kept under optimal truncation (the least term is k_o_label + 1)."""
        return self.k_o + self.first_k - 1


@dataclass(frozen=True)
class CoeffSet:
    F: tuple
    C: tuple
    Cp: tuple
    D: tuple
    A: Optional[mpf]
    Fstar: Optional[mpf]
    kappa: Optional[mpf]
    I_script: mpf


# --------------------------------------------------------------------------
# helpers


def optimal_truncate(terms: Sequence) -> int:
    """Index of the least |term|, scanning until |term| grows twice in a row."""
    if not terms:
        raise ValueError("empty term list")
    mags = [abs(t) for t in terms]
    best = 0
    grow = 0
    for i in range(1, len(mags)):
        if mags[i] < mags[best]:
            best = i
        if mags[i] > mags[i - 1]:
            grow += 1
            if grow >= 2:
                break
        else:
            grow = 0
    return best


def _f_ratio_terms(k: int, mu: mpf, chi: mpf):
    """Yield (-k)_n / (1 - mu - k)_n * chi^n / n! for n = 0..k."""
    c = mpf(1)
    for n in range(k + 1):
        yield c
        if n < k:
            c = c * (k - n) / (k - 1 + mu - n) * chi / (n + 1)


def coeff_F(p: Params, k: int) -> mpf:
    """F_k = 1F2(-k; 1 - mu - k, 1 + nu; chi), a degree-k polynomial in chi.

    (-k)_n / (1 - mu - k)_n = prod_{i<n} (k - i) / (k - 1 + mu - i) has no
    vanishing denominator for mu > 0 and n <= k, so the finite sum is used
    as is for every admissible mu.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    nu = pr.real(p.nu)
    if pr.is_nonpositive_integer(1 + nu):
        raise PoleError("F_k needs 1 + nu off the non-positive integers; use the regularized form")
    with mp.workdps(mp.dps + pr.guard_digits()):
        mu, chi = pr.real(p.mu), p.chi
        total = mpf(0)
        rising = mpf(1)
        for n, c in enumerate(_f_ratio_terms(k, mu, chi)):
            total += c / rising
            rising *= 1 + nu + n
    return +total


def coeff_F_reg(p: Params, k: int) -> mpf:
    """F_k / Gamma(1 + nu), finite for every real nu."""
    with mp.workdps(mp.dps + pr.guard_digits()):
        mu, nu, chi = pr.real(p.mu), pr.real(p.nu), p.chi
        total = mpf(0)
        for n, c in enumerate(_f_ratio_terms(k, mu, chi)):
            total += c * pr.rgamma(1 + nu + n)
    return +total


def script_I(p: Params) -> mpf:
    """Gamma(1 + nu) (b/2)^-nu I_nu(b) = 0F1(; 1 + nu; chi)."""
    nu = pr.real(p.nu)
    with mp.workdps(mp.dps + pr.guard_digits()):
        val = pr.gamma(1 + nu) * pr.hyp0f1_reg(1 + nu, p.chi)
    return +val


def _alg_terms(p: Params, k_start: int, k_stop: int) -> list:
    """Terms (-1)^k (mu)_k/k! zeta(-omega_k) F_k a^(-nu-2mu-2k) (b/2)^nu / Gamma(1+nu)."""
    a, b, _, nu, mu = p.real()
    scale = a ** (-nu - 2 * mu) * (b / 2) ** nu
    a2 = a ** -2
    terms = []
    coef = mpf(1)  # (mu)_k / k!
    for k in range(k_stop):
        if k >= k_start:
            z = pr.zeta(-p.omega(k))
            terms.append((-1) ** k * coef * z * coeff_F_reg(p, k) * scale * a2 ** k)
        coef = coef * (mu + k) / (k + 1)
    return terms


def _truncated(terms: list, K: Optional[int], first_k: int):
    k_o = optimal_truncate(terms)
    if K is None:
        k_used = k_o
    else:
        k_used = K - first_k + 1
        if not 0 <= k_used <= len(terms):
            raise ValueError(f"K={K} outside the available range")
    value = mpmath.fsum(terms[:k_used])
    err = abs(terms[k_used]) if k_used < len(terms) else mpf(0)
    return value, k_used, k_o, err


# --------------------------------------------------------------------------
# generic regime


def theorem1_series(p: Params, K: Optional[int] = None) -> ExpansionReport:
    """Algebraic expansion of S - a^(gamma - 2mu + 1) H(1).

    ``K=None`` truncates optimally, i.e. just before the least term; an
    integer K sums k = 0..K inclusive.
    """
    regime = regime_of(p)
    if regime is Regime.DOUBLE_POLE:
        raise RegimeError("gamma+nu is a negative odd integer: use theorem2_series")
    with mp.workdps(mp.dps + pr.guard_digits()):
        base = leading_term(p)
        terms = _alg_terms(p, 0, K_MAX)
        notes = []
        if regime is Regime.EXP_SMALL:
            # only trivial-zero terms remain; the series is exact as written
            nz = [i for i, t in enumerate(terms) if t != 0]
            k_used = (max(nz) + 1) if nz else 0
            if K is not None:
                k_used = min(k_used, K + 1)
            value = mpmath.fsum(terms[:k_used])
            k_o = k_used
            err = _exp_small_scale(p)
            notes.append("series collapses via trivial zeta zeros; err_est is the e^(-2 pi a) scale")
        else:
            value, k_used, k_o, err = _truncated(terms, K, 0)
    return ExpansionReport(+value, terms, k_used, k_o, +err, regime, +base, 0, notes)


def theorem1_alternative_term(p: Params, k: int) -> mpf:
    """k-th term of the expansion rewritten with the zeta functional equation:

    -(b/2)^nu sin(pi (gamma+nu)/2) / (2^(gamma+nu) pi^(1+gamma+nu) Gamma(1+nu))
        * (mu)_k / k! * Gamma(1 + omega_k) zeta(1 + omega_k) F_k (2 pi a)^-2k,

    with overall power a^(-nu - 2mu).  Where Gamma(1 + omega_k) or
    zeta(1 + omega_k) is singular (omega_k a non-positive integer) the sine
    vanishes too and the finite limit, equal to the direct term, is returned.
    """
    if regime_of(p) is Regime.DOUBLE_POLE:
        raise RegimeError("gamma+nu is a negative odd integer")
    with mp.workdps(mp.dps + pr.guard_digits()):
        a, b, g, nu, mu = p.real()
        w = p.omega(k)
        if pr.is_nonpositive_integer(w):
            val = _alg_terms(p, k, k + 1)[0]
        else:
            gn = g + nu
            sine = mpmath.sinpi(gn / 2)
            pref = -(a ** (-nu - 2 * mu)) * (b / 2) ** nu * sine / (2 ** gn * mp.pi ** (1 + gn))
            val = (pref * pr.poch(mu, k) / mpmath.factorial(k) * mpmath.gamma(1 + w)
                   * pr.zeta(1 + w) * coeff_F_reg(p, k) * (2 * mp.pi * a) ** (-2 * k))
    return +val


# --------------------------------------------------------------------------
# double pole: gamma + nu = -1


def _check_double_pole(p: Params) -> None:
    if p.gamma_plus_nu != -1:
        if regime_of(p) is Regime.DOUBLE_POLE:
            raise UnimplementedError("only gamma+nu = -1 is covered among the double-pole cases")
        raise RegimeError(f"gamma+nu={p.gamma_plus_nu}; the double-pole residue needs -1")


def coeff_A(p: Params) -> mpf:
    """A = Gamma(1+nu) {chi Gamma(1-mu) 2F3reg(1,1; 2, 2-mu, 2+nu; chi)
    - pi chi^mu / sin(pi mu) 1F2reg(mu; 1+mu, 1+mu+nu; chi)}, mu not an integer."""
    with mp.workdps(mp.dps + pr.guard_digits()):
        _, _, _, nu, mu = p.real()
        chi = p.chi
        val = pr.gamma(1 + nu) * (
            chi * pr.gamma(1 - mu) * pr.hyp2f3_reg(1, 1, 2, 2 - mu, 2 + nu, chi)
            - mp.pi * chi ** mu / mpmath.sinpi(mu) * pr.hyp1f2_reg(mu, 1 + mu, 1 + mu + nu, chi))
    return +val


def coeff_Fstar(p: Params) -> mpf:
    """sum_n chi^n / ((2)_n (2+nu)_n) [psi(2+n) - psi(2) + psi(2+nu+n) - psi(2+nu)]."""
    with mp.workdps(mp.dps + pr.guard_digits()):
        nu, chi = pr.real(p.nu), p.chi
        eps = mpf(10) ** (-mp.dps)
        dpsi1 = mpf(0)  # psi(2+n) - psi(2)
        dpsi2 = mpf(0)  # psi(2+nu+n) - psi(2+nu)
        c = mpf(1)
        total = mpf(0)
        n = 0
        while True:
            t = c * (dpsi1 + dpsi2)
            total += t
            if n > 2 and abs(t) <= eps * abs(total):
                break
            dpsi1 += 1 / (2 + n)
            dpsi2 += 1 / (2 + nu + n)
            c = c * chi / ((2 + n) * (2 + nu + n))
            n += 1
    return +total


def coeff_kappa(p: Params) -> mpf:
    """1 - euler + psi(2 + nu) - log chi."""
    with mp.workdps(mp.dps + pr.guard_digits()):
        val = 1 - mp.euler + pr.digamma(2 + pr.real(p.nu)) - mpmath.log(p.chi)
    return +val


def residue_s1(p: Params) -> mpf:
    """Residue of H(s) zeta(s) a^s at the double pole s = 1 (gamma + nu = -1).

    The series itself is approximated by a^(gamma - 2mu) times this residue;
    see :func:`theorem2_series`.
    """
    _check_double_pole(p)
    mu_f = p.mu
    if mu_f.denominator == 1 and mu_f >= 2:
        raise UnimplementedError("integer mu >= 2 needs a further limiting form")
    with mp.workdps(mp.dps + pr.guard_digits()):
        a, b, _, nu, mu = p.real()
        B = p.B
        if mu_f == 1:
            I = script_I(p)
            kap = coeff_kappa(p)
            fstar = coeff_Fstar(p)
            val = a * B / pr.gamma(1 + nu) * (
                2 * mpmath.log(a) + 2 * mp.euler + kap * (1 - I) - p.chi * fstar / (1 + nu))
        else:
            A = coeff_A(p)
            val = 2 * a * B * pr.gamma(mu) / pr.gamma(1 + nu) * (
                mpmath.log(a) + (A + mp.euler - pr.digamma(mu)) / 2)
    return +val


def theorem2_series(p: Params, K: Optional[int] = None) -> ExpansionReport:
    """Expansion of S - a^(gamma-2mu) Res_{s=1} for gamma + nu = -1 (terms k >= 1)."""
    _check_double_pole(p)
    with mp.workdps(mp.dps + pr.guard_digits()):
        a, _, g, _, mu = p.real()
        base = a ** (g - 2 * mu) * residue_s1(p)
        terms = _alg_terms(p, 1, K_MAX + 1)
        value, k_used, k_o, err = _truncated(terms, K, 1)
    return ExpansionReport(+value, terms, k_used, k_o, +err, Regime.DOUBLE_POLE, +base, 1)


# --------------------------------------------------------------------------
# exponentially small regime: gamma + nu = 2m


def _resolve_m(p: Params, m: Optional[int]) -> int:
    mm = exp_small_m(p)
    if m is not None and m != mm:
        raise RegimeError(f"m={m} but gamma+nu={p.gamma_plus_nu}")
    return mm


def coeff_C(p: Params, m: Optional[int] = None, j: int = 1) -> mpf:
    """Inverse-factorial coefficients of the gamma ratio G_1(s)."""
    m = _resolve_m(p, m)
    mu = pr.real(p.mu)
    if j == 0:
        return mpf(1)
    if j == 1:
        return (1 - mu) * (4 * m - mu) / 2
    if j == 2:
        return (1 - mu) * (2 - mu) * (16 * m * m + (1 + mu) * (mu - 8 * m)) / 8
    raise UnimplementedError("only C_1, C_2 are available in closed form")


def _bessel_ratios(p: Params):
    b, nu = pr.real(p.b), pr.real(p.nu)
    i0 = pr.bessel_i(nu, b)
    return pr.bessel_i(nu + 1, b) / i0, pr.bessel_i(nu + 2, b) / i0


def coeff_Cprime(p: Params, m: Optional[int] = None, j: int = 1) -> mpf:
    """Inverse-factorial coefficients of the 1F2 factor (Bessel-ratio forms)."""
    m = _resolve_m(p, m)
    if j == 0:
        return mpf(1)
    with mp.workdps(mp.dps + pr.guard_digits()):
        b, mu = pr.real(p.b), pr.real(p.mu)
        r1, r2 = _bessel_ratios(p)
        if j == 1:
            val = (1 - mu) * b * r1
        elif j == 2:
            val = (1 - mu) * b * ((2 * m + 1 - mu) * r1 + (2 - mu) * b / 2 * r2)
        else:
            raise UnimplementedError("only C'_1, C'_2 are available in closed form")
    return +val


def coeff_D(p: Params, m: Optional[int] = None, j: int = 0) -> mpf:
    """D_0 = 1, D_1 = C_1 + C'_1, D_2 = C_2 + C'_2 + C_1 C'_1."""
    m = _resolve_m(p, m)
    if j == 0:
        return mpf(1)
    with mp.workdps(mp.dps + pr.guard_digits()):
        if j == 1:
            val = coeff_C(p, m, 1) + coeff_Cprime(p, m, 1)
        elif j == 2:
            val = (coeff_C(p, m, 2) + coeff_Cprime(p, m, 2)
                   + coeff_C(p, m, 1) * coeff_Cprime(p, m, 1))
        else:
            raise UnimplementedError("D_j is only available for j <= 2")
    return +val


def inverse_factorial_F(p: Params, m: Optional[int], s, J: int = 2) -> mpf:
    """Large-s expansion of 1F2(m - s/2; 1 - mu + m - s/2, 1 + nu; chi)."""
    m = _resolve_m(p, m)
    s = pr.real(s)
    if s < 10:
        raise DomainError("inverse factorial expansion needs s >= 10")
    if not 0 <= J <= 2:
        raise UnimplementedError("J must be 0, 1 or 2")
    with mp.workdps(mp.dps + pr.guard_digits()):
        mu = pr.real(p.mu)
        series = mpf(1)
        if J >= 1:
            series += coeff_Cprime(p, m, 1) / (s + mu - 1)
        if J >= 2:
            series += coeff_Cprime(p, m, 2) / ((s + mu - 1) * (s + mu - 2))
        val = script_I(p) * series
    return +val


def _exp_small_scale(p: Params) -> mpf:
    """(-1)^m a^(gamma-mu) pi^mu I_nu(b) / Gamma(mu) e^(-2 pi a)."""
    a, b, g, nu, mu = p.real()
    m = exp_small_m(p) if regime_of(p) is Regime.EXP_SMALL else 0
    return ((-1) ** m * a ** (g - mu) * mp.pi ** mu * pr.bessel_i(nu, b)
            * pr.rgamma(mu) * mpmath.exp(-2 * mp.pi * a))


def exp_small_offset(p: Params) -> mpf:
    """a^(gamma-2mu+1) H(1) - delta_{0m} a^(-nu-2mu) (b/2)^nu / (2 Gamma(1+nu)).

    The exponentially small remainder is S minus this quantity.
    """
    m = exp_small_m(p)
    with mp.workdps(mp.dps + pr.guard_digits()):
        a, b, _, nu, mu = p.real()
        val = leading_term(p)
        if m == 0:
            val -= a ** (-nu - 2 * mu) * (b / 2) ** nu * pr.rgamma(1 + nu) / 2
    return +val


def higher_exponential_envelope(p: Params) -> mpf:
    """Size of the omitted n = 2 exponential, |scale| e^(-2 pi a) 2^(mu-1)."""
    a, _, _, _, mu = p.real()
    return abs(_exp_small_scale(p)) * mpmath.exp(-2 * mp.pi * a) * 2 ** (mu - 1)


def theorem3_expsmall(p: Params, J: int = 2) -> ExpansionReport:
    """Exponentially small expansion of S - offset for gamma + nu = 2m."""
    m = exp_small_m(p)
    if J > 2:
        raise UnimplementedError("D_j is only available in closed form for j <= 2")
    if J < 0:
        raise ValueError("J must be >= 0")
    with mp.workdps(mp.dps + pr.guard_digits()):
        a = pr.real(p.a)
        x = 2 * mp.pi * a
        scale = _exp_small_scale(p)
        terms = [scale * coeff_D(p, m, j) / x ** j for j in range(3)]
        value = mpmath.fsum(terms[:J + 1])
        if J < 2:
            err = abs(terms[J + 1])
        else:
            # next term estimated from the ratio of the last two
            ratio = abs(terms[2] / terms[1]) if terms[1] != 0 else 1 / x
            err = abs(terms[2]) * ratio
        err += higher_exponential_envelope(p)
        base = exp_small_offset(p)
        k_o = optimal_truncate(terms)
    notes = ["the e^(-4 pi a) and higher exponentials are not summed; err_est includes their envelope"]
    return ExpansionReport(+value, terms, J + 1, k_o, +err, Regime.EXP_SMALL, +base, 0, notes)


def coeff_set(p: Params, k_max: int = 8) -> CoeffSet:
    """Every closed-form coefficient that applies to ``p``.

    C, C', D are filled only for gamma + nu = 2m; A is filled for the
    double-pole case with non-integer mu, F_* and kappa for mu = 1.
    """
    F = tuple(coeff_F(p, k) for k in range(k_max + 1))
    C = Cp = D = ()
    A = Fstar = kappa = None
    regime = regime_of(p)
    if regime is Regime.EXP_SMALL:
        m = exp_small_m(p)
        C = (coeff_C(p, m, 1), coeff_C(p, m, 2))
        Cp = (coeff_Cprime(p, m, 1), coeff_Cprime(p, m, 2))
        D = tuple(coeff_D(p, m, j) for j in range(3))
    elif regime is Regime.DOUBLE_POLE and p.gamma_plus_nu == -1:
        if p.mu.denominator != 1:
            A = coeff_A(p)
        elif p.mu == 1:
            Fstar, kappa = coeff_Fstar(p), coeff_kappa(p)
    return CoeffSet(F, C, Cp, D, A, Fstar, kappa, script_I(p))
