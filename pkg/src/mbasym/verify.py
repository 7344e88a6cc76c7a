"""Oracle checks shared by the ``verify`` command and the test-suite.

Each check computes a quantity two independent ways and returns a
:class:`Check`.  Parameter sets come from a seeded generator so every run is
reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, List

import mpmath
from mpmath import mp, mpf

from . import asymptotics as asy
from . import mellin
from . import precision as pr
from . import variants
from .series import Params, SeriesKind, direct_sum


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}: {self.detail}"


def _rel(x, y) -> mpf:
    x, y = pr.real(x), pr.real(y)
    den = max(abs(x), abs(y))
    return abs(x - y) / den if den else mpf(0)


def _frac(rng: random.Random, lo: float, hi: float, den: int = 12) -> Fraction:
    return Fraction(rng.randint(int(lo * den), int(hi * den)), den)


def _noninteger(rng, lo, hi, den=12) -> Fraction:
    while True:
        x = _frac(rng, lo, hi, den)
        if x.denominator != 1:
            return x


# --------------------------------------------------------------------------
# parameter generators


def random_oracle_params(rng: random.Random, nu_range=(-0.9, 2.5)) -> Params:
    """Parameters whose direct sum converges fast (mu >= 2, moderate a)."""
    while True:
        mu = _frac(rng, 2, 4)
        g = _frac(rng, -1, 1.5)
        nu = _noninteger(rng, *nu_range)
        a = _frac(rng, 1, 4, 4)
        b = _frac(rng, 0.5, 2, 4)
        p = Params(a, b, g, nu, mu)
        if asy.regime_of(p) is asy.Regime.GENERIC and asy.regime_of(p.replace(nu=-nu)) is asy.Regime.GENERIC:
            return p


def random_y_params(rng: random.Random) -> Params:
    """As random_oracle_params with a/b <= 2, which keeps the quadrature head short."""
    while True:
        p = random_oracle_params(rng)
        if p.a <= 2 * p.b:
            return p


def random_generic_params(rng: random.Random) -> Params:
    while True:
        p = Params(_frac(rng, 2, 10, 4), _frac(rng, 0.25, 3, 4), _frac(rng, -2, 2),
                   _noninteger(rng, -0.9, 3), _frac(rng, 0.5, 5))
        if asy.regime_of(p) is asy.Regime.GENERIC:
            return p


def random_double_pole_params(rng: random.Random, mu=None) -> Params:
    nu = _noninteger(rng, -0.9, 2.5)
    if mu is None:
        mu = _noninteger(rng, 0.3, 4)
    return Params(_frac(rng, 2, 8, 2), _frac(rng, 0.5, 2, 4), -1 - nu, nu, mu)


def random_removable_params(rng: random.Random) -> Params:
    """nu > 7/2 and mu > 2 put mu - lambda = -2..2 inside the strip."""
    return Params(_frac(rng, 1, 4), _frac(rng, 0.5, 2, 4), _frac(rng, -1, 1),
                  _noninteger(rng, 3.6, 6), _noninteger(rng, 2.2, 5))


def removable_s(p: Params, k: int) -> Fraction:
    """s with mu - lambda(s) = k."""
    return 2 * (p.mu - k) - p.gamma - p.nu


# --------------------------------------------------------------------------
# identities (oracle level)


def check_alternating_identity(p: Params, tol="1e-22") -> Check:
    tol = pr.real(tol)
    alt = direct_sum(p, SeriesKind.ALT, tol).value
    full = direct_sum(p, SeriesKind.J, tol).value
    half = direct_sum(p.replace(a=p.a / 2), SeriesKind.J, tol).value
    c = mpf(2) ** pr.real(p.gamma - 2 * p.mu + 1)
    diff = abs(alt - (full - c * half))
    bound = 4 * tol
    return Check(f"alternating identity {_ptext(p)}", diff <= bound,
                 f"|diff|={mpmath.nstr(diff, 3)} <= {mpmath.nstr(bound, 3)}")


def check_y_identity(p: Params, tol="1e-22", digits: int = 30) -> Check:
    with mp.workdps(digits):
        return _y_identity(p, pr.real(tol))


def _y_identity(p: Params, tol: mpf) -> Check:
    cot, csc = variants.y_weights(p.nu)
    tj = tol / (abs(cot) + abs(csc))
    y = direct_sum(p, SeriesKind.Y, tol).value
    jp = direct_sum(p, SeriesKind.J, tj).value
    jm = direct_sum(p.replace(nu=-p.nu), SeriesKind.J, tj).value
    diff = abs(y - (cot * jp - csc * jm))
    bound = 4 * tol
    return Check(f"Y identity {_ptext(p)}", diff <= bound,
                 f"|diff|={mpmath.nstr(diff, 3)} <= {mpmath.nstr(bound, 3)}")


def check_half_order_reduction(p: Params, tol="1e-22") -> Check:
    """nu = +1/2 (sin) or -1/2 (cos): compare with the trigonometric series."""
    if abs(p.nu) != Fraction(1, 2):
        raise ValueError("needs nu = +-1/2")
    tol = pr.real(tol)
    ds = direct_sum(p, SeriesKind.J, tol)
    trig = mpmath.sin if p.nu > 0 else mpmath.cos
    with mp.workdps(mp.dps + pr.guard_digits()):
        a, b, g, _, mu = p.real()
        x = b / a
        s = mpmath.fsum(mpf(n) ** (g - mpf(1) / 2) * trig(n * x) / (mpf(n) ** 2 + a * a) ** mu
                        for n in range(1, ds.n_terms + 1))
        s *= mpmath.sqrt(2 * a / (mp.pi * b))
    # both sums stop at the same N, so only evaluation error remains
    diff = abs(ds.value - s)
    bound = 4 * tol
    return Check(f"nu={p.nu} trigonometric reduction {_ptext(p)}", diff <= bound,
                 f"|diff|={mpmath.nstr(diff, 3)} <= {mpmath.nstr(bound, 3)} (N={ds.n_terms})")


def check_functional_equation_terms(p: Params, k_max: int = 8, rtol=None) -> Check:
    rtol = pr.real(rtol) if rtol is not None else mpf(10) ** (10 - mp.dps)
    terms = asy._alg_terms(p, 0, k_max + 1)
    worst = mpf(0)
    for k in range(k_max + 1):
        worst = max(worst, _rel(terms[k], asy.theorem1_alternative_term(p, k)))
    return Check(f"functional-equation terms k<={k_max} {_ptext(p)}", worst <= rtol,
                 f"max rel diff {mpmath.nstr(worst, 3)} <= {mpmath.nstr(rtol, 3)}")


# --------------------------------------------------------------------------
# residues


def fd_residue(p: Params, h="1e-5") -> mpf:
    """d/ds [(s-1)^2 H(s) zeta(s) a^s] at s = 1 by a central difference."""
    h = pr.real(h)
    a = pr.real(p.a)

    def g(s):
        return (s - 1) ** 2 * mellin.H(p, s, strict=False) * pr.zeta(s) * a ** s

    with mp.workdps(mp.dps + pr.guard_digits()):
        val = (g(1 + h) - g(1 - h)) / (2 * h)
    return +val


def check_residue(p: Params, rtol="1e-8") -> Check:
    rtol = pr.real(rtol)
    with mp.workdps(max(mp.dps, 60)):
        closed = asy.residue_s1(p)
        fd = fd_residue(p)
        r = _rel(closed, fd)
    return Check(f"residue at s=1 {_ptext(p)}", r <= rtol,
                 f"closed {mpmath.nstr(closed, 12)} vs finite difference, rel {mpmath.nstr(r, 3)}")


# --------------------------------------------------------------------------
# coefficients and the Mellin kernel


def check_F_closed_forms(p: Params) -> Check:
    chi, mu, nu = p.chi, pr.real(p.mu), pr.real(p.nu)
    f1 = 1 + chi / (mu * (1 + nu))
    f2 = 1 + 2 * chi / ((1 + mu) * (1 + nu)) + chi ** 2 / (mu * (1 + mu) * (1 + nu) * (2 + nu))
    r = max(_rel(asy.coeff_F(p, 0), 1), _rel(asy.coeff_F(p, 1), f1), _rel(asy.coeff_F(p, 2), f2))
    ok = r <= mpf(10) ** (5 - mp.dps)
    return Check(f"F_0, F_1, F_2 closed forms {_ptext(p)}", ok, f"max rel {mpmath.nstr(r, 3)}")


def check_F_mu1_partial_sums(p: Params, k_max: int = 10) -> Check:
    """At mu = 1, F_k is the degree-k partial sum of 0F1(; 1+nu; chi).

    It is continuous in mu there and tends to script I as k grows, but it
    is not independent of k.
    """
    q = p.replace(mu=1, gamma=0)
    nu, chi = pr.real(q.nu), q.chi
    near = q.replace(mu=1 + Fraction(1, 10 ** 20))
    partial, worst, jump = mpf(0), mpf(0), mpf(0)
    for k in range(k_max + 1):
        partial += chi ** k / (mpmath.rf(1 + nu, k) * mpmath.factorial(k))
        worst = max(worst, _rel(asy.coeff_F(q, k), partial))
        jump = max(jump, _rel(asy.coeff_F(near, k), partial))
    gap = _rel(asy.coeff_F(q, 40), asy.script_I(q))
    tol = mpf(10) ** (5 - mp.dps)
    ok = worst <= tol and gap <= tol and jump <= mpf("1e-15")
    return Check(f"mu=1: F_k = partial sums of script I, k<={k_max}", ok,
                 f"max rel {mpmath.nstr(worst, 3)}; mu=1+1e-20 gap {mpmath.nstr(jump, 3)}; "
                 f"|F_40/I - 1| {mpmath.nstr(gap, 3)}")


def G1_ratio(p: Params, m: int, s) -> mpf:
    """G_1(s) / (2^(1-mu) Gamma(s+mu))."""
    s = pr.real(s)
    mu = pr.real(p.mu)
    lg = (mpmath.loggamma(1 + s) + mpmath.loggamma(mu - m + s / 2) - mpmath.loggamma(1 - m + s / 2)
          - (1 - mu) * mpmath.log(2) - mpmath.loggamma(s + mu))
    return mpmath.exp(lg)


def fit_inverse_factorial(f: Callable, mu: mpf, svals) -> tuple:
    """Least-squares (c1, c2) in f(s) - 1 = c1/(s+mu-1) + c2/((s+mu-1)(s+mu-2))."""
    rows, rhs = [], []
    for s in svals:
        s = pr.real(s)
        u = 1 / (s + mu - 1)
        rows.append([u, u / (s + mu - 2)])
        rhs.append(f(s) - 1)
    A = mpmath.matrix(rows)
    y = mpmath.matrix(rhs)
    sol = mpmath.lu_solve(A.T * A, A.T * y)
    return sol[0], sol[1]


def check_C_fit(p: Params) -> Check:
    m = asy.exp_small_m(p)
    mu = pr.real(p.mu)
    c1, c2 = fit_inverse_factorial(lambda s: G1_ratio(p, m, s), mu, (50, 100, 200))
    C1, C2 = asy.coeff_C(p, m, 1), asy.coeff_C(p, m, 2)
    r1 = abs(c1 - C1) / max(abs(C1), 1)
    r2 = abs(c2 - C2) / max(abs(C2), 1)
    ok = r1 <= mpf("0.01") and r2 <= mpf("0.25")
    return Check(f"C_1, C_2 vs fit of G_1 (m={m}, mu={p.mu})", ok,
                 f"C1 {mpmath.nstr(C1, 8)} fit {mpmath.nstr(c1, 8)}; "
                 f"C2 {mpmath.nstr(C2, 8)} fit {mpmath.nstr(c2, 8)}")


def a_n(p: Params, m: int, n: int, s) -> mpf:
    """(m - s/2)_n / (1 - mu + m - s/2)_n."""
    s = pr.real(s)
    mu = pr.real(p.mu)
    return pr.poch(m - s / 2, n) / pr.poch(1 - mu + m - s / 2, n)


def A12(p: Params, m: int, n: int) -> tuple:
    mu = pr.real(p.mu)
    return 2 * (1 - mu) * n, 2 * (1 - mu) * ((2 * m + 1 - mu) * n + (2 - mu) * n * (n - 1))


def check_a_n_expansion(p: Params, n: int = 3) -> Check:
    m = asy.exp_small_m(p)
    mu = pr.real(p.mu)
    A1, A2 = A12(p, m, n)

    def resid(s):
        s = mpf(s)
        return abs(a_n(p, m, n, s) - 1 - A1 / (s + mu - 1) - A2 / ((s + mu - 1) * (s + mu - 2)))

    ratio = resid(100) / resid(200)
    ok = abs(ratio - 8) <= mpf("1.6")
    return Check(f"a_n(s) two-term expansion, n={n}", ok,
                 f"residual ratio s=100/s=200: {mpmath.nstr(ratio, 5)} (expect ~8)")


def F_exact(p: Params, m: int, s) -> mpf:
    """1F2(m - s/2; 1 - mu + m - s/2, 1 + nu; chi) summed term by term."""
    s = pr.real(s)
    nu, chi = pr.real(p.nu), p.chi
    eps = mpf(10) ** (-(mp.dps + 5))
    total, n, c = mpf(0), 0, mpf(1)
    while True:
        t = a_n(p, m, n, s) * c
        total += t
        if n > 4 and abs(t) < eps * abs(total):
            return total
        n += 1
        c = c * chi / ((nu + n) * n)


def check_inverse_factorial_error(p: Params) -> Check:
    m = asy.exp_small_m(p)
    e100 = abs(F_exact(p, m, 100) - asy.inverse_factorial_F(p, m, 100, 2))
    e200 = abs(F_exact(p, m, 200) - asy.inverse_factorial_F(p, m, 200, 2))
    ratio = e100 / e200
    ok = abs(ratio - 8) <= mpf("1.6")
    return Check("inverse factorial F, J=2 error scaling", ok,
                 f"error ratio s=100/s=200: {mpmath.nstr(ratio, 5)} (expect ~8)")


def check_Cprime_resummation(p: Params) -> Check:
    nu, chi, b = pr.real(p.nu), p.chi, pr.real(p.b)
    total = mpmath.nsum(lambda k: k * chi ** k / (mpmath.rf(1 + nu, k) * mpmath.factorial(k)),
                        [1, mpmath.inf])
    closed = pr.gamma(1 + nu) * (b / 2) ** (1 - nu) * pr.bessel_i(nu + 1, b)
    r = _rel(total, closed)
    return Check("sum n chi^n/((1+nu)_n n!) = Gamma(1+nu)(b/2)^(1-nu) I_(nu+1)(b)",
                 r <= mpf(10) ** (5 - mp.dps), f"rel {mpmath.nstr(r, 3)}")


def check_Q_regular(p: Params, ks=(-2, -1, 0, 1, 2)) -> Check:
    bound = mpf(10) ** (10 - mp.dps)
    worst = mpf(0)
    for k in ks:
        q = abs(mellin.Q(p, removable_s(p, k)))
        worst = max(worst, q)
    return Check(f"Q = 0 at mu-lambda in {list(ks)} {_ptext(p)}", worst <= bound,
                 f"max |Q| {mpmath.nstr(worst, 3)} <= {mpmath.nstr(bound, 3)}")


def richardson_limit(f: Callable, x0, h1="1e-3", h2="1e-4") -> mpf:
    """Degree-2 Richardson extrapolation of the symmetric average of f around x0."""
    h1, h2 = pr.real(h1), pr.real(h2)
    A1 = (f(x0 + h1) + f(x0 - h1)) / 2
    A2 = (f(x0 + h2) + f(x0 - h2)) / 2
    return (h1 ** 2 * A2 - h2 ** 2 * A1) / (h1 ** 2 - h2 ** 2)


def check_H_continuity(p: Params, ks=(-2, -1, 0, 1, 2), rtol="1e-6") -> Check:
    rtol = pr.real(rtol)
    worst = mpf(0)
    for k in ks:
        s0 = removable_s(p, k)
        direct = mellin.H(p, s0)
        lim = richardson_limit(lambda s: mellin.H(p, s), pr.real(s0))
        worst = max(worst, _rel(direct, lim))
    return Check(f"H continuous at removable points {_ptext(p)}", worst <= rtol,
                 f"max rel gap {mpmath.nstr(worst, 3)} <= {mpmath.nstr(rtol, 3)}")


# --------------------------------------------------------------------------
# exponentially small regime


def script_S(p: Params, rel_tol="1e-10") -> mpf:
    """Oracle value of S - offset in the exponentially small regime."""
    rep = asy.theorem3_expsmall(p, 2)
    tol = abs(rep.terms[0]) * pr.real(rel_tol)
    return direct_sum(p, SeriesKind.J, tol).value - rep.base


RATE_PARAMS = dict(b=1, gamma=Fraction(26, 5), nu=Fraction(-26, 5), mu=Fraction(26, 5))
FIT_PARAMS = dict(b=1, gamma=0, nu=0, mu=4)


def check_exponential_rate(a_values=(6, 7, 8), rtol="0.02") -> List[Check]:
    out = []
    vals = {a: script_S(Params(a, **RATE_PARAMS)) for a in (*a_values, max(a_values) + 1)}
    for a in a_values:
        r = mpmath.log(abs(vals[a])) - mpmath.log(abs(vals[a + 1]))
        dev = abs(r / (2 * mp.pi) - 1)
        out.append(Check(f"log|S(a)|-log|S(a+1)| = 2 pi, a={a}", dev <= pr.real(rtol),
                         f"{mpmath.nstr(r, 8)} (relative deviation {mpmath.nstr(dev, 3)})"))
    return out


def fit_D(a_values=(6, 8, 10), params=None) -> tuple:
    params = params or FIT_PARAMS
    rows = []
    for a in a_values:
        p = Params(a, **params)
        rows.append((a, script_S(p) / asy._exp_small_scale(p)))
    # f(x) - 1 = d1/x + d2/x^2 with x = 2 pi a
    A = mpmath.matrix([[1 / (2 * mp.pi * a), 1 / (2 * mp.pi * a) ** 2] for a, _ in rows])
    y = mpmath.matrix([v - 1 for _, v in rows])
    sol = mpmath.lu_solve(A.T * A, A.T * y)
    return sol[0], sol[1]


def check_D_fit(a_values=(6, 8, 10)) -> Check:
    d1, d2 = fit_D(a_values)
    p = Params(a_values[0], **FIT_PARAMS)
    D1, D2 = asy.coeff_D(p, 0, 1), asy.coeff_D(p, 0, 2)
    r1, r2 = abs(d1 / D1 - 1), abs(d2 / D2 - 1)
    ok = r1 <= mpf("0.05") and r2 <= mpf("0.25")
    return Check("D_1, D_2 vs fit of the oracle remainder", ok,
                 f"D1 {mpmath.nstr(D1, 8)} fit {mpmath.nstr(d1, 8)} ({mpmath.nstr(r1, 2)}); "
                 f"D2 {mpmath.nstr(D2, 8)} fit {mpmath.nstr(d2, 8)} ({mpmath.nstr(r2, 2)})")


# --------------------------------------------------------------------------
# suites


def _ptext(p: Params) -> str:
    f = lambda x: str(x)  # noqa: E731
    return f"(a={f(p.a)}, b={f(p.b)}, gamma={f(p.gamma)}, nu={f(p.nu)}, mu={f(p.mu)})"


def suite_identities(seed: int = 0, n: int = 10) -> Iterator[Check]:
    rng = random.Random(seed)
    for _ in range(n):
        yield check_alternating_identity(random_oracle_params(rng))
    for _ in range(n):
        yield check_y_identity(random_y_params(rng))
    for nu in (Fraction(1, 2), Fraction(-1, 2)):
        yield check_half_order_reduction(Params(2, 1, Fraction(1, 3), nu, 3))
    with mp.workdps(50):
        for _ in range(n):
            yield check_functional_equation_terms(random_generic_params(rng))


def suite_residues(seed: int = 0, n: int = 5) -> Iterator[Check]:
    rng = random.Random(seed)
    for _ in range(n):
        yield check_residue(random_double_pole_params(rng))
    yield check_residue(random_double_pole_params(rng, mu=Fraction(1)))


def suite_coeffs(seed: int = 0, n: int = 5) -> Iterator[Check]:
    rng = random.Random(seed)
    for _ in range(3):
        yield check_F_closed_forms(random_generic_params(rng))
    yield check_F_mu1_partial_sums(random_generic_params(rng))
    for m, mu in ((0, Fraction(5, 2)), (1, Fraction(7, 3)), (0, Fraction(4))):
        p = Params(8, 1, 2 * m, 0, mu)
        yield check_C_fit(p)
        yield check_a_n_expansion(p)
        yield check_inverse_factorial_error(p)
        yield check_Cprime_resummation(p)
    for _ in range(n):
        p = random_removable_params(rng)
        yield check_Q_regular(p)
        yield check_H_continuity(p)
    with mp.workdps(max(mp.dps, 60)):
        yield from check_exponential_rate()
        yield check_D_fit()


SUITES = {
    "identities": suite_identities,
    "residues": suite_residues,
    "coeffs": suite_coeffs,
}


def run_suite(name: str, seed: int = 0) -> Iterator[Check]:
    names = list(SUITES) if name == "all" else [name]
    for nm in names:
        if nm not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        yield from SUITES[nm](seed)
