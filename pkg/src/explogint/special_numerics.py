"""Arbitrary-precision numerics for the closed forms.

Precision is always an explicit argument, in decimal digits. A result requested
at ``precision`` digits is an mpmath ``mpf`` living in ``context(precision)``;
internally everything runs with ``GUARD_DIGITS`` extra digits, plus whatever is
needed to absorb the cancellation a particular evaluation is known to suffer.
The module never touches mpmath's global ``mp`` context.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from mpmath import MPContext

from .exact_core import ClosedForm, ExactValue, LaurentPoly

GUARD_DIGITS = 10
MIN_PRECISION = 20
SERIES_CF_SWITCH = 4
LOG10_E = math.log10(math.e)


class DomainError(ValueError):
    """Argument outside the domain of the function."""


class SingularityError(ZeroDivisionError):
    """Evaluation at a pole of a closed form."""


@lru_cache(maxsize=None)
def context(digits: int) -> MPContext:
    """Private mpmath context at ``digits`` decimal digits; never mutated after creation."""
    ctx = MPContext()
    ctx.dps = digits
    return ctx


def _check_precision(precision: int) -> None:
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} digits, got {precision}")


def to_mpf(ctx: MPContext, x):
    """Convert an int, Fraction, decimal string or mpf to ``ctx`` precision."""
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    return ctx.mpf(x)


def round_to(x, precision: int):
    return context(precision).mpf(x)


def _fraction_log10(x: Fraction) -> float:
    if x == 0:
        return -math.inf
    return math.log10(abs(x.numerator)) - math.log10(x.denominator)


# -- Euler's constant ----------------------------------------------------------

def _euler_gamma_at(work: int):
    # computed on a coarse precision grid so nearby requests share one cached value
    return round_to(_euler_gamma_bucket(-(-work // 32) * 32), work)


@lru_cache(maxsize=64)
def _euler_gamma_bucket(work: int):
    """Brent-McMillan: gamma = U/V - ln N with error about pi * exp(-4N)."""
    ctx = context(work)
    big_n = int(math.ceil(work * math.log(10) / 4)) + 2
    terms = int(math.ceil(3.5912 * big_n)) + 2
    nsq = ctx.mpf(big_n) ** 2
    a_k = -ctx.log(big_n)
    b_k = ctx.mpf(1)
    u, v = a_k, b_k
    for k in range(1, terms + 1):
        b_k = b_k * nsq / (k * k)
        a_k = (a_k * nsq / k + b_k) / k
        u += a_k
        v += b_k
    return u / v


def clear_caches() -> None:
    _euler_gamma_bucket.cache_clear()


def euler_gamma(precision: int = 40):
    _check_precision(precision)
    return round_to(_euler_gamma_at(precision + GUARD_DIGITS), precision)


# -- Gamma(0, a) ---------------------------------------------------------------

def gamma0_series(a, precision: int):
    """``Gamma(0,a) = -gamma - ln a + sum_{k>=0} (-1)^k a^{k+1} / ((k+1)! (k+1))``."""
    _check_precision(precision)
    probe = float(a)
    if probe <= 0:
        raise DomainError("Gamma(0, a) requires a > 0")
    # alternating terms peak near e^a; keep that many digits in reserve
    work = precision + GUARD_DIGITS + int(math.ceil(probe * LOG10_E)) + 2
    ctx = context(work)
    x = to_mpf(ctx, a)
    eps = ctx.mpf(10) ** (-work)
    total = ctx.mpf(0)
    power_over_fact = ctx.mpf(1)   # x^k / k!
    k = 0
    while True:
        power_over_fact = power_over_fact * x / (k + 1)   # x^{k+1}/(k+1)!
        term = power_over_fact / (k + 1)
        total += -term if k % 2 else term
        if k + 1 > probe and term < eps:
            break
        k += 1
    value = total - _euler_gamma_at(work) - ctx.log(x)
    return round_to(value, precision)


def gamma0_continued_fraction(a, precision: int, max_terms: int = 200000):
    """``e^{-a} / (a+1 - 1/(a+3 - 4/(a+5 - ...)))`` by the modified Lentz method."""
    _check_precision(precision)
    if float(a) <= 0:
        raise DomainError("Gamma(0, a) requires a > 0")
    work = precision + GUARD_DIGITS
    ctx = context(work)
    x = to_mpf(ctx, a)
    eps = ctx.mpf(10) ** (-work)
    tiny = ctx.mpf(10) ** (-2 * work)
    f = x + 1
    c, d = f, ctx.mpf(0)
    for j in range(1, max_terms):
        num = -(j * j)
        den = x + 2 * j + 1
        d = den + num * d
        if d == 0:
            d = tiny
        c = den + num / c
        if c == 0:
            c = tiny
        d = 1 / d
        delta = c * d
        f *= delta
        if abs(delta - 1) < eps:
            break
    else:
        raise ArithmeticError(f"continued fraction for Gamma(0, {a}) did not converge")
    return round_to(ctx.exp(-x) / f, precision)


def gamma0(a, precision: int = 40):
    """Upper incomplete gamma ``Gamma(0, a)`` (= E_1(a) = -Ei(-a)) for ``a > 0``."""
    if float(a) <= 0:
        raise DomainError("Gamma(0, a) requires a > 0")
    if float(a) <= SERIES_CF_SWITCH:
        return gamma0_series(a, precision)
    return gamma0_continued_fraction(a, precision)


def exponential_integral_ei_neg(a, precision: int = 40):
    """``Ei(-a) = -Gamma(0, a)`` for ``a > 0``."""
    return -gamma0(a, precision)


def g_function(a, precision: int = 40):
    """``G(a) = gamma + ln a + Gamma(0, a)``."""
    _check_precision(precision)
    work = precision + GUARD_DIGITS
    ctx = context(work)
    x = to_mpf(ctx, a)
    if x <= 0:
        raise DomainError("G(a) requires a > 0")
    return round_to(_euler_gamma_at(work) + ctx.log(x) + gamma0(a, work), precision)


# -- digamma at positive integers ------------------------------------------------

class DigammaValue(NamedTuple):
    """``psi(n) = rational + gamma_coeff * euler_gamma``."""

    rational: Fraction
    gamma_coeff: int

    def numeric(self, precision: int = 40):
        ctx = context(precision + GUARD_DIGITS)
        return round_to(to_mpf(ctx, self.rational)
                        + self.gamma_coeff * _euler_gamma_at(precision + GUARD_DIGITS), precision)


def digamma_posint(n: int) -> DigammaValue:
    if n <= 0:
        raise DomainError("digamma_posint requires n >= 1")
    return DigammaValue(sum((Fraction(1, k) for k in range(1, n)), Fraction(0)), -1)


# -- the term-by-term series ---------------------------------------------------

def series1_lhs(n: int, a, precision: int = 40):
    """``sum_{k>=0} (-a)^k / (k! (n+1+k)^2)``, which equals ``-Q_n(a)``."""
    _check_precision(precision)
    if n < 0:
        raise ValueError("n must be non-negative")
    probe = float(a)
    if probe <= 0:
        raise DomainError("series1_lhs requires a > 0")
    work = precision + GUARD_DIGITS + int(math.ceil(probe * LOG10_E)) + 2
    ctx = context(work)
    x = to_mpf(ctx, a)
    stop = ctx.mpf(10) ** (-(precision + 5)) / 10 ** (GUARD_DIGITS)
    total = ctx.mpf(0)
    power_over_fact = ctx.mpf(1)
    prev = None
    k = 0
    while True:
        term = power_over_fact / (n + 1 + k) ** 2
        total += -term if k % 2 else term
        # terms grow while k < a - 1, so both conditions are required
        if prev is not None and term < prev and term < stop:
            break
        prev = term
        k += 1
        power_over_fact = power_over_fact * x / k
    return round_to(total, precision)


def incomplete_gamma_via_series(n: int, a, precision: int = 40):
    """``Gamma(0, a)`` recovered from the series identity at index ``n``.

    ``Gamma(0,a) = a^{n+1}/n! * S_n(a) + psi(n+1) - ln a - e^{-a} sum_{k=1}^n Exp_{k-1}(a)/k``
    with ``S_n`` the alternating series of ``series1_lhs``.
    """
    _check_precision(precision)
    a_frac = Fraction(a) if not isinstance(a, Fraction) else a
    if a_frac <= 0:
        raise DomainError("requires a > 0")
    work = precision + GUARD_DIGITS + int(math.ceil(float(a_frac) * LOG10_E)) + 2
    ctx = context(work)
    x = to_mpf(ctx, a_frac)
    series = series1_lhs(n, a_frac, work)
    psi = digamma_posint(n + 1)
    finite = Fraction(0)
    term = Fraction(1)   # a^j / j!
    exp_partial = Fraction(0)
    for k in range(1, n + 1):
        exp_partial += term           # Exp_{k-1}(a)
        finite += exp_partial / k
        term = term * a_frac / k
    value = (x ** (n + 1) / math.factorial(n) * series
             + to_mpf(ctx, psi.rational) + psi.gamma_coeff * _euler_gamma_at(work)
             - ctx.log(x) - ctx.exp(-x) * to_mpf(ctx, finite))
    return round_to(value, precision)


# -- evaluation of exact objects ---------------------------------------------

def _magnitude_digits(values) -> int:
    """Digits above 1 in the largest coefficient; these cancel in the final sum."""
    top = max((_fraction_log10(v) for v in values if v), default=0.0)
    return max(0, int(math.ceil(top)))


def eval_closedform(x: ClosedForm, a, precision: int = 40):
    """Numeric value of ``r0(a) + r1(a) e^{-a} + r2(a) G(a)`` at a rational ``a``."""
    _check_precision(precision)
    a = Fraction(a)
    if x.r2 and a <= 0:
        raise DomainError(f"G(a) is undefined for a = {a}")
    if a == 0 and any(k < 0 for p in x.components for k in p.terms):
        raise SingularityError("closed form has a pole at a = 0")
    coeffs = [p(a) for p in x.components]
    work = precision + GUARD_DIGITS + _magnitude_digits(coeffs) + int(max(0.0, -float(a)) * LOG10_E)
    ctx = context(work)
    am = to_mpf(ctx, a)
    total = to_mpf(ctx, coeffs[0])
    if coeffs[1]:
        total += to_mpf(ctx, coeffs[1]) * ctx.exp(-am)
    if coeffs[2]:
        total += to_mpf(ctx, coeffs[2]) * (_euler_gamma_at(work) + ctx.log(am) + gamma0(a, work))
    return round_to(total, precision)


def eval_exact(value: ExactValue, precision: int = 40):
    """Numeric value of an ``ExactValue``."""
    _check_precision(precision)
    terms = value.terms
    extra = _magnitude_digits(list(terms.values()))
    extra += int(max((float(s) for s, _ in terms), default=0.0) * LOG10_E) if terms else 0
    work = precision + GUARD_DIGITS + max(0, extra)
    ctx = context(work)
    total = ctx.mpf(0)
    for (s, g), c in terms.items():
        part = to_mpf(ctx, c)
        if s:
            part *= ctx.exp(to_mpf(ctx, s))
        if g is not None:
            if g <= 0:
                raise DomainError(f"G is undefined at {g}")
            part *= _euler_gamma_at(work) + ctx.log(to_mpf(ctx, g)) + gamma0(g, work)
        total += part
    return round_to(total, precision)


def eval_laurent(p: LaurentPoly, a, precision: int = 40):
    return round_to(to_mpf(context(precision + GUARD_DIGITS), p(Fraction(a))), precision)
