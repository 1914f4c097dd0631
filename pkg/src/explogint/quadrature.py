"""Double-exponential quadrature used as an independent numerical witness.

Only mpmath elementary functions are used here; nothing is imported from the
exact layer or from ``special_numerics`` apart from the precision contexts, so
agreement with the closed forms is meaningful.

Finite intervals use tanh-sinh, ``x = u / (1 + exp(-pi sinh t))``. The nodes
are kept together with their distance to the upper endpoint so neither end of
the interval loses digits to cancellation. Semi-infinite intervals use
exp-sinh, ``x = lower + exp(pi/2 sinh t)``. Both halve the step each level and
stop once two successive levels agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .special_numerics import MIN_PRECISION, context, round_to, to_mpf

QUAD_GUARD_DIGITS = 15
MAX_LEVELS = 12
MIN_LEVELS = 3


class ConvergenceError(ArithmeticError):
    def __init__(self, message: str, best, gap):
        super().__init__(f"{message}: best estimate {best}, level gap {gap}")
        self.best = best
        self.gap = gap


@dataclass(frozen=True)
class IntegrandSpec:
    """``x^n e^{-a x} (ln x)^log_power`` on ``[0, upper]``.

    With ``log_of_complement`` the logarithm is ``ln(upper - x)`` instead, which
    is what the unsubstituted form of 4.362.1 needs.
    """

    n: int
    a: Fraction = Fraction(0)
    log_power: int = 0
    upper: Fraction = Fraction(1)
    log_of_complement: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("power n must be non-negative")
        if self.log_power not in (0, 1):
            raise ValueError("log_power must be 0 or 1")
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "upper", Fraction(self.upper))
        if not 0 < self.upper <= 1:
            raise ValueError("upper limit must lie in (0, 1]")


def _t_range(work: int) -> float:
    # beyond this |t| the nodes sit within 10^-(work+10) of the endpoints
    return math.asinh((work + 10) * math.log(10) / math.pi)


@lru_cache(maxsize=256)
def _tanh_sinh_nodes(work: int, level: int) -> tuple:
    """Nodes new at ``level`` as (x, 1 - x, weight) on [0, 1]; level 0 has all integer t."""
    ctx = context(work)
    h = ctx.mpf(2) ** (-level)
    t_max = _t_range(work)
    count = int(math.ceil(t_max * 2 ** level))
    nodes = []
    for j in range(-count, count + 1):
        if level and j % 2 == 0:
            continue
        t = j * h
        sh = ctx.sinh(t)
        big = ctx.exp(-ctx.pi * sh)
        denom = 1 + big
        x = 1 / denom
        xc = big / denom
        w = ctx.pi * ctx.cosh(t) * big / denom ** 2
        nodes.append((x, xc, w))
    return tuple(nodes)


def tanh_sinh(f: Callable, upper, precision: int, max_levels: int = MAX_LEVELS):
    """Integrate ``f(x, upper - x)`` over ``[0, upper]``."""
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION}")
    work = precision + QUAD_GUARD_DIGITS
    ctx = context(work)
    u = to_mpf(ctx, Fraction(upper))
    tol = ctx.mpf(10) ** (-precision)
    total = None
    prev = None
    gap = None
    for level in range(max_levels + 1):
        h = ctx.mpf(2) ** (-level)
        s = ctx.fsum(w * f(u * x, u * xc) for x, xc, w in _tanh_sinh_nodes(work, level))
        total = h * s * u if level == 0 else total / 2 + h * s * u
        if prev is not None:
            gap = abs(total - prev)
            if level >= MIN_LEVELS and gap <= tol:
                return round_to(total, precision)
        prev = total
    raise ConvergenceError("tanh-sinh did not converge", total, gap)


@lru_cache(maxsize=256)
def _exp_sinh_nodes(work: int, level: int) -> tuple:
    """Nodes new at ``level`` as (offset, weight) with offset = exp(pi/2 sinh t)."""
    ctx = context(work)
    h = ctx.mpf(2) ** (-level)
    t_lo = -math.asinh(2 * (work + 10) * math.log(10) / math.pi)
    t_hi = math.asinh(2 / math.pi * math.log(4 * (work + 10) * math.log(10)))
    lo = int(math.floor(t_lo * 2 ** level))
    hi = int(math.ceil(t_hi * 2 ** level))
    nodes = []
    for j in range(lo, hi + 1):
        if level and j % 2 == 0:
            continue
        t = j * h
        off = ctx.exp(ctx.pi / 2 * ctx.sinh(t))
        nodes.append((off, ctx.pi / 2 * ctx.cosh(t) * off))
    return tuple(nodes)


def exp_sinh(f: Callable, lower, precision: int, max_levels: int = MAX_LEVELS):
    """Integrate ``f(x)`` over ``[lower, inf)`` for integrands decaying like ``e^{-x}``."""
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION}")
    work = precision + QUAD_GUARD_DIGITS
    ctx = context(work)
    lo = to_mpf(ctx, Fraction(lower))
    tol = ctx.mpf(10) ** (-precision)
    total = None
    prev = None
    gap = None
    for level in range(max_levels + 1):
        h = ctx.mpf(2) ** (-level)
        s = ctx.fsum(w * f(lo + off) for off, w in _exp_sinh_nodes(work, level))
        total = h * s if level == 0 else total / 2 + h * s
        if prev is not None:
            gap = abs(total - prev)
            if level >= MIN_LEVELS and gap <= tol:
                return round_to(total, precision)
        prev = total
    raise ConvergenceError("exp-sinh did not converge", total, gap)


def clear_caches() -> None:
    _tanh_sinh_nodes.cache_clear()
    _exp_sinh_nodes.cache_clear()


def integrand(spec: IntegrandSpec, ctx) -> Callable:
    a = to_mpf(ctx, spec.a)
    n = spec.n

    def f(x, xc):
        val = x ** n * ctx.exp(-a * x) if n else ctx.exp(-a * x)
        if spec.log_power:
            val *= ctx.log(xc if spec.log_of_complement else x)
        return val

    return f


def integrate(spec: IntegrandSpec, precision: int = 40):
    """``int_0^upper x^n e^{-a x} (ln x)^log_power dx`` by tanh-sinh."""
    ctx = context(precision + QUAD_GUARD_DIGITS)
    return tanh_sinh(integrand(spec, ctx), spec.upper, precision)


def integrate_tail_exp_over_x(a, precision: int = 40):
    """``int_a^inf e^{-x}/x dx`` by exp-sinh."""
    a = Fraction(a)
    if a <= 0:
        raise ValueError("the tail integral requires a > 0")
    ctx = context(precision + QUAD_GUARD_DIGITS)
    return exp_sinh(lambda x: ctx.exp(-x) / x, a, precision)


def euler_gamma_by_quadrature(precision: int = 40):
    """``-int_0^inf e^{-x} ln x dx``."""
    ctx = context(precision + QUAD_GUARD_DIGITS)
    return -exp_sinh(lambda x: ctx.exp(-x) * ctx.log(x), 0, precision)
