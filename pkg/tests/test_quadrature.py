from fractions import Fraction

import pytest

from explogint.integral_families import integral_p, integral_q
from explogint.quadrature import (
    ConvergenceError,
    IntegrandSpec,
    euler_gamma_by_quadrature,
    exp_sinh,
    integrate,
    integrate_tail_exp_over_x,
    tanh_sinh,
)
from explogint.special_numerics import context, eval_closedform, to_mpf

A_VALUES = [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(10)]
CTX = context(60)


def close(x, y, digits):
    return abs(to_mpf(CTX, x) - to_mpf(CTX, y)) < CTX.mpf(10) ** -digits


def test_constant():
    assert close(integrate(IntegrandSpec(0), 40), 1, 39)


def test_log():
    assert close(integrate(IntegrandSpec(0, 0, 1), 40), -1, 38)


def test_q0_by_quadrature():
    assert close(integrate(IntegrandSpec(0, 1, 1), 40), "-0.79659959929705", 14)


@pytest.mark.parametrize("n", range(11))
def test_power_times_log(n):
    assert close(integrate(IntegrandSpec(n, 0, 1), 40), Fraction(-1, (n + 1) ** 2), 37)


def test_partial_interval():
    # int_0^(1/2) x dx = 1/8
    assert close(integrate(IntegrandSpec(1, 0, 0, Fraction(1, 2)), 40), Fraction(1, 8), 39)


def test_log_of_complement():
    # int_0^1 ln(1-x) dx = -1
    assert close(integrate(IntegrandSpec(0, 0, 1, log_of_complement=True), 40), -1, 38)


@pytest.mark.parametrize("kwargs", [
    {"n": -1},
    {"n": 0, "log_power": 2},
    {"n": 0, "upper": 2},
    {"n": 0, "upper": 0},
])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        IntegrandSpec(**kwargs)


def test_tail_values():
    assert close(integrate_tail_exp_over_x(1, 40), "0.21938393439552027367716377546012164903104729", 38)
    assert close(integrate_tail_exp_over_x(10, 40), "4.156968929685324277402859810278180384e-6", 40)


def test_tail_monotone():
    values = [integrate_tail_exp_over_x(a, 30) for a in (1, 2, 4, 8)]
    assert all(x > y > 0 for x, y in zip(values, values[1:]))


def test_tail_domain():
    with pytest.raises(ValueError):
        integrate_tail_exp_over_x(0)


def test_precision_doubling_agrees():
    spec = IntegrandSpec(3, Fraction(1, 2), 1)
    assert close(integrate(spec, 30), integrate(spec, 60), 28)


def test_precision_floor():
    with pytest.raises(ValueError):
        integrate(IntegrandSpec(0), 10)


def test_non_convergence_is_reported():
    # a kink at 1/3 ruins double-exponential convergence
    ctx = context(55)
    third = ctx.mpf(1) / 3
    with pytest.raises(ConvergenceError) as info:
        tanh_sinh(lambda x, xc: abs(x - third), 1, 40, max_levels=4)
    assert info.value.gap > 0
    assert abs(info.value.best - CTX.mpf(5) / 18) < CTX.mpf(10) ** -3


def test_exp_sinh_non_convergence():
    ctx = context(55)
    with pytest.raises(ConvergenceError):
        exp_sinh(lambda x: ctx.exp(-x) * abs(ctx.sin(x)), 0, 40, max_levels=3)


@pytest.mark.parametrize("log_power", [0, 1])
@pytest.mark.parametrize("a", A_VALUES)
@pytest.mark.parametrize("n", range(21))
def test_oracle_matches_closed_form(n, a, log_power):
    p = 40
    family = integral_q if log_power else integral_p
    closed = eval_closedform(family(n), a, p)
    oracle = integrate(IntegrandSpec(n, a, log_power), p)
    assert abs(CTX.mpf(closed) - CTX.mpf(oracle)) <= CTX.mpf(10) ** (5 - p)


def test_gamma_by_quadrature():
    assert close(euler_gamma_by_quadrature(40), "0.57721566490153286060651209008240243104215933594", 38)
