from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from explogint.exact_core import LaurentPoly
from explogint.quadrature import IntegrandSpec, integrate
from explogint.recurrences import (
    PreconditionError,
    gr_3_351_1,
    iterate_first_order,
    poly_p,
    poly_q,
    sequence_state,
    solve_first_order,
    stirling1_abs,
)
from explogint.special_numerics import context

A = LaurentPoly.monomial(1)


def _cycles(perm):
    seen, count = set(), 0
    for start in range(len(perm)):
        if start in seen:
            continue
        count += 1
        j = start
        while j not in seen:
            seen.add(j)
            j = perm[j]
    return count


def brute_stirling(n, k):
    return sum(1 for p in permutations(range(n)) if _cycles(p) == k)


# -- solve_first_order -----------------------------------------------------------

def test_counting_recurrence():
    assert solve_first_order(lambda k: 1, lambda k: 1, lambda k: 1, 0, 5) == 5


def test_b_sequence_example():
    assert solve_first_order(lambda k: 1, lambda k: k, lambda k: -1, -1, 3) == -16


def test_c_sequence_example():
    assert solve_first_order(lambda k: 1, lambda k: k, lambda k: factorial(k - 1), 0, 4) == 50


def test_sequences_accepted_as_lists():
    assert solve_first_order([1, 1, 1], [1, 2, 3], [-1, -1, -1], -1, 3) == -16


def test_zero_coefficient_rejected():
    with pytest.raises(PreconditionError):
        solve_first_order(lambda k: 1, lambda k: k - 2, lambda k: 1, 0, 3)
    with pytest.raises(PreconditionError):
        solve_first_order([1, 0], [1, 1], [1, 1], 0, 2)


nonzero = st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(lambda x: x != 0)


@settings(max_examples=40, deadline=None)
@given(st.data(), st.integers(0, 100))
def test_product_form_equals_iteration(data, n):
    a = data.draw(st.lists(nonzero, min_size=n, max_size=n))
    b = data.draw(st.lists(nonzero, min_size=n, max_size=n))
    r = data.draw(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=9), min_size=n, max_size=n))
    z0 = data.draw(st.fractions(min_value=-9, max_value=9, max_denominator=9))
    assert solve_first_order(a, b, r, z0, n) == iterate_first_order(a, b, r, z0, n)


# -- sequence_state -----------------------------------------------------------------

def test_state_at_zero():
    s = sequence_state(0)
    assert (s.a_n, s.b_n, s.c_n, s.d_n, s.f_n) == (1, -1, 0, 0, 1)


def test_state_at_two():
    s = sequence_state(2)
    assert (s.a_n, s.b_n, s.c_n, s.d_n, s.f_n) == (2, -5, 3, -4, 2)


def test_c4():
    assert sequence_state(4).c_n == 50


@pytest.mark.parametrize("n", range(51))
def test_state_matches_closed_forms(n):
    s = sequence_state(n)
    nf = factorial(n)
    assert s.a_n == nf and s.f_n == nf
    assert s.b_n == -nf * sum(Fraction(1, factorial(k)) for k in range(n + 1))
    assert s.c_n == nf * sum(Fraction(1, k) for k in range(1, n + 1))
    assert s.d_n == -nf * sum(Fraction(1, k) * sum(Fraction(1, factorial(j)) for j in range(k))
                              for k in range(1, n + 1))
    assert s.b_n < 0
    for v in (s.a_n, s.b_n, s.c_n, s.d_n, s.f_n):
        assert v.denominator == 1


# -- Stirling numbers -------------------------------------------------------------

@pytest.mark.parametrize("n,k", [(n, k) for n in range(7) for k in range(n + 1)])
def test_stirling_against_permutations(n, k):
    assert stirling1_abs(n, k) == brute_stirling(n, k)


def test_stirling_examples():
    assert stirling1_abs(3, 2) == 3
    assert stirling1_abs(4, 2) == 11
    assert all(stirling1_abs(n, n) == 1 for n in range(20))
    assert stirling1_abs(3, 5) == 0


@pytest.mark.parametrize("n", range(31))
def test_c_n_is_stirling(n):
    assert sequence_state(n).c_n == stirling1_abs(n + 1, 2)


# -- polynomial families ------------------------------------------------------------

def test_poly_q_examples():
    assert poly_q(0).coeffs == (1,)
    assert poly_q(2).coeffs == (2, 2, 1)
    assert poly_q(4).coeffs[2] == 12


@pytest.mark.parametrize("n", range(31))
def test_poly_q_coefficients(n):
    q = poly_q(n)
    assert list(q.coeffs) == [Fraction(factorial(n), factorial(k)) for k in range(n + 1)]
    assert q.coeffs[n] == 1 and q.coeffs[0] == factorial(n)
    assert all(c > 0 and c.denominator == 1 for c in q.coeffs)


@pytest.mark.parametrize("n", range(30))
def test_polynomial_recurrences_symbolically(n):
    p, p_next = poly_p(n).as_laurent(), poly_p(n + 1).as_laurent()
    assert p_next == A * p.diff() + (A - (n + 1)) * p
    q, q_next = poly_q(n).as_laurent(), poly_q(n + 1).as_laurent()
    assert q_next == -A * q.diff() + (A + (n + 1)) * q


@pytest.mark.parametrize("n", range(8))
def test_poly_p_is_reflected_poly_q(n):
    q = poly_q(n).as_laurent()
    reflected = LaurentPoly({k: c * (-1) ** (n + k) for k, c in q.terms.items()})
    assert poly_p(n).as_laurent() == reflected


# -- GR 3.351.1 -------------------------------------------------------------------

def _numeric(pair, precision=40):
    ctx = context(precision + 10)
    r = ctx.mpf(pair.rational.numerator) / pair.rational.denominator
    c = ctx.mpf(pair.exp_coeff.numerator) / pair.exp_coeff.denominator
    s = ctx.mpf(pair.exponent.numerator) / pair.exponent.denominator
    return r + c * ctx.exp(s)


def test_3_351_1_exp_integral():
    pair = gr_3_351_1(0, 1, 1)
    assert (pair.rational, pair.exp_coeff, pair.exponent) == (-1, 1, 1)


def test_3_351_1_equals_p1():
    pair = gr_3_351_1(1, -1, 1)
    assert (pair.rational, pair.exp_coeff, pair.exponent) == (1, -2, -1)


def test_3_351_1_partial_interval():
    pair = gr_3_351_1(2, 2, Fraction(1, 2))
    assert (pair.rational, pair.exp_coeff) == (Fraction(-1, 4), Fraction(1, 8))
    oracle = integrate(IntegrandSpec(2, -2, 0, Fraction(1, 2)), 40)
    assert abs(_numeric(pair) - oracle) < context(40).mpf(10) ** -35


def test_3_351_1_degenerate_rate():
    pair = gr_3_351_1(3, 0, Fraction(1, 2))
    assert pair.rational == Fraction(1, 64) and pair.exp_coeff == 0


@pytest.mark.parametrize("n", range(21))
def test_p_n_from_sequences_matches_quadrature(n):
    s = sequence_state(n)
    ctx = context(80)   # a_n and b_n/e cancel in about log10(n!) digits
    value = ctx.mpf(int(s.a_n)) + ctx.mpf(int(s.b_n)) * ctx.exp(-1)
    assert abs(value - integrate(IntegrandSpec(n, 1, 0), 40)) < ctx.mpf(10) ** -35
