from fractions import Fraction
from math import factorial

import pytest

from explogint.exact_core import ClosedForm, ExactValue, LaurentPoly
from explogint.integral_families import (
    ENTRY_IDS,
    EntryError,
    FixedP,
    FixedQ,
    HarmonicAndExp,
    gr_entry,
    integral_p,
    integral_q,
    pq_fixed,
    specialize_at_one,
)
from explogint.quadrature import IntegrandSpec, integrate
from explogint.special_numerics import context, eval_closedform, eval_exact

A = LaurentPoly.monomial(1)
INV_A = LaurentPoly.monomial(-1)
E_MINUS_A = ClosedForm(r1=1)
TOL = context(40).mpf(10) ** -35
A_VALUES = [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(10)]


def test_harmonic_and_exp():
    h = [HarmonicAndExp.of(n) for n in range(6)]
    assert h[0].H_n == 0 and h[0].exp_at(0) == 1
    for prev, cur in zip(h, h[1:]):
        assert cur.H_n - prev.H_n == Fraction(1, cur.n)
        assert cur.exp_n - prev.exp_n == LaurentPoly({cur.n: Fraction(1, factorial(cur.n))})


def test_p0_and_p1():
    assert integral_p(0) == ClosedForm(r0=INV_A, r1=-INV_A)
    assert integral_p(1) == ClosedForm(r0=LaurentPoly({-2: 1}), r1=LaurentPoly({-2: -1, -1: -1}))


def test_p2_at_one():
    # 2 - 5/e
    assert integral_p(2).at(1) == ExactValue.exp_poly({0: 2, -1: -5})
    assert abs(eval_closedform(integral_p(2), 1, 40) - integrate(IntegrandSpec(2, 1, 0), 40)) < TOL
    assert abs(float(eval_closedform(integral_p(2), 1, 40)) - 0.16060) < 1e-5


def test_q0_and_q1():
    assert integral_q(0) == ClosedForm(r2=-INV_A)
    assert integral_q(1) == ClosedForm(r0=LaurentPoly({-2: 1}), r1=LaurentPoly({-2: -1}), r2=LaurentPoly({-2: -1}))


def test_q0_value_is_negative():
    v = eval_closedform(integral_q(0), 1, 40)
    assert v < 0
    assert abs(v - integrate(IntegrandSpec(0, 1, 1), 40)) < TOL
    assert abs(float(v) + 0.7965996) < 1e-7


def test_unknown_path():
    with pytest.raises(ValueError):
        integral_q(2, "magic")
    with pytest.raises(ValueError):
        integral_p(-1)


@pytest.mark.parametrize("n", range(51))
def test_p_paths_agree(n):
    assert integral_p(n) == integral_p(n, "recurrence")


@pytest.mark.parametrize("n", range(31))
def test_q_paths_agree(n):
    q = integral_q(n)
    assert q == integral_q(n, "recurrence") == integral_q(n, "derivative")
    assert q.r2 == LaurentPoly({-(n + 1): -factorial(n)})


@pytest.mark.parametrize("n", range(31))
def test_recurrence_identities(n):
    assert A * integral_p(n + 1) == (n + 1) * integral_p(n) - E_MINUS_A
    assert A * integral_q(n + 1) == (n + 1) * integral_q(n) + integral_p(n)


@pytest.mark.parametrize("n", range(31))
def test_4_353_3_is_minus_p(n):
    i_n = -(A * integral_q(n + 1)) + (n + 1) * integral_q(n)
    assert (i_n + integral_p(n)).is_zero()


@pytest.mark.parametrize("a", A_VALUES)
@pytest.mark.parametrize("n", [0, 1, 2, 5, 10, 20])
def test_bounds(n, a):
    p = eval_closedform(integral_p(n), a, 40)
    q = eval_closedform(integral_q(n), a, 40)
    assert 0 < p < context(40).mpf(1) / (n + 1)
    assert -context(40).mpf(1) / (n + 1) ** 2 < q < 0


def test_pq_fixed_examples():
    p0, q0 = pq_fixed(0)
    assert p0 == FixedP(1, -1) and q0 == FixedQ(0, 0, 1)
    p1, q1 = pq_fixed(1)
    assert p1 == FixedP(1, -2) and q1 == FixedQ(1, -1, 1)
    assert pq_fixed(3)[0] == FixedP(6, -16)


@pytest.mark.parametrize("n", range(31))
def test_pq_fixed_is_specialization(n):
    p, q = pq_fixed(n)
    assert p.to_exact() == integral_p(n).at(1)
    assert q == specialize_at_one(integral_q(n))
    assert q.to_exact() == integral_q(n).at(1)


def test_gr_4_351_1():
    ev = gr_entry("4.351.1")
    assert ev.value == ExactValue.exp_poly({-1: 1, 0: -1})
    assert all(ev.checks().values())


def test_gr_4_362_1():
    ev = gr_entry("4.362.1")
    assert ev.value == ExactValue.exp_poly({0: 1, 1: -1})
    assert all(ev.checks().values())


@pytest.mark.parametrize("a", [None, Fraction(1, 3), Fraction(7)])
def test_gr_4_351_2(a):
    ev = gr_entry("4.351.2", {"a": a})
    expected = ClosedForm(r0=LaurentPoly({-2: -1}), r1=LaurentPoly({-2: 1, -1: 1}))
    assert ev.closed_form == expected
    assert all(ev.checks().values())
    assert (ev.value is None) == (a is None)


def test_gr_4_353_3_at_n2_a1():
    ev = gr_entry("4.353.3", {"n": 2, "a": 1})
    assert ev.value == -integral_p(2).at(1)
    assert ev.value == ExactValue.exp_poly({0: -2, -1: 5})
    oracle = -integrate(IntegrandSpec(3, 1, 1), 45) + 3 * integrate(IntegrandSpec(2, 1, 1), 45)
    assert abs(eval_exact(ev.value, 40) - oracle) < TOL


@pytest.mark.parametrize("n", range(12))
def test_gr_4_353_3_tabulated_form(n):
    assert all(gr_entry("4.353.3", {"n": n}).checks().values())


def test_gr_3_351_1_entry():
    ev = gr_entry("3.351.1", {"n": 1, "a": -1, "u": 1})
    assert ev.value == pq_fixed(1)[0].to_exact()
    assert all(ev.checks().values())


def test_gr_entry_errors():
    with pytest.raises(EntryError):
        gr_entry("9.999.9")
    with pytest.raises(EntryError):
        gr_entry("4.353.3", {"a": 1})
    with pytest.raises(EntryError):
        gr_entry("3.351.1", {"n": 1})


def test_entry_ids():
    assert ENTRY_IDS == ("3.351.1", "4.351.1", "4.351.2", "4.353.3", "4.362.1")



# each case: the entry's exact value against a weighted sum of oracle integrals
ORACLE_CASES = {
    "4.351.1": ({}, [(1, IntegrandSpec(0, 1, 1)), (-1, IntegrandSpec(1, 1, 1))]),
    "4.362.1": ({}, [(1, IntegrandSpec(1, -1, 1, log_of_complement=True))]),
    "4.351.2": ({"a": 3}, [(-3, IntegrandSpec(2, 3, 1)), (2, IntegrandSpec(1, 3, 1))]),
    "4.353.3": ({"n": 4, "a": Fraction(1, 2)},
                [(Fraction(-1, 2), IntegrandSpec(5, Fraction(1, 2), 1)), (5, IntegrandSpec(4, Fraction(1, 2), 1))]),
    "3.351.1": ({"n": 3, "a": 2, "u": 1}, [(1, IntegrandSpec(3, -2, 0))]),
}


@pytest.mark.parametrize("entry_id", sorted(ORACLE_CASES))
def test_entry_values_match_quadrature(entry_id):
    params, terms = ORACLE_CASES[entry_id]
    ctx = context(50)
    oracle = sum((ctx.mpf(Fraction(w).numerator) / Fraction(w).denominator * integrate(spec, 45)
                  for w, spec in terms), ctx.mpf(0))
    assert abs(eval_exact(gr_entry(entry_id, params).value, 40) - oracle) < TOL
