"""Closed forms for P_n(a) = int_0^1 x^n e^{-ax} dx and Q_n(a) = int_0^1 x^n e^{-ax} ln x dx.

Every family is available through more than one construction path so the paths
can be checked against each other exactly:

* ``integral_p``: explicit formula, or the recurrence in ``n`` from ``P_0``.
* ``integral_q``: explicit formula, the recurrence in ``n`` from ``Q_0``, or
  repeated ``-d/da`` applied to ``Q_0``.

The table entries built on top of them live in ``gr_entry``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping

from .exact_core import ClosedForm, ExactValue, LaurentPoly
from .recurrences import gr_3_351_1, sequence_state

INV_A = LaurentPoly.monomial(-1)
EXP_MINUS_A = ClosedForm(r1=1)


@lru_cache(maxsize=None)
def harmonic(n: int) -> Fraction:
    if n < 0:
        raise ValueError("n must be non-negative")
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


@lru_cache(maxsize=None)
def exp_partial(n: int) -> LaurentPoly:
    """Degree-n Taylor polynomial of exp, as a polynomial in a. Empty for n < 0."""
    return LaurentPoly.from_coeffs(Fraction(1, factorial(k)) for k in range(n + 1))


@dataclass(frozen=True)
class HarmonicAndExp:
    n: int
    H_n: Fraction
    exp_n: LaurentPoly

    @classmethod
    def of(cls, n: int) -> HarmonicAndExp:
        return cls(n, harmonic(n), exp_partial(n))

    def exp_at(self, x) -> Fraction:
        return self.exp_n(x)


def _prefactor(n: int) -> LaurentPoly:
    return LaurentPoly.monomial(-(n + 1), factorial(n))


P0 = ClosedForm(r0=INV_A, r1=-INV_A)
Q0 = ClosedForm(r2=-INV_A)


def _p_formula(n: int) -> ClosedForm:
    pre = _prefactor(n)
    return ClosedForm(r0=pre, r1=-(pre * exp_partial(n)))


def _q_formula(n: int) -> ClosedForm:
    pre = _prefactor(n)
    tail = LaurentPoly()
    for k in range(1, n + 1):
        tail = tail + Fraction(1, k) * exp_partial(k - 1)
    return ClosedForm(r0=pre * harmonic(n), r1=-(pre * tail), r2=-pre)


@lru_cache(maxsize=None)
def _p_recurrence(n: int) -> ClosedForm:
    if n == 0:
        return P0
    # P_{n+1} = ((n+1) P_n - e^{-a}) / a
    return (n * _p_recurrence(n - 1) - EXP_MINUS_A) * INV_A


@lru_cache(maxsize=None)
def _q_recurrence(n: int) -> ClosedForm:
    if n == 0:
        return Q0
    # Q_{n+1} = ((n+1) Q_n + P_n) / a
    return (n * _q_recurrence(n - 1) + _p_recurrence(n - 1)) * INV_A


@lru_cache(maxsize=None)
def _q_derivative(n: int) -> ClosedForm:
    if n == 0:
        return Q0
    return -_q_derivative(n - 1).diff()


def clear_caches() -> None:
    for fn in (harmonic, exp_partial, _p_recurrence, _q_recurrence, _q_derivative):
        fn.cache_clear()


_P_PATHS = {"formula": _p_formula, "recurrence": _p_recurrence}
_Q_PATHS = {"formula": _q_formula, "recurrence": _q_recurrence, "derivative": _q_derivative}


def integral_p(n: int, method: str = "formula") -> ClosedForm:
    """``P_n(a) = n!/a^{n+1} * (1 - e^{-a} Exp_n(a))``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    try:
        return _P_PATHS[method](n)
    except KeyError:
        raise ValueError(f"unknown construction path {method!r}") from None


def integral_q(n: int, method: str = "formula") -> ClosedForm:
    """``Q_n(a) = n!/a^{n+1} * (H_n - G(a) - e^{-a} sum_{k=1}^n Exp_{k-1}(a)/k)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    try:
        return _Q_PATHS[method](n)
    except KeyError:
        raise ValueError(f"unknown construction path {method!r}") from None


@dataclass(frozen=True)
class FixedP:
    """``p_n = one + inv_e / e``."""

    one: Fraction
    inv_e: Fraction

    def to_exact(self) -> ExactValue:
        return ExactValue({(0, None): self.one, (-1, None): self.inv_e})


@dataclass(frozen=True)
class FixedQ:
    """``q_n = one + inv_e / e + q0 * q_0`` with ``q_0 = -G(1)``."""

    one: Fraction
    inv_e: Fraction
    q0: Fraction

    def to_exact(self) -> ExactValue:
        return ExactValue({(0, None): self.one, (-1, None): self.inv_e, (0, 1): -self.q0})


def pq_fixed(n: int) -> tuple[FixedP, FixedQ]:
    """``p_n`` and ``q_n`` (the a = 1 integrals) from the integer sequences."""
    st = sequence_state(n)
    return FixedP(st.a_n, st.b_n), FixedQ(st.c_n, st.d_n, st.f_n)


def specialize_at_one(cf: ClosedForm) -> FixedQ:
    """Coefficient vector of ``cf(1)`` over ``1, e^{-1}, q_0``."""
    return FixedQ(cf.r0(1), cf.r1(1), -cf.r2(1))


# -- table entries -----------------------------------------------------------

class EntryError(ValueError):
    pass


@dataclass(frozen=True)
class EntryEvaluation:
    """An entry reduced to the families, plus whatever right-hand sides are known.

    ``closed_form`` is the reduction as a function of ``a`` (None when the entry
    is not of that shape). ``value`` is the exact value at the given parameters,
    None when a needed parameter is left symbolic. ``rhs`` maps a label to an
    independent expression that must agree with the reduction exactly.
    """

    id: str
    params: Mapping[str, Fraction]
    closed_form: ClosedForm | None
    value: ExactValue | None
    rhs: Mapping[str, ClosedForm | ExactValue] = field(default_factory=dict)

    def checks(self) -> dict[str, bool]:
        out = {}
        for label, expr in self.rhs.items():
            if isinstance(expr, ClosedForm):
                out[label] = self.closed_form == expr
            else:
                out[label] = self.value == expr
        return out


def _need(params: Mapping, name: str, entry_id: str) -> Fraction:
    if name not in params or params[name] is None:
        raise EntryError(f"entry {entry_id} requires parameter {name!r}")
    return Fraction(params[name])


def _need_index(params: Mapping, entry_id: str) -> int:
    n = _need(params, "n", entry_id)
    if n.denominator != 1 or n < 0:
        raise EntryError(f"entry {entry_id}: n must be a non-negative integer, got {n}")
    return int(n)


def _iden1_rhs(n: int) -> ClosedForm:
    # the tabulated right-hand side with a -> -a:
    # e^{-a} sum_k n!/((n-k)! a^{k+1}) - n!/a^{n+1}
    r1 = LaurentPoly({-(k + 1): Fraction(factorial(n), factorial(n - k)) for k in range(n + 1)})
    return ClosedForm(r0=-_prefactor(n), r1=r1)


def _entry_4_351_1(params):
    q0, q1 = integral_q(0), integral_q(1)
    cf = q0 - q1
    fq0, fq1 = pq_fixed(0)[1], pq_fixed(1)[1]
    via_sequences = fq0.to_exact() - fq1.to_exact()
    rhs = {
        "tabulated (1-e)/e": ExactValue.exp_poly({0: -1, -1: 1}),
        "-p_0": -pq_fixed(0)[0].to_exact(),
        "q_0 - q_1 from sequences": via_sequences,
    }
    return cf, cf.at(1), rhs


def _entry_4_362_1(params):
    cf = integral_q(0) - integral_q(1)
    # x -> 1 - x turns x e^x ln(1-x) into e * (1-t) e^{-t} ln t
    value = cf.at(1).times_exp(1)
    rhs = {"tabulated 1-e": ExactValue.exp_poly({0: 1, 1: -1})}
    return None, value, rhs


def _entry_4_351_2(params):
    a = LaurentPoly.monomial(1)
    cf = -(a * integral_q(2)) + 2 * integral_q(1)
    tab = ClosedForm(r0=LaurentPoly({-2: -1}), r1=LaurentPoly({-2: 1, -1: 1}))
    value = cf.at(params["a"]) if params.get("a") is not None else None
    return cf, value, {"tabulated a^-2(-1+(1+a)e^-a)": tab}


def _entry_4_353_3(params):
    n = _need_index(params, "4.353.3")
    a = LaurentPoly.monomial(1)
    cf = -(a * integral_q(n + 1)) + (n + 1) * integral_q(n)
    rhs = {"-P_n": -integral_p(n), "tabulated": _iden1_rhs(n)}
    value = cf.at(params["a"]) if params.get("a") is not None else None
    return cf, value, rhs


def _entry_3_351_1(params):
    n = _need_index(params, "3.351.1")
    a = _need(params, "a", "3.351.1")
    u = Fraction(params.get("u", 1))
    pair = gr_3_351_1(n, a, u)
    value = ExactValue({(0, None): pair.rational, (pair.exponent, None): pair.exp_coeff})
    rhs = {}
    if a != 0 and u != 0:
        # int_0^u x^n e^{ax} dx = u^{n+1} P_n(-a u)
        rhs["u^(n+1) P_n(-au)"] = integral_p(n).at(-a * u) * u ** (n + 1)
    return None, value, rhs


_ENTRIES = {
    "3.351.1": _entry_3_351_1,
    "4.351.1": _entry_4_351_1,
    "4.351.2": _entry_4_351_2,
    "4.353.3": _entry_4_353_3,
    "4.362.1": _entry_4_362_1,
}

ENTRY_IDS = tuple(sorted(_ENTRIES))


def gr_entry(entry_id: str, params: Mapping | None = None) -> EntryEvaluation:
    """Evaluate one of the built-in table entries exactly."""
    try:
        builder = _ENTRIES[entry_id]
    except KeyError:
        raise EntryError(f"unknown entry id {entry_id!r}") from None
    params = {k: (None if v is None else Fraction(v)) for k, v in (params or {}).items()}
    cf, value, rhs = builder(params)
    return EntryEvaluation(entry_id, params, cf, value, rhs)
