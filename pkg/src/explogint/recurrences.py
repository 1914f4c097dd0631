"""First-order recurrences, the integer sequences behind p_n and q_n, and the
polynomial families attached to the integral of x**n * exp(a*x)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Sequence, Union

from .exact_core import LaurentPoly

SeqLike = Union[Callable[[int], object], Sequence]


class PreconditionError(ValueError):
    """Raised when a recurrence coefficient that must be nonzero vanishes."""


def _term(seq: SeqLike, k: int) -> Fraction:
    # callables take the index k >= 1; plain sequences hold the terms 1..n in order
    value = seq(k) if callable(seq) else seq[k - 1]
    return Fraction(value)


def solve_first_order(a_seq: SeqLike, b_seq: SeqLike, r_seq: SeqLike, z0, n: int) -> Fraction:
    """Solve ``a_k z_k = b_k z_{k-1} + r_k`` for ``z_n`` via the product/sum form.

    ``z_n = (b_1...b_n)/(a_1...a_n) * (z_0 + sum_k (a_1...a_{k-1})/(b_1...b_k) * r_k)``.
    The sequences may be callables of ``k`` or sequences holding ``a_1..a_n``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    a_prod = Fraction(1)   # a_1 ... a_{k-1}
    b_prod = Fraction(1)   # b_1 ... b_k
    inner = Fraction(z0)
    for k in range(1, n + 1):
        ak, bk = _term(a_seq, k), _term(b_seq, k)
        if ak == 0 or bk == 0:
            raise PreconditionError(f"recurrence coefficient vanishes at k={k}")
        b_prod *= bk
        inner += a_prod / b_prod * _term(r_seq, k)
        a_prod *= ak
    return b_prod / a_prod * inner


def iterate_first_order(a_seq: SeqLike, b_seq: SeqLike, r_seq: SeqLike, z0, n: int) -> Fraction:
    """Forward iteration of the same recurrence; kept as an independent check."""
    z = Fraction(z0)
    for k in range(1, n + 1):
        ak = _term(a_seq, k)
        if ak == 0 or _term(b_seq, k) == 0:
            raise PreconditionError(f"recurrence coefficient vanishes at k={k}")
        z = (_term(b_seq, k) * z + _term(r_seq, k)) / ak
    return z


@dataclass(frozen=True)
class IntegerSequenceState:
    """Coefficients of ``p_n = a_n + b_n/e`` and ``q_n = c_n + d_n/e + f_n*q_0``."""

    n: int
    a_n: Fraction
    b_n: Fraction
    c_n: Fraction
    d_n: Fraction
    f_n: Fraction


def _one(k: int) -> int:
    return 1


def _index(k: int) -> int:
    return k


@lru_cache(maxsize=None)
def _b(n: int) -> Fraction:
    return solve_first_order(_one, _index, lambda k: -1, -1, n)


def sequence_state(n: int) -> IntegerSequenceState:
    """All five sequences at index ``n``, each obtained by solving its recurrence.

    The e^{-1} coefficient of q_n obeys ``d_{n+1} = (n+1) d_n + b_n``, which is what
    ``q_{n+1} = (n+1) q_n + p_n`` gives when matched against the basis 1, 1/e, q_0.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    a_n = solve_first_order(_one, _index, lambda k: 0, 1, n)
    c_n = solve_first_order(_one, _index, lambda k: factorial(k - 1), 0, n)
    d_n = solve_first_order(_one, _index, lambda k: _b(k - 1), 0, n)
    f_n = solve_first_order(_one, _index, lambda k: 0, 1, n)
    return IntegerSequenceState(n, a_n, _b(n), c_n, d_n, f_n)


@lru_cache(maxsize=None)
def _stirling_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling_row(n - 1) + (0,)
    m = n - 1
    return tuple(m * prev[k] + (prev[k - 1] if k else 0) for k in range(n + 1))


def stirling1_abs(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind |s(n, k)|; zero when ``k > n``."""
    if n < 0 or k < 0:
        raise ValueError("Stirling indices must be non-negative")
    if k > n:
        return 0
    return _stirling_row(n)[k]


@dataclass(frozen=True)
class PolyFamily:
    n: int
    coeffs: tuple[Fraction, ...]   # coeffs[k] multiplies a**k

    def as_laurent(self) -> LaurentPoly:
        return LaurentPoly.from_coeffs(self.coeffs)


@lru_cache(maxsize=None)
def _poly_q_coeffs(n: int) -> tuple[Fraction, ...]:
    if n == 0:
        return (Fraction(1),)
    prev = _poly_q_coeffs(n - 1)
    m = n - 1
    out = [(m + 1) * prev[0]]
    for k in range(1, m + 1):
        out.append((m + 1 - k) * prev[k] + prev[k - 1])
    out.append(prev[m])
    return tuple(Fraction(c) for c in out)


def poly_q(n: int) -> PolyFamily:
    """Coefficients ``b_{n,k}`` from the triangle recurrence; they equal ``n!/k!``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return PolyFamily(n, _poly_q_coeffs(n))


def poly_p(n: int) -> PolyFamily:
    """``(-1)**n * PolyQ_n(-a)``: the polynomial multiplying ``exp(a)/a**(n+1)``."""
    q = poly_q(n)
    sign = -1 if n % 2 else 1
    return PolyFamily(n, tuple(sign * (-1) ** k * c for k, c in enumerate(q.coeffs)))


def clear_caches() -> None:
    for fn in (_b, _stirling_row, _poly_q_coeffs):
        fn.cache_clear()


@dataclass(frozen=True)
class ExpAffine:
    """Exact value ``rational + exp_coeff * exp(exponent)``."""

    rational: Fraction
    exp_coeff: Fraction
    exponent: Fraction


def gr_3_351_1(n: int, a, u) -> ExpAffine:
    """Integral of ``x**n * exp(a*x)`` over ``[0, u]`` as an exact pair.

    For ``a = 0`` the general formula is singular and the value ``u**(n+1)/(n+1)``
    is returned with no exponential part.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    a, u = Fraction(a), Fraction(u)
    if a == 0:
        return ExpAffine(u ** (n + 1) / (n + 1), Fraction(0), Fraction(0))
    nfact = factorial(n)
    head = (-1) ** (n + 1) * Fraction(nfact) / a ** (n + 1)
    tail = sum(
        (Fraction(nfact, factorial(k)) * (-1) ** (n - k) * (u * a) ** k for k in range(n + 1)),
        Fraction(0),
    ) / a ** (n + 1)
    return ExpAffine(head, tail, a * u)
