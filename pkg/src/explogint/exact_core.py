"""Exact algebra for the closed forms.

Three layers, all immutable and hashable:

* ``Fraction`` (stdlib) is the coefficient field.
* ``LaurentPoly`` is a finite sum of ``c_k * a**k`` with integer ``k`` of any
  sign.
* ``ClosedForm`` is ``r0(a) + r1(a)*exp(-a) + r2(a)*G(a)`` where
  ``G(a) = euler_gamma + log(a) + Gamma(0, a)``.

Equality is structural: coefficients are normalized on construction, and the
three basis functions ``1, exp(-a), G(a)`` are treated as independent.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]

__all__ = [
    "Fraction",
    "LaurentPoly",
    "ClosedForm",
    "ExactValue",
    "laurent_arith",
    "laurent_diff",
    "cf_arith",
    "cf_scale",
    "cf_diff",
]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class LaurentPoly:
    """Polynomial in ``a`` and ``1/a`` with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for exp, coeff in items:
            if not isinstance(exp, int) or isinstance(exp, bool):
                raise TypeError("exponents must be integers")
            acc[exp] = acc.get(exp, Fraction(0)) + _as_fraction(coeff)
        self._terms = {k: v for k, v in sorted(acc.items()) if v}
        self._hash = None

    @classmethod
    def constant(cls, c: Scalar) -> LaurentPoly:
        return cls({0: c})

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> LaurentPoly:
        return cls({exp: coeff})

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Scalar], start: int = 0) -> LaurentPoly:
        """Build from a dense coefficient list; ``coeffs[i]`` multiplies ``a**(start+i)``."""
        return cls((start + i, c) for i, c in enumerate(coeffs))

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def coeff(self, exp: int) -> Fraction:
        return self._terms.get(exp, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def min_exponent(self) -> int | None:
        return min(self._terms) if self._terms else None

    def max_exponent(self) -> int | None:
        return max(self._terms) if self._terms else None

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.constant(_as_fraction(other))

    def __add__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        return LaurentPoly(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> LaurentPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> LaurentPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, ClosedForm):
            return NotImplemented
        other = self._coerce(other)
        acc: dict[int, Fraction] = {}
        for i, ci in self._terms.items():
            for j, cj in other._terms.items():
                acc[i + j] = acc.get(i + j, Fraction(0)) + ci * cj
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def diff(self) -> LaurentPoly:
        return LaurentPoly({k - 1: k * c for k, c in self._terms.items() if k != 0})

    def __call__(self, a: Scalar) -> Fraction:
        """Exact evaluation at a rational point."""
        a = _as_fraction(a)
        if a == 0 and any(k < 0 for k in self._terms):
            raise ZeroDivisionError("Laurent polynomial with negative powers evaluated at a = 0")
        return sum((c * a**k for k, c in self._terms.items()), Fraction(0))

    def __repr__(self) -> str:
        return f"LaurentPoly({self._terms!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in sorted(self._terms.items(), reverse=True):
            if k == 0:
                body = str(c)
            else:
                power = "a" if k == 1 else f"a^{k}"
                body = power if c == 1 else ("-" + power if c == -1 else f"{c}*{power}")
            parts.append(body)
        return " + ".join(parts).replace("+ -", "- ")


_ZERO = LaurentPoly()


class ClosedForm:
    """Exact value ``r0 + r1*exp(-a) + r2*G(a)`` with Laurent coefficients."""

    __slots__ = ("r0", "r1", "r2")

    def __init__(self, r0: LaurentPoly | Scalar = _ZERO, r1: LaurentPoly | Scalar = _ZERO,
                 r2: LaurentPoly | Scalar = _ZERO):
        self.r0 = r0 if isinstance(r0, LaurentPoly) else LaurentPoly.constant(r0)
        self.r1 = r1 if isinstance(r1, LaurentPoly) else LaurentPoly.constant(r1)
        self.r2 = r2 if isinstance(r2, LaurentPoly) else LaurentPoly.constant(r2)

    @property
    def components(self) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
        return self.r0, self.r1, self.r2

    def is_zero(self) -> bool:
        return not (self.r0 or self.r1 or self.r2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClosedForm):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __add__(self, other: ClosedForm) -> ClosedForm:
        if not isinstance(other, ClosedForm):
            return NotImplemented
        return ClosedForm(self.r0 + other.r0, self.r1 + other.r1, self.r2 + other.r2)

    def __neg__(self) -> ClosedForm:
        return ClosedForm(-self.r0, -self.r1, -self.r2)

    def __sub__(self, other: ClosedForm) -> ClosedForm:
        if not isinstance(other, ClosedForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, s) -> ClosedForm:
        if isinstance(s, ClosedForm):
            raise TypeError("ClosedForm is a module over LaurentPoly; products of ClosedForms are not closed")
        s = s if isinstance(s, LaurentPoly) else LaurentPoly.constant(_as_fraction(s))
        return ClosedForm(s * self.r0, s * self.r1, s * self.r2)

    __rmul__ = __mul__

    def diff(self) -> ClosedForm:
        # G'(a) = 1/a - exp(-a)/a
        r2_over_a = self.r2 * LaurentPoly.monomial(-1)
        return ClosedForm(
            self.r0.diff() + r2_over_a,
            self.r1.diff() - self.r1 - r2_over_a,
            self.r2.diff(),
        )

    def at(self, a: Scalar) -> ExactValue:
        """Specialize the parameter to a rational point, keeping the basis symbolic."""
        a = _as_fraction(a)
        terms = {}
        if self.r0:
            terms[(Fraction(0), None)] = self.r0(a)
        if self.r1:
            terms[(-a, None)] = self.r1(a)
        if self.r2:
            terms[(Fraction(0), a)] = self.r2(a)
        return ExactValue(terms)

    def __repr__(self) -> str:
        return f"ClosedForm(r0={self.r0!r}, r1={self.r1!r}, r2={self.r2!r})"

    def __str__(self) -> str:
        parts = []
        if self.r0:
            parts.append(f"({self.r0})")
        if self.r1:
            parts.append(f"({self.r1})*exp(-a)")
        if self.r2:
            parts.append(f"({self.r2})*G(a)")
        return " + ".join(parts) if parts else "0"


class ExactValue:
    """A number ``sum c * exp(s) * B`` with rational ``c, s`` and ``B`` either 1 or ``G(x0)``.

    Terms are keyed by ``(s, x0)`` where ``x0 is None`` stands for ``B = 1``. This is
    what closed forms become once the parameter is fixed, and it also covers
    values such as ``1 - e`` that carry a positive exponential.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, Scalar] | None = None):
        acc: dict[tuple[Fraction, Fraction | None], Fraction] = {}
        for (s, g), c in (terms or {}).items():
            key = (_as_fraction(s), None if g is None else _as_fraction(g))
            acc[key] = acc.get(key, Fraction(0)) + _as_fraction(c)
        self._terms = {k: v for k, v in sorted(acc.items(), key=_term_order) if v}

    @classmethod
    def rational(cls, c: Scalar) -> ExactValue:
        return cls({(0, None): c})

    @classmethod
    def exp_poly(cls, coeffs: Mapping[Scalar, Scalar]) -> ExactValue:
        """``sum coeffs[s] * exp(s)``."""
        return cls({(s, None): c for s, c in coeffs.items()})

    @property
    def terms(self) -> dict[tuple[Fraction, Fraction | None], Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactValue):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __add__(self, other: ExactValue) -> ExactValue:
        if not isinstance(other, ExactValue):
            return NotImplemented
        return ExactValue(_merge(self._terms, other._terms))

    def __neg__(self) -> ExactValue:
        return ExactValue({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: ExactValue) -> ExactValue:
        if not isinstance(other, ExactValue):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c) -> ExactValue:
        c = _as_fraction(c)
        return ExactValue({k: c * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def times_exp(self, s: Scalar) -> ExactValue:
        s = _as_fraction(s)
        return ExactValue({(e + s, g): v for (e, g), v in self._terms.items()})

    def __repr__(self) -> str:
        return f"ExactValue({self._terms!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (s, g), c in self._terms.items():
            factors = []
            if s != 0:
                factors.append(f"exp({s})")
            if g is not None:
                factors.append(f"G({g})")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def _term_order(item):
    (s, g), _ = item
    return (g is not None, g if g is not None else 0, s != 0, -s)


def _merge(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, Fraction(0)) + v
    return out


def laurent_arith(p: LaurentPoly, q: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown Laurent operation {op!r}")


def laurent_diff(p: LaurentPoly) -> LaurentPoly:
    return p.diff()


def cf_arith(x: ClosedForm, y: ClosedForm, op: str) -> ClosedForm:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    raise ValueError(f"unknown ClosedForm operation {op!r}")


def cf_scale(x: ClosedForm, s: LaurentPoly) -> ClosedForm:
    return x * s


def cf_diff(x: ClosedForm) -> ClosedForm:
    """Derivative in ``a``; the ``G`` component contributes ``r2*(1 - exp(-a))/a``."""
    return x.diff()
