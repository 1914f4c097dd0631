"""Closed forms for int_0^1 x^n e^{-ax} dx and int_0^1 x^n e^{-ax} ln x dx."""

from .exact_core import ClosedForm, ExactValue, Fraction, LaurentPoly
from .integral_families import gr_entry, integral_p, integral_q, pq_fixed
from .special_numerics import eval_closedform, eval_exact, euler_gamma, gamma0

__version__ = "0.1.0"

__all__ = [
    "ClosedForm",
    "ExactValue",
    "Fraction",
    "LaurentPoly",
    "eval_closedform",
    "eval_exact",
    "euler_gamma",
    "gamma0",
    "gr_entry",
    "integral_p",
    "integral_q",
    "pq_fixed",
]
