"""Compiled exact evaluation of polynomials on many points.

Coefficients and coordinates with denominator 1 are demoted to Python
ints so the hot loops run on machine integers (arbitrary precision, so
still exact); anything else stays a Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .poly import Polynomial


def demote(value: Fraction):
    return value.numerator if value.denominator == 1 else value


def demote_point(point: Sequence[Fraction]) -> tuple:
    return tuple(demote(Fraction(c)) for c in point)


def compile_evaluator(f: Polynomial) -> Callable[[Sequence], object]:
    """Exact value of f at a coordinate tuple (ints or Fractions)."""
    terms = tuple(
        (demote(coeff), tuple((i, e) for i, e in enumerate(mono.exponents) if e))
        for mono, coeff in sorted(f.terms.items())
    )

    def ev(x: Sequence) -> object:
        total = 0
        for coeff, powers in terms:
            t = coeff
            for i, e in powers:
                t *= x[i] ** e
            total += t
        return total

    return ev


def compile_sign(f: Polynomial) -> Callable[[Sequence], int]:
    ev = compile_evaluator(f)

    def sign(x: Sequence) -> int:
        v = ev(x)
        if v > 0:
            return 1
        if v < 0:
            return -1
        return 0

    return sign
