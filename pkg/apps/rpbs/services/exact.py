"""Conversions between Fraction coefficients and sympy rationals."""

from __future__ import annotations

from fractions import Fraction

import sympy


def to_rational(value: Fraction | int) -> sympy.Rational:
    """Exact sympy rational for a Fraction or int."""
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def to_fraction(value: object) -> Fraction:
    """Exact Fraction for a sympy rational number.

    Raises:
        ValueError: If value is not a rational number (e.g. still depends on a symbol)
    """
    number = sympy.sympify(value)
    if not number.is_Rational:
        msg = f"Expected an exact rational, got {number}"
        raise ValueError(msg)
    return Fraction(int(number.p), int(number.q))


def rational_matrix(rows: list[list[Fraction]]) -> sympy.Matrix:
    """sympy matrix with exact rational entries."""
    return sympy.Matrix([[to_rational(entry) for entry in row] for row in rows])
