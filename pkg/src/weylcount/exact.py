"""Small helpers for moving between text, floats and exact rationals."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

RationalLike = Union[int, Fraction, str, float]


def as_fraction(x: RationalLike) -> Fraction:
    """Convert ``x`` to an exact Fraction.

    Strings may be integers, decimals (``"2.5"``) or ratios (``"7/3"``).
    Floats are converted exactly (binary value), never rounded.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {x!r}") from exc
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def format_exact(x: Union[int, Fraction]) -> str:
    """Lossless text form: ``"p/q"`` or a bare integer."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_float(x: float) -> str:
    return format(float(x), ".17g")
