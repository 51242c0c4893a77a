"""Exact rational money values.

All monetary quantities in the engine are ``fractions.Fraction``.  Input
amounts written as decimal strings ("0.1", "2.5") are converted to exact
decimal fractions, never binary floats, so solvency boundaries and strict
inequalities stay exact.  Floats are only produced at the output boundary
as clearly-labelled approximations.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction

Money = Fraction


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse a rational from "p/q", a decimal string, or an int.

    Decimal strings are read as exact decimal fractions, e.g. "0.1" -> 1/10.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("refusing to parse a binary float; pass a string")
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        # Fraction() parses decimal strings exactly.
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid rational literal {text!r}") from exc


def _is_decimal_denominator(den: int) -> bool:
    for p in (2, 5):
        while den % p == 0:
            den //= p
    return den == 1


def format_exact(value: Fraction) -> str:
    """Shortest exact representation: a terminating decimal, else "p/q"."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    if _is_decimal_denominator(value.denominator):
        den = value.denominator
        k = 0
        while den % 2 == 0:
            den //= 2
            k += 1
        j = 0
        while den % 5 == 0:
            den //= 5
            j += 1
        shift = max(k, j)
        scaled = value.numerator * 10**shift // value.denominator
        digits = str(abs(scaled)).rjust(shift + 1, "0")
        sign = "-" if scaled < 0 else ""
        whole, frac = digits[:-shift], digits[-shift:]
        frac = frac.rstrip("0")
        return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"
    return f"{value.numerator}/{value.denominator}"


def format_approx(value: Fraction, significant_digits: int = 12) -> str:
    """Decimal approximation with the given number of significant digits."""
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = significant_digits
        approx = Decimal(value.numerator) / Decimal(value.denominator)
    return str(approx)
