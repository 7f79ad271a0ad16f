"""Parsing and formatting of exact rationals as ``"p/q"`` strings."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


def to_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats and decimal strings are refused: every number in this package is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ValueError(f"not an exact rational literal: {value!r}")
        return Fraction(value.replace(" ", ""))
    raise TypeError(f"cannot read {type(value).__name__} as an exact rational")


def format_fraction(q: Fraction) -> str | int:
    """Integers stay integers; everything else becomes ``"p/q"``."""
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def decimal(q: Fraction, digits: int = 12) -> str:
    """Decimal annotation for human readers; never parsed back."""
    return f"{float(q):.{digits}g}"
