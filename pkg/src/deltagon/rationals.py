"""Exact rational scalars.

Every coefficient in this package is an exact rational: lowest terms,
positive denominator, never touched by floating point.  The scalar type is
gmpy2.mpq, which is an order of magnitude faster than fractions.Fraction
in the convolution loops of the series code.  Floats are rejected at the
construction boundary instead of being silently converted.
"""

from __future__ import annotations

import re

from gmpy2 import mpq

from .errors import BadParams

Rational = mpq

ZERO = mpq(0)
ONE = mpq(1)

_RATIONAL_RE = re.compile(r"^-?\d+(?:/[1-9]\d*)?$")


def Q(value=0, den=None) -> Rational:
    """Canonical rational constructor.  Accepts ints, rationals and "p/q" strings."""
    if isinstance(value, float) or isinstance(den, float):
        raise TypeError("floating-point input rejected; pass an int, rational or 'p/q' string")
    if den is not None:
        return mpq(value, den)
    if isinstance(value, str):
        return parse_rational(value)
    return mpq(value)


def parse_rational(text: str) -> Rational:
    """Parse a rational literal of the form "p" or "p/q" with q > 0."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise BadParams(f"not a rational literal: {text!r}")
    return mpq(text.strip())


def format_rational(q) -> str:
    """Render as "p" or "p/q", the inverse of parse_rational."""
    return str(mpq(q))
