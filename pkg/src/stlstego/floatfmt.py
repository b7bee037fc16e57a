"""Shortest round-trip decimal spellings for single-precision values.

One fixed algorithm produces one spelling per value, so equal models always
serialize to identical bytes and re-saving a file is a deterministic
normalization of its number notation.
"""
from __future__ import annotations

import re

import numpy as np

from .errors import StlParseError

# Standard or scientific notation. Deliberately narrower than float():
# no inf/nan, no digit-group underscores, no hex floats.
NUMBER_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NUMBER_EXACT = re.compile(NUMBER_RE.pattern + r"\Z")


def is_number_token(token: str) -> bool:
    return _NUMBER_EXACT.match(token) is not None


def parse_float32(token: str, line: int | None = None) -> float:
    """Convert a numeric token to the nearest finite single-precision value."""
    if not is_number_token(token):
        raise StlParseError(f"not a number: {token!r}", line)
    with np.errstate(over="ignore"):
        value = np.float32(float(token))
    if not np.isfinite(value):
        raise StlParseError(f"out of single-precision range: {token!r}", line)
    return float(value)


def format_standard(value: float) -> str:
    """Shortest positional decimal that parses back to the same value.

    The sign of zero is normalized away so that value-equal models format
    identically.
    """
    x = np.float32(value)
    if x == 0:
        return "0"
    return np.format_float_positional(x, unique=True, trim="-")


def format_scientific(value: float) -> str:
    """Shortest scientific decimal with mantissa in [1, 10) for the value."""
    x = np.float32(value)
    if x == 0:
        return "0e0"
    text = np.format_float_scientific(x, unique=True, trim="-")
    mantissa, exponent = text.split("e")
    return f"{mantissa}e{int(exponent)}"
