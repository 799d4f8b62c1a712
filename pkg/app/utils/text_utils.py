"""Text utilities for rendering numbers in URLs and reports."""
from decimal import ROUND_DOWN, Decimal

import numpy as np

_PERCENT_QUANTUM = Decimal("0.0001")


def format_decimal(value: float) -> str:
    """
    Render a float as the shortest positional decimal that round-trips.

    Rules:
    - No exponent notation
    - No trailing zeros, no trailing dot (78.20 -> "78.2", 0.0 -> "0")
    - Negative zero renders as "0"

    Args:
        value: Float to render

    Returns:
        Decimal string
    """
    if value == 0:
        value = 0.0
    return np.format_float_positional(float(value), unique=True, trim="-")


def format_percent(fraction: float) -> str:
    """Render a fraction as a percentage truncated to 4 decimals, e.g. 344/365 -> 94.2465%."""
    percent = (Decimal(repr(float(fraction))) * 100).quantize(_PERCENT_QUANTUM, rounding=ROUND_DOWN)
    return f"{percent}%"
