"""Small shared helpers."""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal


def percent_half_up(part: int, total: int, decimals: int = 0) -> float:
    """Percentage 100 * part / total, rounded half-up to `decimals` places.

    Uses exact decimal arithmetic so values like x.x5 round up instead of
    falling into binary-float banker's rounding.
    """
    if total <= 0:
        raise ValueError("total must be positive")
    if part < 0:
        raise ValueError("part must be non-negative")
    quantum = Decimal(1).scaleb(-decimals)
    value = (Decimal(100 * part) / Decimal(total)).quantize(quantum, rounding=ROUND_HALF_UP)
    return float(value)
