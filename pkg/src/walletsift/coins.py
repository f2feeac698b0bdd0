"""Coin identifiers and exact decimal amount handling.

All monetary values are carried as :class:`decimal.Decimal` with at most
8 fractional digits.  Binary floats are rejected at the boundary so that
ledger amounts round-trip exactly through every serialization.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from enum import Enum

# 8 fractional digits: one satoshi / one "koinu".
AMOUNT_QUANTUM = Decimal("0.00000001")


class Coin(str, Enum):
    BTC = "BTC"
    DOGE = "DOGE"


class AmountError(ValueError):
    """Value is not representable as an exact 8-decimal-place amount."""


def parse_amount(value: str | int | Decimal) -> Decimal:
    """Parse an exact coin amount.

    Accepts decimal strings, ints, and Decimals.  Floats are refused:
    they have already lost the exactness this module exists to protect.
    """
    if isinstance(value, float):
        raise AmountError(f"refusing float amount {value!r}; pass a string")
    try:
        amount = Decimal(value)
    except InvalidOperation as exc:
        raise AmountError(f"not a decimal amount: {value!r}") from exc
    if not amount.is_finite():
        raise AmountError(f"non-finite amount: {value!r}")
    quantized = amount.quantize(AMOUNT_QUANTUM)
    if quantized != amount:
        raise AmountError(f"more than 8 fractional digits: {value!r}")
    return quantized


def format_amount(amount: Decimal) -> str:
    """Canonical fixed 8-decimal-place rendering, e.g. ``212.57700000``."""
    return f"{amount.quantize(AMOUNT_QUANTUM):f}"
