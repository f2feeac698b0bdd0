"""Exact decimal amount handling."""

from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from walletsift.coins import AMOUNT_QUANTUM, AmountError, format_amount, parse_amount


def test_parse_string():
    assert parse_amount("0.00254817") == Decimal("0.00254817")
    assert parse_amount("212.577") == Decimal("212.577")
    assert parse_amount("0") == 0


def test_parse_int_and_decimal():
    assert parse_amount(3) == Decimal(3)
    assert parse_amount(Decimal("1.5")) == Decimal("1.5")


def test_float_rejected():
    with pytest.raises(AmountError):
        parse_amount(0.1)


def test_too_many_places_rejected():
    with pytest.raises(AmountError):
        parse_amount("0.000000001")


def test_garbage_rejected():
    for bad in ("", "abc", "1.2.3", "0x10", "nan", "inf", "-inf"):
        with pytest.raises(AmountError):
            parse_amount(bad)


def test_negative_preserved():
    # Sign handling is the caller's concern; parsing keeps it exact.
    assert parse_amount("-1.5") == Decimal("-1.5")


def test_format_fixed_eight_places():
    assert format_amount(Decimal("212.577")) == "212.57700000"
    assert format_amount(Decimal("0.00254817")) == "0.00254817"
    assert format_amount(Decimal("0")) == "0.00000000"
    assert format_amount(Decimal("2")) == "2.00000000"


@given(st.integers(min_value=0, max_value=21_000_000 * 10**8))
def test_round_trip_through_quantum(units):
    amount = units * AMOUNT_QUANTUM
    assert parse_amount(format_amount(amount)) == amount


def test_no_float_drift_on_sum():
    # 0.1 + 0.2 style sums stay exact under Decimal.
    total = sum((parse_amount("0.1") for _ in range(10)), Decimal(0))
    assert total == Decimal("1")
