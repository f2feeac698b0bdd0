"""UTC timestamp parsing, formatting, and Chromium epoch conversion."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

# Microseconds between 1601-01-01 (Chromium/WebKit epoch) and
# 1970-01-01 (UNIX epoch).
CHROMIUM_EPOCH_OFFSET_USEC = 11_644_473_600 * 1_000_000

_CHROMIUM_EPOCH = datetime(1601, 1, 1, tzinfo=timezone.utc)


def parse_utc(text: str) -> datetime:
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    parsed = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if parsed.tzinfo is None:
        return parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def format_utc(moment: datetime) -> str:
    """Render as ISO-8601 with a Z suffix, seconds precision unless
    sub-second detail is present."""
    moment = moment.astimezone(timezone.utc)
    if moment.microsecond:
        return moment.isoformat().replace("+00:00", "Z")
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def from_chromium_usec(usec: int) -> datetime:
    """Convert microseconds since 1601-01-01 UTC to a UTC datetime.

    Kept as exact integer arithmetic: the value is applied as a
    timedelta, never routed through floating point.
    """
    return _CHROMIUM_EPOCH + timedelta(microseconds=usec)


def to_chromium_usec(moment: datetime) -> int:
    delta = moment.astimezone(timezone.utc) - _CHROMIUM_EPOCH
    return (delta.days * 86_400 + delta.seconds) * 1_000_000 + delta.microseconds
