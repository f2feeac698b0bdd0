"""Embedded Chromium cookie store parsing.

Wallet apps shipping a WebView leave a Chromium-format SQLite cookie
database on disk.  Timestamps are microseconds since 1601-01-01 UTC;
an expiry of zero means a session cookie.  A JSON export with the same
seven fields is accepted as an alternate container.
"""

from __future__ import annotations

import json
import sqlite3
import tempfile
from pathlib import Path

from ..timestamps import from_chromium_usec
from .hits import CookieParseError, CookieRecord

SQLITE_MAGIC = b"SQLite format 3\x00"

_COLUMNS = ("creation_utc", "host_key", "name", "value", "path", "expires_utc")


def _row_to_record(row: dict, warnings: list[str], origin: str) -> CookieRecord | None:
    try:
        creation_usec = int(row["creation_utc"])
        expires_usec = int(row["expires_utc"])
    except (TypeError, ValueError, KeyError):
        warnings.append(f"{origin}: cookie row with non-integer timestamps skipped")
        return None
    creation = from_chromium_usec(creation_usec)
    expiry = None if expires_usec == 0 else from_chromium_usec(expires_usec)
    anomalous = expiry is not None and expiry < creation
    if anomalous:
        warnings.append(
            f"{origin}: cookie {row.get('name', '?')} expires before creation"
        )
    return CookieRecord(
        name=str(row.get("name", "")),
        value=str(row.get("value", "")),
        domain=str(row.get("host_key", "")),
        url_path=str(row.get("path", "")),
        creation=creation,
        expiry=expiry,
        secure_only=bool(row.get("is_secure", row.get("secure", 0))),
        anomalous=anomalous,
    )


def _parse_sqlite(data: bytes, origin: str) -> tuple[list[CookieRecord], list[str]]:
    records: list[CookieRecord] = []
    warnings: list[str] = []
    with tempfile.NamedTemporaryFile(suffix=".sqlite") as handle:
        handle.write(data)
        handle.flush()
        try:
            connection = sqlite3.connect(f"file:{handle.name}?mode=ro", uri=True)
        except sqlite3.Error as exc:  # pragma: no cover - connect rarely fails
            raise CookieParseError(f"{origin}: cannot open SQLite store: {exc}")
        try:
            connection.row_factory = sqlite3.Row
            try:
                columns = {
                    info[1]
                    for info in connection.execute("PRAGMA table_info(cookies)")
                }
            except sqlite3.Error as exc:
                raise CookieParseError(f"{origin}: unreadable SQLite store: {exc}")
            if not columns:
                raise CookieParseError(f"{origin}: no cookies table present")
            missing = [column for column in _COLUMNS if column not in columns]
            if missing or not ({"is_secure", "secure"} & columns):
                raise CookieParseError(
                    f"{origin}: cookies table lacks columns {missing or ['is_secure']}"
                )
            secure_column = "is_secure" if "is_secure" in columns else "secure"
            query = (
                f"SELECT {', '.join(_COLUMNS)}, {secure_column} FROM cookies "
                "ORDER BY creation_utc, host_key, name"
            )
            try:
                for row in connection.execute(query):
                    record = _row_to_record(dict(row), warnings, origin)
                    if record is not None:
                        records.append(record)
            except sqlite3.Error as exc:
                raise CookieParseError(f"{origin}: query failed: {exc}")
        finally:
            connection.close()
    return records, warnings


def _parse_json(data: bytes, origin: str) -> tuple[list[CookieRecord], list[str]]:
    try:
        rows = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CookieParseError(f"{origin}: not a cookie store: {exc}")
    if not isinstance(rows, list):
        raise CookieParseError(f"{origin}: JSON cookie export must be a list")
    records: list[CookieRecord] = []
    warnings: list[str] = []
    for row in rows:
        if not isinstance(row, dict):
            warnings.append(f"{origin}: non-object cookie row skipped")
            continue
        record = _row_to_record(row, warnings, origin)
        if record is not None:
            records.append(record)
    return records, warnings


def parse_cookie_store(
    data: bytes, origin: str = "cookie store"
) -> tuple[list[CookieRecord], list[str]]:
    """Parse a cookie container into records plus per-row warnings."""
    if data.startswith(SQLITE_MAGIC):
        return _parse_sqlite(data, origin)
    return _parse_json(data, origin)


def build_sqlite_store(path: str | Path, rows: list[dict]) -> None:
    """Write a minimal Chromium-schema cookie database (test/demo aid)."""
    connection = sqlite3.connect(str(path))
    try:
        connection.execute(
            "CREATE TABLE cookies ("
            "creation_utc INTEGER NOT NULL,"
            "host_key TEXT NOT NULL,"
            "name TEXT NOT NULL,"
            "value TEXT NOT NULL,"
            "path TEXT NOT NULL,"
            "expires_utc INTEGER NOT NULL,"
            "is_secure INTEGER NOT NULL DEFAULT 0)"
        )
        connection.executemany(
            "INSERT INTO cookies (creation_utc, host_key, name, value, path, "
            "expires_utc, is_secure) VALUES "
            "(:creation_utc, :host_key, :name, :value, :path, :expires_utc, :is_secure)",
            [
                {
                    "creation_utc": row["creation_utc"],
                    "host_key": row["host_key"],
                    "name": row["name"],
                    "value": row.get("value", ""),
                    "path": row.get("path", "/"),
                    "expires_utc": row.get("expires_utc", 0),
                    "is_secure": int(row.get("is_secure", 0)),
                }
                for row in rows
            ],
        )
        connection.commit()
    finally:
        connection.close()
