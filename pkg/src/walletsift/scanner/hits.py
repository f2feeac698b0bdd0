"""Artefact records produced by the signature scanners."""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Any

from ..coins import Coin
from ..timestamps import format_utc

_HEX64 = re.compile(r"[0-9a-fA-F]{64}")


class ArtifactKind(str, Enum):
    CACHE_TXID = "CacheTxId"
    EMAIL_SUBJECT = "EmailSubject"
    COOKIE = "Cookie"
    CREDENTIAL_FILE = "CredentialFile"
    MNEMONIC = "Mnemonic"


class CookieParseError(Exception):
    """Cookie store is neither a Chromium SQLite database nor a JSON export."""


@dataclass(frozen=True)
class CookieRecord:
    name: str
    value: str
    domain: str
    url_path: str
    creation: datetime
    expiry: datetime | None
    secure_only: bool
    # Set when expiry precedes creation; such rows are kept, not dropped.
    anomalous: bool = False

    def classification(self) -> str:
        return "Persistent" if self.expiry is not None else "Session"

    def to_doc(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "domain": self.domain,
            "url_path": self.url_path,
            "creation": format_utc(self.creation),
            "expiry": format_utc(self.expiry) if self.expiry else None,
            "secure_only": self.secure_only,
            "classification": self.classification(),
            "anomalous": self.anomalous,
        }


@dataclass(frozen=True)
class EmailDetails:
    direction: str
    amount: str
    coin: Coin
    counterparty: str | None = None

    def to_doc(self) -> dict:
        return {
            "direction": self.direction,
            "amount": self.amount,
            "coin": self.coin.value,
            "counterparty": self.counterparty,
        }


@dataclass(frozen=True)
class CacheTxIdDetails:
    app_id: str
    hex_dir: str

    def to_doc(self) -> dict:
        return {"app_id": self.app_id, "hex_dir": self.hex_dir}


@dataclass(frozen=True)
class CredentialFileDetails:
    manager: str
    app_id: str

    def to_doc(self) -> dict:
        return {"manager": self.manager, "app_id": self.app_id}


@dataclass(frozen=True)
class MnemonicHit:
    words: tuple[str, ...]
    wordlist_id: str
    window_start_offset: int
    checksum_valid: bool | None = None

    def __post_init__(self) -> None:
        if len(self.words) not in (12, 15, 18, 21, 24):
            raise ValueError(f"mnemonic window of {len(self.words)} words")

    def to_doc(self) -> dict:
        return {
            "words": list(self.words),
            "wordlist_id": self.wordlist_id,
            "window_start_offset": self.window_start_offset,
            "checksum_valid": self.checksum_valid,
        }


@dataclass(frozen=True)
class ArtifactHit:
    kind: ArtifactKind
    source_path: str
    image_id: str
    value: str
    coin: Coin | None = None
    observed_at: datetime | None = None
    details: Any = None

    def __post_init__(self) -> None:
        if self.kind is ArtifactKind.CACHE_TXID:
            if not _HEX64.fullmatch(self.value):
                raise ValueError("cache txid value must be 64 hex characters")
            if self.coin is None:
                raise ValueError("cache txid hits must carry a coin")

    def to_doc(self) -> dict:
        return {
            "kind": self.kind.value,
            "source_path": self.source_path,
            "image_id": self.image_id,
            "value": self.value,
            "coin": self.coin.value if self.coin else None,
            "observed_at": format_utc(self.observed_at) if self.observed_at else None,
            "details": self.details.to_doc() if self.details is not None else None,
        }


@dataclass(frozen=True)
class ScanResult:
    image_id: str
    hits: tuple[ArtifactHit, ...]
    warnings: tuple[str, ...] = ()

    def by_kind(self, kind: ArtifactKind) -> list[ArtifactHit]:
        return [hit for hit in self.hits if hit.kind is kind]

    def to_doc(self) -> dict:
        return {
            "image_id": self.image_id,
            "hits": [hit.to_doc() for hit in self.hits],
            "warnings": list(self.warnings),
        }


def sort_hits(hits: list[ArtifactHit]) -> tuple[ArtifactHit, ...]:
    """Deterministic report order; ties keep detection order."""
    return tuple(sorted(hits, key=lambda hit: (hit.source_path, hit.kind.value)))
