"""Declarative per-app signatures driving the artefact scanners.

A signature describes where a wallet app leaves recoverable traces:
cache files named after txids, embedded browser cookie stores, and
credential files.  Path templates are matched against the trailing
segments of an entry path, so extraction prefixes such as
``_data/data/...`` or ``userdata (ExtX)/Root/data/...`` do not matter.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..coins import Coin

TXID_SLOT = "<txid>"
HEXDIR_SLOT = "<hexdir>"
COIN_SLOT = "<coin>"


@dataclass(frozen=True)
class AppSignature:
    app_id: str
    display_name: str
    cache_txid_patterns: tuple[str, ...] = ()
    coins: dict[str, Coin] = field(default_factory=dict)
    cookie_store_paths: tuple[str, ...] = ()
    credential_path_patterns: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for pattern in self.cache_txid_patterns:
            if pattern.count(TXID_SLOT) != 1:
                raise ValueError(
                    f"{self.app_id}: cache pattern needs exactly one {TXID_SLOT} slot"
                )
            if not pattern.endswith(TXID_SLOT):
                raise ValueError(f"{self.app_id}: {TXID_SLOT} must be the final segment")
            if COIN_SLOT in pattern and not self.coins:
                raise ValueError(
                    f"{self.app_id}: {COIN_SLOT} slot used without a declared coin list"
                )

    @classmethod
    def from_doc(cls, doc: dict) -> "AppSignature":
        return cls(
            app_id=doc["app_id"],
            display_name=doc.get("display_name", doc["app_id"]),
            cache_txid_patterns=tuple(doc.get("cache_txid_patterns", ())),
            coins={key: Coin(value) for key, value in doc.get("coins", {}).items()},
            cookie_store_paths=tuple(doc.get("cookie_store_paths", ())),
            credential_path_patterns=tuple(doc.get("credential_path_patterns", ())),
        )


def load_signatures(path: str | Path | None = None) -> tuple[AppSignature, ...]:
    """Load a signature file; defaults to the bundled set."""
    if path is None:
        text = (
            resources.files("walletsift.data")
            .joinpath("signatures.json")
            .read_text("utf-8")
        )
    else:
        text = Path(path).read_text("utf-8")
    docs = json.loads(text)
    if not isinstance(docs, list):
        raise ValueError("signature file must contain a JSON list")
    return tuple(AppSignature.from_doc(doc) for doc in docs)


def match_trailing(path: str, template_segments: list) -> dict[str, str] | None:
    """Match template segments against the end of ``path``.

    Each template segment is either a literal string or a callable
    taking the path segment and returning a capture dict (or None on
    mismatch).  Returns merged captures, or None if the path does not
    end with the template.
    """
    segments = path.split("/")
    if len(segments) < len(template_segments):
        return None
    captures: dict[str, str] = {}
    for segment, matcher in zip(segments[-len(template_segments):], template_segments):
        if callable(matcher):
            captured = matcher(segment)
            if captured is None:
                return None
            captures.update(captured)
        elif segment != matcher:
            return None
    return captures
