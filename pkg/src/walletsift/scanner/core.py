"""Scan orchestration: run every detector over one extraction image."""

from __future__ import annotations

import dataclasses
from typing import Iterable, Sequence

from .cache_txids import scan_cache_txids
from .cookies import CookieParseError, parse_cookie_store
from .credentials import credential_hits
from .emails import scan_email_subjects
from .hits import ArtifactHit, ArtifactKind, ScanResult, sort_hits
from .mnemonics import Wordlist, bundled_wordlists, scan_mnemonic_bytes
from .signatures import AppSignature, match_trailing

# Files past this size are skipped by content detectors; path-based
# detectors (cache txids, credentials) still apply.
MAX_CONTENT_BYTES = 8 * 1024 * 1024


def _looks_binary(data: bytes) -> bool:
    return b"\x00" in data[:4096]


def _cookie_hits(image, path: str, data: bytes) -> tuple[list[ArtifactHit], list[str]]:
    try:
        records, warnings = parse_cookie_store(data, origin=path)
    except CookieParseError as exc:
        return [], [f"unreadable cookie store: {exc}"]
    hits = [
        ArtifactHit(
            kind=ArtifactKind.COOKIE,
            source_path=path,
            image_id=image.id,
            value=record.name,
            coin=None,
            observed_at=record.creation,
            details=record,
        )
        for record in records
    ]
    return hits, warnings


def scan(
    image,
    signatures: Sequence[AppSignature],
    wordlists: Iterable[Wordlist] | None = None,
    validate_checksum: bool = False,
    max_content_bytes: int = MAX_CONTENT_BYTES,
) -> ScanResult:
    """Run all detectors over an extraction image.

    Path-only detectors (cache txids, credential inventory) never read
    file content; everything else reads each candidate file once.
    """
    if not signatures:
        raise ValueError("at least one app signature is required")
    if wordlists is None:
        wordlists = bundled_wordlists()
    else:
        wordlists = tuple(wordlists)

    hits: list[ArtifactHit] = []
    warnings: list[str] = []

    cookie_templates = [
        store.split("/")
        for signature in signatures
        for store in signature.cookie_store_paths
    ]

    for signature in signatures:
        cache_hits, cache_warnings = scan_cache_txids(image, signature)
        hits.extend(cache_hits)
        warnings.extend(cache_warnings)

    hits.extend(credential_hits(image, signatures))

    for entry in image.entries:
        path = entry.path
        if any(
            match_trailing(path, template) is not None
            for template in cookie_templates
        ):
            cookie_hits, cookie_warnings = _cookie_hits(
                image, path, image.read_bytes(path)
            )
            hits.extend(cookie_hits)
            warnings.extend(cookie_warnings)
            continue
        if entry.size_bytes > max_content_bytes:
            continue
        data = image.read_bytes(path)
        for detail in scan_mnemonic_bytes(data, wordlists, validate_checksum):
            hits.append(
                ArtifactHit(
                    kind=ArtifactKind.MNEMONIC,
                    source_path=path,
                    image_id=image.id,
                    value=" ".join(detail.words),
                    coin=None,
                    observed_at=entry.mtime,
                    details=detail,
                )
            )
        if _looks_binary(data):
            continue
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            continue
        for hit in scan_email_subjects([(image.id, path, text)]):
            if entry.mtime is not None:
                hit = dataclasses.replace(hit, observed_at=entry.mtime)
            hits.append(hit)

    return ScanResult(
        image_id=image.id,
        hits=sort_hits(hits),
        warnings=tuple(warnings),
    )


def scan_case(case, signatures: Sequence[AppSignature], **kwargs) -> list[ScanResult]:
    """One ScanResult per image, in case order."""
    return [scan(image, signatures, **kwargs) for image in case.images]
