"""Artefact scanners for wallet apps on extracted filesystems."""

from .cache_txids import scan_cache_txids
from .cookies import build_sqlite_store, parse_cookie_store
from .core import MAX_CONTENT_BYTES, scan, scan_case
from .credentials import credential_hits, inventory_credentials
from .emails import parse_subject_line, scan_email_subjects
from .hits import (
    ArtifactHit,
    ArtifactKind,
    CacheTxIdDetails,
    CookieParseError,
    CookieRecord,
    CredentialFileDetails,
    EmailDetails,
    MnemonicHit,
    ScanResult,
    sort_hits,
)
from .mnemonics import (
    WINDOW_SIZES,
    Wordlist,
    bundled_wordlists,
    checksum_valid,
    scan_mnemonic_bytes,
)
from .signatures import AppSignature, load_signatures, match_trailing

__all__ = [
    "MAX_CONTENT_BYTES",
    "WINDOW_SIZES",
    "AppSignature",
    "ArtifactHit",
    "ArtifactKind",
    "CacheTxIdDetails",
    "CookieParseError",
    "CookieRecord",
    "CredentialFileDetails",
    "EmailDetails",
    "MnemonicHit",
    "ScanResult",
    "Wordlist",
    "build_sqlite_store",
    "bundled_wordlists",
    "checksum_valid",
    "credential_hits",
    "inventory_credentials",
    "load_signatures",
    "match_trailing",
    "parse_cookie_store",
    "parse_subject_line",
    "scan",
    "scan_cache_txids",
    "scan_case",
    "scan_email_subjects",
    "scan_mnemonic_bytes",
    "sort_hits",
]
