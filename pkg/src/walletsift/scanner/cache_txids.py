"""Wallet cache files named after transaction ids.

Some wallets keep a per-coin cache directory whose member files are
named by the txids the wallet has seen; the files themselves are often
empty.  The filename is the artefact.
"""

from __future__ import annotations

import re

from ..case import ExtractionImage
from .hits import ArtifactHit, ArtifactKind, CacheTxIdDetails
from .signatures import COIN_SLOT, HEXDIR_SLOT, AppSignature, match_trailing

_HEX_DIR = re.compile(r"[0-9a-fA-F]+")
_HEX64 = re.compile(r"[0-9a-fA-F]{64}")


def _compile_directory(pattern: str, signature: AppSignature) -> list:
    """Template matchers for every segment except the final txid slot."""
    segments = pattern.split("/")[:-1]
    compiled: list = []
    for segment in segments:
        if segment == HEXDIR_SLOT:
            compiled.append(
                lambda s: {"hex_dir": s} if _HEX_DIR.fullmatch(s) else None
            )
        elif COIN_SLOT in segment:
            prefix, suffix = segment.split(COIN_SLOT, 1)
            names = signature.coins

            def coin_matcher(s, prefix=prefix, suffix=suffix, names=names):
                if not (s.startswith(prefix) and s.endswith(suffix)):
                    return None
                middle = s[len(prefix) : len(s) - len(suffix) if suffix else len(s)]
                return {"coin": middle} if middle in names else None

            compiled.append(coin_matcher)
        else:
            compiled.append(segment)
    return compiled


def scan_cache_txids(
    image: ExtractionImage, signature: AppSignature
) -> tuple[list[ArtifactHit], list[str]]:
    hits: list[ArtifactHit] = []
    warnings: list[str] = []
    templates = [
        _compile_directory(pattern, signature)
        for pattern in signature.cache_txid_patterns
    ]
    for entry in image.entries:
        directory, _, filename = entry.path.rpartition("/")
        if not directory:
            continue
        for template in templates:
            captures = match_trailing(directory, template)
            if captures is None:
                continue
            if not _HEX64.fullmatch(filename):
                warnings.append(
                    f"file in wallet cache directory is not a txid: {entry.path}"
                )
                break
            hits.append(
                ArtifactHit(
                    kind=ArtifactKind.CACHE_TXID,
                    source_path=entry.path,
                    image_id=image.id,
                    value=filename.lower(),
                    coin=signature.coins[captures["coin"]],
                    observed_at=entry.mtime,
                    details=CacheTxIdDetails(
                        app_id=signature.app_id, hex_dir=captures["hex_dir"]
                    ),
                )
            )
            break
    return hits, warnings
