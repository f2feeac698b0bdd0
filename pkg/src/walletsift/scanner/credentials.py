"""Credential file inventory.

Counts files matching each signature's credential path patterns.
Wallet app signatures claim their files first; anything that only the
platform pseudo-signature matches is grouped under "platform".
"""

from __future__ import annotations

from fnmatch import fnmatchcase

from ..case import ExtractionImage
from .hits import ArtifactHit, ArtifactKind, CredentialFileDetails
from .signatures import AppSignature


def _matches(path: str, pattern: str) -> bool:
    # Trailing-anchored like the other scanners: extraction prefixes
    # before the app data root are ignored.
    return fnmatchcase(path, pattern) or fnmatchcase(path, "*/" + pattern)


def _owning_signature(
    path: str, signatures: list[AppSignature]
) -> AppSignature | None:
    platform = None
    for signature in signatures:
        is_platform = signature.display_name == "platform"
        for pattern in signature.credential_path_patterns:
            if _matches(path, pattern):
                if is_platform:
                    platform = signature
                    break
                return signature
    return platform


def credential_hits(
    image: ExtractionImage, signatures: list[AppSignature]
) -> list[ArtifactHit]:
    hits: list[ArtifactHit] = []
    for entry in image.entries:
        owner = _owning_signature(entry.path, signatures)
        if owner is None:
            continue
        hits.append(
            ArtifactHit(
                kind=ArtifactKind.CREDENTIAL_FILE,
                source_path=entry.path,
                image_id=image.id,
                value=entry.path.rsplit("/", 1)[-1],
                observed_at=entry.mtime,
                details=CredentialFileDetails(
                    manager=owner.display_name, app_id=owner.app_id
                ),
            )
        )
    return hits


def inventory_credentials(
    image: ExtractionImage, signatures: list[AppSignature]
) -> dict:
    """Summary {total_files, by_manager} over the credential hits."""
    by_manager: dict[str, int] = {}
    for hit in credential_hits(image, signatures):
        manager = hit.details.manager
        by_manager[manager] = by_manager.get(manager, 0) + 1
    return {
        "total_files": sum(by_manager.values()),
        "by_manager": dict(sorted(by_manager.items())),
    }
