"""Wallet notification email subjects.

Exchange and wallet services send transactional mail whose subject
lines state direction, amount, and sometimes a (often redacted)
counterparty address.  Amounts are kept as the exact decimal strings
found in the text.
"""

from __future__ import annotations

import re
from typing import Iterable

from ..coins import Coin
from .hits import ArtifactHit, ArtifactKind, EmailDetails

SUBJECT_RE = re.compile(
    r"^(?:Subject:\s*)?"
    r"You just (?P<direction>received|sent) "
    r"(?P<amount>[0-9]+(?:\.[0-9]+)?) "
    r"(?P<coin>BTC|DOGE)"
    r"(?: to (?P<counterparty>\S+))?"
    r"\s*$"
)


def parse_subject_line(line: str) -> EmailDetails | None:
    matched = SUBJECT_RE.match(line)
    if matched is None:
        return None
    return EmailDetails(
        direction=matched["direction"],
        amount=matched["amount"],
        coin=Coin(matched["coin"]),
        counterparty=matched["counterparty"],
    )


def scan_email_subjects(
    corpus: Iterable[tuple[str, str, str]],
) -> list[ArtifactHit]:
    """Scan (image_id, path, text) blobs line by line."""
    hits: list[ArtifactHit] = []
    for image_id, path, text in corpus:
        for line in text.splitlines():
            details = parse_subject_line(line.strip())
            if details is None:
                continue
            value = line.strip()
            if value.lower().startswith("subject:"):
                value = value.split(":", 1)[1].strip()
            hits.append(
                ArtifactHit(
                    kind=ArtifactKind.EMAIL_SUBJECT,
                    source_path=path,
                    image_id=image_id,
                    value=value,
                    coin=details.coin,
                    details=details,
                )
            )
    return hits
