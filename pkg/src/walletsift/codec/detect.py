"""Identifier detection in free text.

Tokenizes on non-alphanumeric boundaries and classifies candidate tokens:
64-hex runs become transaction IDs, '1'/'3'/'D'-prefixed base58 tokens of
plausible length become Base58Check candidates, and "bc1"-prefixed tokens
become bech32 candidates.  Obfuscated forms like ``4af2*****8643`` never
match: the ``*`` breaks the token.

A bare 64-hex string is never assigned a coin here; transaction IDs carry
no network tag, so coin attribution must come from context (for example
the coin segment of a wallet cache path).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .addresses import Address, CoinParams, TxId, decode_address
from .errors import CodecError

_TOKEN_RE = re.compile(r"[0-9A-Za-z]+")
_HEX64_RE = re.compile(r"^[0-9a-fA-F]{64}$")
_BASE58_BODY_RE = re.compile(r"^[1-9A-HJ-NP-Za-km-z]+$")


@dataclass(frozen=True)
class Detection:
    span: tuple[int, int]
    token: str
    category: str  # "txid" | "base58" | "bech32"
    valid: bool
    address: Address | None = None
    txid: TxId | None = None


def detect_identifiers(text: str, params: CoinParams | None = None) -> list[Detection]:
    """Find and validate candidate on-chain identifiers in ``text``."""
    params = params or CoinParams.default()
    found: list[Detection] = []
    for match in _TOKEN_RE.finditer(text):
        token = match.group(0)
        span = (match.start(), match.end())
        if _HEX64_RE.match(token):
            # Txids carry no checksum; any 64-hex token is structurally valid.
            found.append(
                Detection(span=span, token=token, category="txid", valid=True, txid=TxId.normalize(token))
            )
            continue
        if token.lower().startswith("bc1"):
            found.append(_try_address(span, token, "bech32", params))
            continue
        if token[0] in "13D" and 26 <= len(token) <= 35 and _BASE58_BODY_RE.match(token):
            found.append(_try_address(span, token, "base58", params))
    return found


def _try_address(span: tuple[int, int], token: str, category: str, params: CoinParams) -> Detection:
    try:
        address = decode_address(token, params)
    except CodecError:
        return Detection(span=span, token=token, category=category, valid=False)
    return Detection(span=span, token=token, category=category, valid=True, address=address)
