"""Base58Check encoding and decoding (Bitcoin alphabet)."""

from __future__ import annotations

import hashlib

from .errors import AlphabetError, ChecksumMismatch

ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"
_CHAR_INDEX = {c: i for i, c in enumerate(ALPHABET)}


def _double_sha256(data: bytes) -> bytes:
    return hashlib.sha256(hashlib.sha256(data).digest()).digest()


def b58encode(data: bytes) -> str:
    """Encode raw bytes; leading zero bytes become leading '1's."""
    pad = 0
    for byte in data:
        if byte == 0:
            pad += 1
        else:
            break
    num = int.from_bytes(data, "big")
    digits = []
    while num > 0:
        num, rem = divmod(num, 58)
        digits.append(ALPHABET[rem])
    return "1" * pad + "".join(reversed(digits))


def b58decode(s: str) -> bytes:
    """Decode to raw bytes; leading '1's become leading zero bytes."""
    num = 0
    for ch in s:
        try:
            num = num * 58 + _CHAR_INDEX[ch]
        except KeyError:
            raise AlphabetError(f"character {ch!r} not in base58 alphabet") from None
    pad = 0
    for ch in s:
        if ch == "1":
            pad += 1
        else:
            break
    body = num.to_bytes((num.bit_length() + 7) // 8, "big") if num else b""
    return b"\x00" * pad + body


def encode_check(version_byte: int, payload: bytes) -> str:
    """Base58Check: version byte + payload + 4-byte double-SHA-256 checksum."""
    if not 0 <= version_byte <= 0xFF:
        raise ValueError(f"version byte out of range: {version_byte}")
    body = bytes([version_byte]) + payload
    return b58encode(body + _double_sha256(body)[:4])


def decode_check(s: str) -> tuple[int, bytes]:
    """Decode Base58Check; returns (version_byte, payload).

    Raises AlphabetError for illegal characters and ChecksumMismatch when
    the trailing 4 bytes disagree with the double-SHA-256 of the rest.
    """
    raw = b58decode(s)
    if len(raw) < 5:
        raise ChecksumMismatch(f"too short for a checksummed payload: {s!r}")
    body, checksum = raw[:-4], raw[-4:]
    if _double_sha256(body)[:4] != checksum:
        raise ChecksumMismatch(f"checksum does not verify: {s!r}")
    return body[0], body[1:]
