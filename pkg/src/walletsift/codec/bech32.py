"""Bech32 segwit address encoding and decoding (BIP-0173 rules)."""

from __future__ import annotations

from .errors import AlphabetError, BadWitnessProgram, ChecksumMismatch, MixedCase

CHARSET = "qpzry9x8gf2tvdw0s3jn54khce6mua7l"
_CHAR_INDEX = {c: i for i, c in enumerate(CHARSET)}
_GENERATOR = (0x3B6A57B2, 0x26508E6D, 0x1EA119FA, 0x3D4233DD, 0x2A1462B3)
MAX_LENGTH = 90


def _polymod(values: list[int]) -> int:
    chk = 1
    for value in values:
        top = chk >> 25
        chk = ((chk & 0x1FFFFFF) << 5) ^ value
        for i in range(5):
            if (top >> i) & 1:
                chk ^= _GENERATOR[i]
    return chk


def _hrp_expand(hrp: str) -> list[int]:
    return [ord(c) >> 5 for c in hrp] + [0] + [ord(c) & 31 for c in hrp]


def _convertbits(data: list[int], frombits: int, tobits: int, pad: bool) -> list[int]:
    acc = 0
    bits = 0
    out = []
    maxv = (1 << tobits) - 1
    for value in data:
        acc = (acc << frombits) | value
        bits += frombits
        while bits >= tobits:
            bits -= tobits
            out.append((acc >> bits) & maxv)
    if pad:
        if bits:
            out.append((acc << (tobits - bits)) & maxv)
    elif bits >= frombits or ((acc << (tobits - bits)) & maxv):
        raise BadWitnessProgram("invalid bit-group padding")
    return out


def encode(hrp: str, witness_version: int, program: bytes) -> str:
    """Encode a segwit address; inverse of :func:`decode`."""
    data = [witness_version] + _convertbits(list(program), 8, 5, pad=True)
    values = _hrp_expand(hrp) + data
    polymod = _polymod(values + [0, 0, 0, 0, 0, 0]) ^ 1
    checksum = [(polymod >> 5 * (5 - i)) & 31 for i in range(6)]
    return hrp + "1" + "".join(CHARSET[d] for d in data + checksum)


def decode(s: str) -> tuple[str, int, bytes]:
    """Decode a bech32 segwit address; returns (hrp, witness_version, program).

    Uppercase-only input is accepted (decoded as lowercase); mixed case is
    rejected.  The BCH checksum must verify and the witness program must
    satisfy the segwit size rules (v0 programs are 20 or 32 bytes).
    """
    if len(s) > MAX_LENGTH:
        raise AlphabetError(f"longer than {MAX_LENGTH} characters")
    if any(ord(c) < 33 or ord(c) > 126 for c in s):
        raise AlphabetError("character out of printable range")
    if s.lower() != s and s.upper() != s:
        raise MixedCase("mixed-case bech32 string")
    s = s.lower()
    sep = s.rfind("1")
    if sep < 1 or sep + 7 > len(s):
        raise AlphabetError("missing or misplaced separator")
    hrp, data_part = s[:sep], s[sep + 1 :]
    try:
        data = [_CHAR_INDEX[c] for c in data_part]
    except KeyError:
        raise AlphabetError("character not in bech32 charset") from None
    if _polymod(_hrp_expand(hrp) + data) != 1:
        raise ChecksumMismatch(f"bech32 checksum does not verify: {s!r}")
    payload = data[:-6]
    if not payload:
        raise BadWitnessProgram("empty witness payload")
    witness_version = payload[0]
    if witness_version > 16:
        raise BadWitnessProgram(f"witness version {witness_version} out of range")
    program = bytes(_convertbits(payload[1:], 5, 8, pad=False))
    if not 2 <= len(program) <= 40:
        raise BadWitnessProgram(f"witness program of {len(program)} bytes")
    if witness_version == 0 and len(program) not in (20, 32):
        raise BadWitnessProgram("v0 witness program must be 20 or 32 bytes")
    return hrp, witness_version, program
