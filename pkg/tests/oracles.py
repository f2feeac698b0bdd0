"""Independent reference implementations used only to check the package.

Everything here is deliberately written in a different style from the
shipped codecs and graph code (string-digit accumulation, O(n^2) scans,
stdlib-only) so that a shared bug cannot hide on both sides of a check.
"""

from __future__ import annotations

import hashlib

B58_ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"

BECH32_CHARSET = "qpzry9x8gf2tvdw0s3jn54khce6mua7l"
_BECH32_GEN = [0x3B6A57B2, 0x26508E6D, 0x1EA119FA, 0x3D4233DD, 0x2A1462B3]


def b58check_encode(version_byte: int, payload: bytes) -> str:
    """Base58Check encode via repeated big-integer division on a digit list."""
    body = bytes([version_byte]) + payload
    check = hashlib.sha256(hashlib.sha256(body).digest()).digest()[:4]
    full = body + check
    n = 0
    for byte in full:
        n = n * 256 + byte
    out = ""
    while n:
        out = B58_ALPHABET[n % 58] + out
        n //= 58
    for byte in full:
        if byte:
            break
        out = "1" + out
    return out


def b58check_decode(s: str):
    """Returns ("ok", version, payload) or ("alphabet"|"checksum", None, None)."""
    n = 0
    for ch in s:
        if ch not in B58_ALPHABET:
            return ("alphabet", None, None)
        n = n * 58 + B58_ALPHABET.index(ch)
    body = bytearray()
    while n:
        body.append(n & 0xFF)
        n >>= 8
    body.reverse()
    pad = len(s) - len(s.lstrip("1"))
    full = bytes(pad) + bytes(body)
    if len(full) < 5:
        return ("checksum", None, None)
    expect = hashlib.sha256(hashlib.sha256(full[:-4]).digest()).digest()[:4]
    if full[-4:] != expect:
        return ("checksum", None, None)
    return ("ok", full[0], full[1:-4])


def _bech32_polymod(values):
    chk = 1
    for v in values:
        b = chk >> 25
        chk = (chk & 0x1FFFFFF) << 5 ^ v
        for i in range(5):
            chk ^= _BECH32_GEN[i] if ((b >> i) & 1) else 0
    return chk


def _bech32_hrp_expand(hrp):
    return [ord(x) >> 5 for x in hrp] + [0] + [ord(x) & 31 for x in hrp]


def _to_groups_of_5(program: bytes):
    bits = "".join(f"{byte:08b}" for byte in program)
    while len(bits) % 5:
        bits += "0"
    return [int(bits[i : i + 5], 2) for i in range(0, len(bits), 5)]


def bech32_encode(hrp: str, witness_version: int, program: bytes) -> str:
    """Independent bech32 segwit encoder using string-level bit packing."""
    data = [witness_version] + _to_groups_of_5(program)
    values = _bech32_hrp_expand(hrp) + data + [0, 0, 0, 0, 0, 0]
    polymod = _bech32_polymod(values) ^ 1
    checksum = [(polymod >> 5 * (5 - i)) & 31 for i in range(6)]
    return hrp + "1" + "".join(BECH32_CHARSET[d] for d in data + checksum)


def utxo_set_bruteforce(transactions):
    """Spent-marking by scanning every input for every output, O(n^2).

    ``transactions`` is an iterable with .txid, .inputs (address,
    funding_txid), .outputs (index, address, value).  Returns a set of
    (txid, output_index, address, value-as-str) tuples.
    """
    txs = list(transactions)
    unspent = set()
    for tx in txs:
        for out in tx.outputs:
            consumed = False
            for other in txs:
                for inp in other.inputs:
                    if inp.funding_txid == tx.txid and inp.address == out.address:
                        consumed = True
            if not consumed:
                unspent.add((tx.txid, out.index, out.address, str(out.value)))
    return unspent


def cluster_transitive_closure(transactions):
    """Common-input clustering via repeated merge passes until fixpoint."""
    groups: list[set[str]] = []
    seen: set[str] = set()
    for tx in transactions:
        addresses = {inp.address for inp in tx.inputs}
        seen |= addresses
        for out in tx.outputs:
            seen.add(out.address)
        if addresses:
            groups.append(set(addresses))
    changed = True
    while changed:
        changed = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if groups[i] and groups[j] and groups[i] & groups[j]:
                    groups[i] |= groups[j]
                    groups[j] = set()
                    changed = True
        groups = [g for g in groups if g]
    grouped = set().union(*groups) if groups else set()
    for address in seen - grouped:
        groups.append({address})
    return {frozenset(g) for g in groups}
