"""Address model and the per-coin network parameter table.

Version bytes and bech32 prefixes are data, not code: new coins are added
by extending the coin-parameters JSON file, never by editing the codec.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

from ..coins import Coin
from . import base58, bech32
from .errors import ChecksumMismatch, CodecError

TXID_RE = re.compile(r"^[0-9a-fA-F]{64}$")


class Encoding(str, Enum):
    BASE58CHECK = "Base58Check"
    BECH32 = "Bech32"


class AddressKind(str, Enum):
    P2PKH = "P2PKH"
    P2SH = "P2SH"
    WITNESS = "Witness"


@dataclass(frozen=True)
class Address:
    raw: str
    coin: Coin
    encoding: Encoding
    kind: AddressKind
    payload: bytes


@dataclass(frozen=True)
class TxId:
    hex: str

    def __post_init__(self) -> None:
        if not TXID_RE.match(self.hex) or self.hex != self.hex.lower():
            raise ValueError(f"not a 64-char lowercase hex txid: {self.hex!r}")

    @classmethod
    def normalize(cls, s: str) -> "TxId":
        if not TXID_RE.match(s):
            raise ValueError(f"not a 64-char hex string: {s!r}")
        return cls(s.lower())


class CoinParams:
    """Version-byte / bech32-prefix table loaded from JSON."""

    def __init__(self, table: dict[str, dict]) -> None:
        self._by_version: dict[int, tuple[Coin, AddressKind]] = {}
        self._by_hrp: dict[str, Coin] = {}
        self._table: dict[Coin, dict] = {}
        for coin_name, entry in table.items():
            coin = Coin(coin_name)
            self._table[coin] = entry
            for key, kind in (("p2pkh_version", AddressKind.P2PKH), ("p2sh_version", AddressKind.P2SH)):
                if key in entry:
                    version = int(entry[key])
                    if version in self._by_version:
                        raise ValueError(f"version byte {version} assigned twice")
                    self._by_version[version] = (coin, kind)
            if "bech32_hrp" in entry:
                hrp = entry["bech32_hrp"]
                if hrp in self._by_hrp:
                    raise ValueError(f"bech32 hrp {hrp!r} assigned twice")
                self._by_hrp[hrp] = coin

    @classmethod
    def from_file(cls, path: str | Path) -> "CoinParams":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    @classmethod
    def default(cls) -> "CoinParams":
        text = resources.files("walletsift.data").joinpath("coin_params.json").read_text("utf-8")
        return cls(json.loads(text))

    def classify_version(self, version_byte: int) -> tuple[Coin, AddressKind] | None:
        return self._by_version.get(version_byte)

    def classify_hrp(self, hrp: str) -> Coin | None:
        return self._by_hrp.get(hrp)

    def version_for(self, coin: Coin, kind: AddressKind) -> int:
        key = "p2pkh_version" if kind == AddressKind.P2PKH else "p2sh_version"
        return int(self._table[coin][key])

    def hrp_for(self, coin: Coin) -> str:
        hrp = self._table[coin].get("bech32_hrp")
        if hrp is None:
            raise UnknownVersion(f"{coin.value} has no bech32 prefix")
        return hrp


class UnknownVersion(CodecError):
    """Checksum verified but the version byte / hrp maps to no known coin."""


_BECH32_SHAPE = re.compile(r"[a-z0-9]{1,83}1[qpzry9x8gf2tvdw0s3jn54khce6mua7l]{6,}")
_BASE58_SHAPE = re.compile(f"[{base58.ALPHABET}]+")


def _looks_bech32(s: str, params: CoinParams) -> bool:
    # Known prefixes always win; otherwise only strings that cannot be
    # Base58 at all (e.g. contain '0' or 'l') are routed to bech32 so
    # that an unknown prefix still reports a useful error.
    lower = s.lower()
    if lower.startswith(tuple(h + "1" for h in params._by_hrp)):
        return True
    return bool(_BECH32_SHAPE.fullmatch(lower)) and not _BASE58_SHAPE.fullmatch(s)


def decode_address(s: str, params: CoinParams | None = None) -> Address:
    """Decode and classify a Base58Check or bech32 address string."""
    params = params or CoinParams.default()
    if _looks_bech32(s, params):
        hrp, version, program = bech32.decode(s)
        coin = params.classify_hrp(hrp)
        if coin is None:
            raise UnknownVersion(f"unknown bech32 prefix {hrp!r}")
        return Address(raw=s, coin=coin, encoding=Encoding.BECH32, kind=AddressKind.WITNESS, payload=program)
    version_byte, payload = base58.decode_check(s)
    classified = params.classify_version(version_byte)
    if classified is None:
        raise UnknownVersion(f"unknown version byte 0x{version_byte:02x}")
    coin, kind = classified
    return Address(raw=s, coin=coin, encoding=Encoding.BASE58CHECK, kind=kind, payload=payload)


def encode_address(
    coin: Coin,
    kind: AddressKind,
    payload: bytes,
    params: CoinParams | None = None,
    witness_version: int = 0,
) -> Address:
    """Encode a payload into an address; inverse of :func:`decode_address`."""
    params = params or CoinParams.default()
    if kind == AddressKind.WITNESS:
        raw = bech32.encode(params.hrp_for(coin), witness_version, payload)
        return Address(raw=raw, coin=coin, encoding=Encoding.BECH32, kind=kind, payload=payload)
    raw = base58.encode_check(params.version_for(coin, kind), payload)
    return Address(raw=raw, coin=coin, encoding=Encoding.BASE58CHECK, kind=kind, payload=payload)


__all__ = [
    "Address",
    "AddressKind",
    "ChecksumMismatch",
    "CoinParams",
    "Encoding",
    "TxId",
    "UnknownVersion",
    "decode_address",
    "encode_address",
]
